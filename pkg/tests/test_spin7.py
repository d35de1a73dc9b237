import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg

from phiplanes import linalg, spin7
from phiplanes.exterior import hodge_star, lie_act, wedge
from phiplanes.g2 import annihilator_algebra
from phiplanes.numeric import NumericContext, QuadraticSurd
from phiplanes.suites import random_admissible

S = spin7.spin7_data()


def test_cayley_form_shape():
    assert len(S.phi0) == 14
    assert S.pairing == spin7.DEFAULT_PAIRING and S.searched == 1
    assert S.orientation == 1
    assert set(S.phi0.mask_terms().values()) <= {1, -1}


def test_cayley_form_invariants():
    assert hodge_star(S.phi0, S.metric) == S.phi0
    assert wedge(S.phi0, S.phi0) == S.volume * 14
    assert spin7.stabilizer_dimension() == 21


def test_generators_annihilate():
    for E in spin7.homogeneous_generators():
        assert lie_act(E, S.phi0).is_zero()
        assert (E == -E.T).all()


def test_generator_brackets():
    # E_1, E_2, E_3 close into so(3) and commute with E_0
    E0, E1, E2, E3 = spin7.homogeneous_generators()
    br = lambda A, B: A @ B - B @ A
    for E in (E1, E2, E3):
        assert (br(E0, E) == 0).all()
    span = [E.ravel() for E in (E1, E2, E3)]
    assert linalg.span_contains(span, [br(E1, E2).ravel(), br(E2, E3).ravel(), br(E3, E1).ravel()])


def test_circle_period():
    E0 = spin7.homogeneous_generators()[0].astype(float)
    assert np.allclose(linalg.expm(math.pi * E0), -np.eye(8), atol=1e-12)
    assert np.allclose(linalg.expm(0.3 * E0), scipy.linalg.expm(0.3 * E0), atol=1e-12)


def test_sphere_point_validation():
    with pytest.raises(spin7.NotUnit):
        spin7.SpherePoint([1, 1, 0, 0, 0, 0, 0, 0])
    with pytest.raises(ValueError):
        spin7.SpherePoint([1, 0, 0])
    p = spin7.SpherePoint([Fraction(3, 5), Fraction(4, 5), 0, 0, 0, 0, 0, 0])
    assert p.exact


@pytest.mark.parametrize("flip", [False, True])
def test_sphere_frame_orientation(flip):
    rng = np.random.default_rng(2)
    for _ in range(5):
        p = spin7.SpherePoint.random(rng)
        F = spin7.sphere_frame(p, flip)
        assert np.allclose(F.T @ F, np.eye(7), atol=1e-12)
        assert np.allclose(F.T @ p.array(), 0, atol=1e-12)
        d = np.linalg.det(np.column_stack([p.array(), F]))
        assert np.isclose(d, -1 if flip else 1)


def test_cone_consistency_exact():
    e0 = [1, 0, 0, 0, 0, 0, 0, 0]
    assert spin7.cone_consistency_check(e0) == 0
    x = [Fraction(3, 5), 0, 0, Fraction(4, 5), 0, 0, 0, 0]
    assert spin7.cone_consistency_check(x) == 0
    flipped = spin7.cone_consistency_check(e0, flip=True)
    assert flipped == 2 * QuadraticSurd(0, 1, 7) or abs(float(flipped) - 2 * math.sqrt(7)) < 1e-12


def test_cone_consistency_random():
    rng = np.random.default_rng(4)
    for _ in range(10):
        assert spin7.cone_consistency_check(spin7.SpherePoint.random(rng)) < 1e-12


def test_sphere_metric_is_round():
    assert spin7.sphere_metric_check([1, 0, 0, 0, 0, 0, 0, 0]).is_identity
    g = spin7.sphere_metric_check([0, Fraction(3, 5), 0, 0, 0, 0, Fraction(4, 5), 0])
    assert g.is_identity and g.orientation == 1


def test_sphere_form_is_g2_type():
    phi = spin7.sphere_three_form([0, 1, 0, 0, 0, 0, 0, 0])
    assert len(annihilator_algebra(phi)) == 14


def test_obstruction_sample_value():
    r = 1 / math.sqrt(3)
    num, closed = spin7.obstruction_value(r, r, r)
    assert abs(num - 4 / math.sqrt(33)) < 1e-12 and abs(closed - 4 / math.sqrt(33)) < 1e-12


def test_obstruction_exact_point():
    num, closed = spin7.obstruction_value(Fraction(1, 3), Fraction(2, 3), Fraction(2, 3))
    # closed side stays exact; the determinant side mixes radicands 17 and 2 and goes float
    assert closed == QuadraticSurd(0, Fraction(8, 51), 17)
    assert abs(float(num) - float(closed)) < 1e-14


def test_obstruction_random():
    rng = np.random.default_rng(9)
    for _ in range(100):
        x0, x1, x6 = random_admissible(rng)
        num, closed = spin7.obstruction_value(x0, x1, x6)
        assert abs(num - closed) <= 1e-10


def test_obstruction_branches():
    tag = spin7.classify_orbit_point(0, 1, 0)
    assert tag.kind == "PhiOrbit" and tag.branches == ("x0=0", "x6=0")
    tag = spin7.classify_orbit_point(0, Fraction(1, 2), math.sqrt(3) / 2, NumericContext(1e-9))
    assert tag.branches == ("x0=0", "3x1^2=x6^2")
    tag = spin7.classify_orbit_point(math.sqrt(5) / 3, 1 / 3, math.sqrt(3) / 3, NumericContext(1e-9))
    assert tag.kind == "PhiOrbit" and tag.branches == ("3x1^2=x6^2",)
    tag = spin7.classify_orbit_point(Fraction(1, 3), Fraction(2, 3), Fraction(2, 3))
    assert tag.kind == "Generic" and tag.branches == ()


def test_obstruction_errors():
    with pytest.raises(spin7.NotUnit):
        spin7.obstruction_value(1, 1, 0)
    with pytest.raises(spin7.DegenerateTangentFrame):
        spin7.obstruction_value(1, 0, 0)


def test_orbit_sample_quadrics():
    r = spin7.orbit_sample(count=50, seed=1)
    assert len(r.points) == 50
    assert r.sphere <= 1e-9 and max(r.quadrics) <= 1e-9 and max(r.linear) <= 1e-9


def test_orbit_sample_other_point():
    r = spin7.orbit_sample([0, 0.6, 0, 0, 0, 0, 0.8, 0], count=20)
    assert r.quadrics is None and r.sphere <= 1e-9


def test_orbit_sample_leaves_quadrics_off_base_point():
    y = linalg.expm(spin7.generator_matrix(0.1, 0.2, 0.3, 0.4)) @ np.array(
        [0.6, 0.8, 0, 0, 0, 0, 0, 0])
    q, lin = spin7.quadric_residuals(y)
    assert max(q + lin) > 1e-3


def test_nearly_parallel():
    res = spin7.nearly_parallel_check(count=3, seed=5)
    assert max(res) <= 1e-3
