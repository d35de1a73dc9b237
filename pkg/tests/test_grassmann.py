import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from phiplanes import linalg
from phiplanes.exterior import Metric
from phiplanes.g2 import (R0, R1, R2, R3, X1, X2, X3, g2_data, is_structure_preserving, t_element,
                          z2_element)
from phiplanes.grassmann import (DegeneratePlaneError, NotReversible, Plane, classify_plane,
                                 coordinate_plane, four_plane_path, four_plane_path_identity,
                                 local_model_check, orbit_invariant, orthonormal_basis,
                                 rational_angle_trig, reversal_witness, three_plane_path)
from phiplanes.numeric import NumericContext, QuadraticSurd

from helpers import PYTHAGOREAN, givens, rand_matrix, rand_vector


def unit(i):
    return [1 if j == i else 0 for j in range(7)]


def rand_plane(rng, k):
    while True:
        try:
            return Plane([rand_vector(rng, 7) for _ in range(k)])
        except DegeneratePlaneError:
            continue


def rand_g2_rational(rng):
    """Exact G2 element from t-elements, the Z2 element and a rational rotation."""
    g = linalg.identity(7)
    for _ in range(3):
        i, j = rng.choice(3, size=2, replace=False)
        c, s = PYTHAGOREAN[int(rng.integers(len(PYTHAGOREAN)))]
        g = g @ t_element(givens(3, int(i), int(j), c, s))
    if rng.integers(2):
        g = g @ z2_element()
    return g


def test_orthonormal_basis_example():
    P = Plane([[1, 1, 0, 0, 0, 0, 0], unit(1)])
    Q, norms = orthonormal_basis(P)
    assert norms == [2, Fraction(1, 2)]
    assert Q.basis[1] == (Fraction(-1, 2), Fraction(1, 2), 0, 0, 0, 0, 0)
    assert Q == P


def test_orthonormal_basis_float():
    P = Plane([[1.0, 1.0, 0, 0, 0, 0, 0], unit(1)])
    Q, norms = orthonormal_basis(P)
    M = np.array(Q.basis, dtype=float)
    assert np.allclose(M @ M.T, np.eye(2))


def test_degenerate_plane():
    with pytest.raises(DegeneratePlaneError):
        Plane([unit(0), unit(0)])
    with pytest.raises(DegeneratePlaneError):
        orthonormal_basis(Plane([[1, 0], [0, 1]]), Metric([[0, 1], [1, 0]], check=False))


def test_named_classifications():
    d = g2_data()
    s6, c6 = rational_angle_trig(Fraction(1, 6))
    cases = [
        (coordinate_plane((X1, X2, X3)), "phi-plane", 0),
        (coordinate_plane((R1, R2, R3)), "special-", -1),
        (three_plane_path(s6, c6), "generic", Fraction(1, 2)),
        (three_plane_path(1, 0), "special+", 1),
        (coordinate_plane((R0, X1, X2, X3)), "special+", 1),
        (coordinate_plane((R0, R1, R2, R3)), "phi-plane", 0),
    ]
    for P, label, s in cases:
        cls = classify_plane(P, d)
        assert cls.label == label and cls.s == s, (P, cls)


def test_three_plane_path_values():
    # s(theta) = sin(theta) along the path
    for q in (Fraction(1, 6), Fraction(1, 4), Fraction(1, 3), Fraction(-1, 4)):
        s, c = rational_angle_trig(q)
        assert orbit_invariant(three_plane_path(s, c)) == s


def test_surd_invariant_is_exact():
    s, c = rational_angle_trig(Fraction(1, 4))
    val = orbit_invariant(three_plane_path(s, c))
    assert isinstance(val, QuadraticSurd)
    assert classify_plane(three_plane_path(s, c)).kind == "generic"


def test_reversal_negates_s():
    s, c = rational_angle_trig(Fraction(1, 6))
    P = three_plane_path(s, c)
    assert orbit_invariant(P.reversed()) == -orbit_invariant(P)
    assert classify_plane(P.unoriented()).s == Fraction(1, 2)
    assert classify_plane(coordinate_plane((R1, R2, R3), oriented=False)).label == "special"


def test_rational_angle_table():
    for q in (Fraction(k, 12) for k in range(-24, 25)):
        s, c = rational_angle_trig(q)
        assert abs(float(s) - np.sin(float(q) * np.pi)) < 1e-12
        assert abs(float(c) - np.cos(float(q) * np.pi)) < 1e-12
        assert s * s + c * c == 1 or not isinstance(s, (int, Fraction, QuadraticSurd))


@pytest.mark.parametrize("q", [0, Fraction(1, 6), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2),
                               Fraction(2, 3), Fraction(-1, 6), Fraction(5, 4)])
def test_four_plane_path_identity(q):
    s, c = rational_angle_trig(q)
    lhs, rhs = four_plane_path_identity(s, c)
    assert lhs == rhs
    if s != 0:
        expected = "special+" if s == 1 else ("special-" if s == -1 else "generic")
        assert classify_plane(four_plane_path(s, c)).label == expected


def test_reversal_witness_standard():
    d = g2_data()
    P = coordinate_plane((X1, X2, X3))
    w = reversal_witness(P, d)
    assert (w == z2_element()).all()
    assert is_structure_preserving(w, d.phi)
    assert P.transform(w) == P.reversed()
    assert P.transform(w) != P


def test_reversal_witness_four_plane():
    d = g2_data()
    P = coordinate_plane((R0, R1, R2, R3))
    w = reversal_witness(P, d)
    assert is_structure_preserving(w, d.phi)
    assert P.transform(w) == P.reversed()


@pytest.mark.parametrize("seed", range(5))
def test_reversal_witness_moved_phi_plane(seed):
    d = g2_data()
    rng = np.random.default_rng(seed)
    g = rand_g2_rational(rng)
    P = coordinate_plane((X1, X2, X3)).transform(g)
    w = reversal_witness(P, d)
    assert is_structure_preserving(w, d.phi)
    assert P.transform(w) == P.reversed()


def test_reversal_refused():
    s6, c6 = rational_angle_trig(Fraction(1, 6))
    for P in (three_plane_path(1, 0), three_plane_path(s6, c6), coordinate_plane((R0, X1, X2, X3))):
        with pytest.raises(NotReversible):
            reversal_witness(P)


def test_local_model():
    r = local_model_check()
    assert r.rank == 4 and r.ok, r.failures
    assert json.dumps(r.to_json())


@given(st.integers(0, 2 ** 32 - 1))
def test_s_invariant_under_g2(seed):
    rng = np.random.default_rng(seed)
    k = 3 if rng.integers(2) else 4
    P = rand_plane(rng, k)
    g = rand_g2_rational(rng)
    assert np.isclose(float(orbit_invariant(P.transform(g))), float(orbit_invariant(P)), atol=1e-12)


@given(st.integers(0, 2 ** 32 - 1))
def test_s_basis_independent(seed):
    rng = np.random.default_rng(seed)
    P = rand_plane(rng, 3)
    while True:
        A = rand_matrix(rng, 3, 3)
        d = linalg.det(A)
        if d != 0:
            break
    rebased = Plane([tuple(sum(A[i, j] * np.array(P.basis[j], dtype=object) for j in range(3)))
                     for i in range(3)])
    s0, s1 = float(orbit_invariant(P)), float(orbit_invariant(rebased))
    assert np.isclose(s1, s0 if d > 0 else -s0, atol=1e-12)
    assert -1 - 1e-12 <= s0 <= 1 + 1e-12


@given(st.integers(0, 2 ** 32 - 1))
def test_orientation_reversing_determinant_negates_s(seed):
    rng = np.random.default_rng(seed)
    P = rand_plane(rng, 4)
    Q = Plane([tuple(-x for x in P.basis[0])] + list(P.basis[1:]))
    assert np.isclose(float(orbit_invariant(Q)), -float(orbit_invariant(P)), atol=1e-12)


def test_float_plane_in_g2_orbit():
    rng = np.random.default_rng(7)
    A = sum(rng.normal() * np.asarray(X, dtype=float) for X in g2_data().algebra)
    g = linalg.expm(A)
    P = coordinate_plane((X1, X2, X3)).transform(g)
    cls = classify_plane(P, ctx=NumericContext(1e-9))
    assert cls.kind == "phi-plane"
    w = reversal_witness(P, ctx=NumericContext(1e-9))
    assert is_structure_preserving(w, g2_data().phi.as_float(), NumericContext(1e-9))


def test_classify_rejects_wrong_rank():
    with pytest.raises(ValueError):
        classify_plane(coordinate_plane((X1, X2)))


def test_plane_json_roundtrip():
    s, c = rational_angle_trig(Fraction(1, 6))
    P = Plane([[1, Fraction(1, 2), 0, 0, 0, 0, 0], unit(3), unit(5)])
    assert Plane.from_json(json.loads(json.dumps(P.to_json()))) == P
    Q = Plane.from_json({"dim": 7, "vectors": [unit(0), unit(1), unit(2)], "oriented": False})
    assert not Q.oriented
    for bad in ({"dim": 7}, {"dim": "7", "vectors": []}, {"dim": 7, "vectors": [[1, 2]]},
                {"dim": 7, "vectors": [unit(0)], "oriented": "yes"}, [1, 2]):
        with pytest.raises(ValueError):
            Plane.from_json(bad)


def test_plane_equality_respects_orientation():
    P = coordinate_plane((X1, X2, X3))
    assert P.reversed() != P
    assert P.reversed().unoriented() == P.unoriented()
    assert P.contains(coordinate_plane((X1, X3)))
