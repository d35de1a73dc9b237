from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from phiplanes.exterior import AlternatingForm, pullback, wedge
from phiplanes.g2 import R0, R1, R2, R3, X1, X2, X3, cayley_phi
from phiplanes.torsion import (GENERATORS, IdentityFailure, JacobiFailure, dga_build,
                               example2_deck_map, flat_deck_map, relabel_consistency,
                               su2_constants, verify_example2, verify_flat_model)

from helpers import rand_form

SU2 = dga_build(7, su2_constants(7, R1), names=GENERATORS)
SO3_X = dga_build(7, {**su2_constants(7, X1, 1), **su2_constants(7, R1, 2)})


def e(*axes, c=1):
    return AlternatingForm.basis(7, axes, c)


def test_maurer_cartan_rule():
    assert SU2.d(e(R1)) == e(R2, R3, c=-2)
    assert SU2.d(e(R2)) == e(R1, R3, c=2)  # -2 r3^r1
    assert SU2.d(e(X1)).is_zero() and SU2.d(e(R0)).is_zero()
    flipped = dga_build(7, su2_constants(7, R1), mc_sign=-1)
    assert flipped.d(e(R1)) == e(R2, R3, c=2)


def test_d_of_functions_and_top_degree():
    assert SU2.d(AlternatingForm.one(7)).is_zero()
    assert SU2.d(AlternatingForm.volume(7)).is_zero()


def test_jacobi_failure():
    with pytest.raises(JacobiFailure) as err:
        dga_build(5, {(0, 1, 2): 1, (0, 2, 1): -1, (1, 3, 4): 1, (1, 4, 3): -1})
    assert err.value.generator == 0
    assert err.value.value == AlternatingForm.basis(5, (2, 3, 4))


def test_non_antisymmetric_constants_rejected():
    with pytest.raises(ValueError):
        dga_build(3, {(0, 1, 2): 1})


@pytest.mark.parametrize("algebra", [SU2, SO3_X], ids=["su2", "su2xsu2"])
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_d_squared_zero(algebra, seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(0, 6))
    a = rand_form(rng, 7, k)
    assert algebra.d(algebra.d(a)).is_zero()


@given(seed=st.integers(0, 2 ** 32 - 1))
def test_leibniz(seed):
    rng = np.random.default_rng(seed)
    p, q = int(rng.integers(0, 4)), int(rng.integers(0, 4))
    a, b = rand_form(rng, 7, p), rand_form(rng, 7, q)
    A = SO3_X
    lhs = A.d(wedge(a, b))
    rhs = wedge(A.d(a), b) + wedge(a, A.d(b)) * (-1) ** p
    assert lhs == rhs


def test_star_star_sign():
    # on a 7-dimensional Riemannian space ** = +1
    rng = np.random.default_rng(0)
    for k in range(8):
        a = rand_form(rng, 7, k)
        assert SU2.star(SU2.star(a)) == a


def test_flat_model():
    r = verify_flat_model()
    assert r.dphi_zero and r.dstar_zero and r.stable_positive
    assert all(r.deck_invariant.values())
    assert r.ok


def test_deck_maps_are_automorphisms():
    assert SU2.is_automorphism(example2_deck_map())
    for L in (flat_deck_map(), example2_deck_map()):
        assert pullback(L, cayley_phi()) == cayley_phi()
    # any t-element permuting (r1, r2, r3) up to det sign respects the su(2) relations
    assert SU2.is_automorphism(flat_deck_map())


def test_example2_computed_identity():
    # d phi = 2 *phi + 4 *chi3 with constants 2 eps; the ratio matches, the scale does not
    r = verify_example2()
    assert r.fit == [2, 4]
    assert r.dphi_hat_zero
    assert r.star_chi3_as_stated
    assert r.star_chi3 == e(R0, X1, X2, X3, c=Fraction(-1, 2))  # -1/2 dr0^dx123
    assert r.balancing_scale == Fraction(1, 2)
    assert all(r.deck_invariant.values()) and r.deck_automorphism
    assert [a["residualNorm2"] for a in r.attempts] == ["27/2", "75/2", "75/2", "27/2"]


def test_example2_balances_at_half_scale():
    r = verify_example2(Fraction(1, 2))
    assert r.identity_holds and r.ok
    assert r.fit == [Fraction(1, 2), 1]


def test_example2_strict_raises():
    with pytest.raises(IdentityFailure) as err:
        verify_example2(strict=True)
    assert not err.value.residual.is_zero()
    verify_example2(Fraction(1, 2), strict=True)


def test_example2_four_form_reading():
    r = verify_example2()
    assert "degree" in r.readings["fourForm"]


def test_relabel_consistency():
    assert relabel_consistency()
    assert relabel_consistency(Fraction(1, 2))


def test_report_json():
    import json
    js = verify_example2().to_json()
    assert json.dumps(js)
    assert js["ok"] is False and js["balancingScale"] == "1/2"
    assert json.dumps(verify_flat_model().to_json())
