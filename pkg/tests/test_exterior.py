from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given

from phiplanes.exterior import (AlternatingForm, Metric, Multivector, DegenerateMetricError,
                                dumps, evaluate, form_from_json, form_to_json, hodge_star, inner,
                                interior_product, lie_act, loads, pullback, restrict, wedge)
from phiplanes.g2 import R0, R1, R2, R3, X1, X2, X3, cayley_omegas, cayley_phi, k_generators

from helpers import any_form, forms, matrices, rand_form, rationals, vectors

N = 7


def e(*axes, c=1):
    return AlternatingForm.basis(N, axes, c)


def test_wedge_basics():
    assert wedge(e(X1), e(X2)) == e(X1, X2)
    assert wedge(e(X2), e(X1)) == -e(X1, X2)
    w1 = cayley_omegas()[0]
    assert wedge(w1, w1) == e(R0, X1, X2, X3, c=2) * -1 * -1  # dr0^dx1^dx2^dx3 in sorted order
    assert wedge(w1, w1).coefficient((X1, X2, X3, R0)) == -2


def test_wedge_overflow_gives_zero():
    a = AlternatingForm.volume(3)
    assert wedge(a, AlternatingForm.basis(3, (0,))).is_zero()


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        wedge(AlternatingForm.basis(3, (0,)), AlternatingForm.basis(4, (0,)))


@given(any_form(N), any_form(N))
def test_graded_commutativity(a, b):
    assert wedge(a, b) == wedge(b, a) * (-1) ** (a.degree * b.degree)


@given(any_form(6, 4), any_form(6, 4), any_form(6, 4))
def test_associativity(a, b, c):
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@given(forms(N, 2), forms(N, 2), forms(N, 3), rationals)
def test_bilinearity(a, b, c, q):
    assert wedge(a * q + b, c) == wedge(a, c) * q + wedge(b, c)


def test_interior_examples():
    assert interior_product([1, 0, 0, 0, 0, 0, 0], e(X1, X2)) == e(X2)
    w1 = cayley_omegas()[0]
    v = [0] * 7
    v[R1] = 1
    assert interior_product(v, cayley_phi()) == w1 - e(R2, R3)
    with pytest.raises(ValueError):
        interior_product(v, AlternatingForm.one(N))


@given(vectors(N), forms(N, 2), forms(N, 3))
def test_interior_antiderivation(v, a, b):
    lhs = interior_product(v, wedge(a, b))
    rhs = wedge(interior_product(v, a), b) + wedge(a, interior_product(v, b)) * (-1) ** a.degree
    assert lhs == rhs


@given(vectors(N), forms(N, 3))
def test_interior_twice_vanishes(v, a):
    assert interior_product(v, interior_product(v, a)).is_zero()


@given(vectors(N), vectors(N), forms(N, 2))
def test_evaluation_is_alternating(u, v, a):
    assert evaluate(a, [u, v]) == -evaluate(a, [v, u])
    assert evaluate(interior_product(u, a), [v]) == a(u, v)


def test_pullback_examples():
    phi = cayley_phi()
    a = e(X1, X2) + e(R1, R3, c=Fraction(2, 3))
    I7 = np.eye(7, dtype=int).astype(object)
    assert pullback(I7, a) == a
    assert restrict(phi, [[1 if j == i else 0 for j in range(7)] for i in (X1, X2, X3)]).is_zero()
    assert restrict(phi, [[1 if j == i else 0 for j in range(7)] for i in (R1, R2, R3)]) == \
        -AlternatingForm.volume(3)


@given(matrices(5, 4), matrices(4, 3), forms(5, 2))
def test_pullback_functorial(L, M, a):
    assert pullback(L @ M, a) == pullback(M, pullback(L, a))


@given(matrices(4, 4), forms(4, 2), forms(4, 1))
def test_pullback_is_an_algebra_map(L, a, b):
    assert pullback(L, wedge(a, b)) == wedge(pullback(L, a), pullback(L, b))


def test_hodge_examples():
    assert hodge_star(AlternatingForm.one(N)) == AlternatingForm.volume(N)
    assert hodge_star(AlternatingForm.volume(N)) == AlternatingForm.one(N)
    with pytest.raises(DegenerateMetricError):
        Metric(np.array([[1, 2], [2, 1]], dtype=object))
    with pytest.raises(DegenerateMetricError):
        Metric(np.array([[1, 1], [0, 1]], dtype=object))


@given(any_form(N))
def test_hodge_involution_sign(a):
    assert hodge_star(hodge_star(a)) == a * (-1) ** (a.degree * (N - a.degree))


@given(any_form(N))
def test_hodge_defining_identity(a):
    assert wedge(a, hodge_star(a)) == AlternatingForm.volume(N, inner(a, a))
    assert inner(a, a) >= 0 and (inner(a, a) == 0) == a.is_zero()


def test_hodge_with_diagonal_metric():
    g = Metric(np.diag([Fraction(4), Fraction(1), Fraction(1)]).astype(object))
    # *dx0 = (sqrt det g) g^{00} dx1^dx2 = 2 * 1/4
    assert hodge_star(AlternatingForm.basis(3, (0,)), g) == AlternatingForm.basis(3, (1, 2), Fraction(1, 2))
    assert hodge_star(AlternatingForm.basis(3, (0,)), g.with_orientation(-1)) == \
        AlternatingForm.basis(3, (1, 2), Fraction(-1, 2))


@given(any_form(N))
def test_lie_act_identity_scales_by_degree(a):
    I7 = np.eye(7, dtype=int).astype(object)
    assert lie_act(I7, a) == a * a.degree


@given(matrices(5, 5), matrices(5, 5), forms(5, 2))
def test_lie_act_bracket(A, B, a):
    # pullback reverses composition, so the induced action is an anti-homomorphism
    lhs = lie_act(A @ B - B @ A, a)
    rhs = lie_act(B, lie_act(A, a)) - lie_act(A, lie_act(B, a))
    assert lhs == rhs


def test_k_generators_annihilate_phi():
    for A in k_generators():
        assert lie_act(A, cayley_phi()).is_zero()


@pytest.mark.parametrize("seed", range(5))
def test_lie_act_finite_difference(seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(7, 7))
    a = rand_form(rng, 7, 3, terms=8).as_float()
    h = 1e-6
    fd = (pullback(scipy.linalg.expm(h * A), a) - a) / h
    assert (fd - lie_act(A, a)).max_abs() < 1e-4


@given(any_form(N, 6))
def test_json_roundtrip(a):
    assert loads(dumps(a)) == a
    assert form_from_json(form_to_json(a)) == a


@pytest.mark.parametrize("bad", [
    {"dim": 3, "degree": 1},
    {"dim": 3, "degree": 1, "terms": [{"axes": [3], "coeff": "1"}]},
    {"dim": 3, "degree": 2, "terms": [{"axes": [1, 0], "coeff": "1"}]},
    {"dim": 3, "degree": 1, "terms": [{"axes": [0], "coeff": "0.5"}]},
    {"dim": 3, "degree": 1, "terms": [{"axes": [0], "coeff": 1}]},
    {"dim": 3, "degree": 1, "terms": [{"axes": [0], "coeff": "1"}, {"axes": [0], "coeff": "2"}]},
    {"dim": True, "degree": 1, "terms": []},
    [],
])
def test_json_rejects(bad):
    with pytest.raises(ValueError):
        form_from_json(bad)


def test_multivector_plucker():
    m = Multivector.from_vectors([[1, 1, 0], [0, 1, 0]])
    assert m == Multivector.basis(3, (0, 1))
    with pytest.raises(TypeError):
        wedge(m, AlternatingForm.basis(3, (2,)))


def test_float_mode():
    a = (e(X1, X2) * 0.5).as_float()
    assert a.isclose(e(X1, X2, c=Fraction(1, 2)), 1e-12)
    assert not a.isclose(e(X1, X2), 1e-12)
