import numpy as np
import pytest

from phiplanes import cartan, linalg
from phiplanes.exterior import lie_act, restrict
from phiplanes.g2 import R0, R1, R2, R3, X1, X2, X3, g2_data, z2_element
from phiplanes.grassmann import coordinate_plane
from phiplanes.torsion import flat_deck_map

C = [0, 0, 0, 1, 5, 15, 28, 35]


@pytest.fixture(scope="module")
def report():
    return cartan.polar_extension_report()


@pytest.fixture(scope="module")
def generic_report():
    return cartan.polar_extension_report(cartan.adapted_flag([1, 1, 0], [0, 0, 1]), seed=3)


def test_codim_standard_and_generic():
    assert cartan.codim_sequence(cartan.standard_flag()) == C
    assert cartan.codim_sequence(cartan.adapted_flag([1, 1, 0], [0, 0, 1])) == C
    assert cartan.codim_sequence(cartan.adapted_flag([2, -1, 3], [1, 0, 1])) == C


def test_codim_rebased(report):
    rng = np.random.default_rng(11)
    for _ in range(3):
        assert cartan.codim_sequence(cartan.standard_flag().rebased(rng)) == C


def test_reduced_tableau_definition():
    d = g2_data()
    F = cartan.standard_flag().plane(5)
    h = cartan.reduced_tableau(F)
    assert len(h) == 49 - C[5]
    for A in h:
        for delta in (d.phi, d.phi_dual, d.volume):
            if delta.degree <= 5:
                assert restrict(lie_act(A, delta), F.basis).is_zero()


def test_report_numbers(report):
    js = report.to_json()
    assert js["c"] == C
    assert js["dimH_F"] == [56, 56, 56, 55, 51, 41, 28, 21]
    assert js["dimH_S"] == [42, 42, 42, 41, 37, 27, 14, 7]
    assert js["r"] == [41, 40, 39, 37, 32, 21, 7, -1]
    assert js["r4"] == 32
    assert js["zdims"] == [10, 21, 35]
    assert js["zcodims"] == [32, 21, 7]
    assert js["codimEqualsRank"] == [True, True, True]
    assert js["cartanSum"] == 49 == js["integralCodim"]
    assert js["nested"] and js["containsG2"]


def test_polar_spaces_measured(report, generic_report):
    for r in (report, generic_report):
        assert r.polar_dim_F_measured == r.polar_dim_F
        assert r.polar_dim_F_second_graph == r.polar_dim_F
    assert generic_report.c == C


def test_h7_is_g2(report):
    h7 = report.h_bases[7]
    assert len(h7) == 14
    assert linalg.span_contains([A.ravel() for A in h7], [A.ravel() for A in g2_data().algebra])


def test_integral_graphs():
    rng = np.random.default_rng(5)
    graphs = cartan.integral_graph_space()
    assert len(graphs) == 7 * 49 - 49
    ell = cartan.random_integral_graph(rng)
    # the graph is not g2-valued
    alg = [A.ravel() for A in g2_data().algebra]
    assert not all(linalg.span_contains(alg, [L.ravel()]) for L in ell)


def test_nonconforming_flag():
    # F_3 = span(x1, x2, r1) is not a phi-plane
    vecs = [[1 if j == a else 0 for j in range(7)] for a in (X1, X2, R1, X3, R0, R2, R3)]
    flag = cartan.Flag(vecs)
    assert not cartan.flag_conformance(flag)[0]
    with pytest.raises(cartan.NonConformingFlag):
        cartan.polar_extension_report(flag)


def test_ad_invariance():
    std, gen = cartan.standard_flag(), cartan.adapted_flag([1, 1, 0], [0, 0, 1])
    swap = flat_deck_map()
    for k in range(4, 8):
        assert cartan.ad_invariant(cartan.reduced_tableau(std.plane(k)), z2_element())
        assert cartan.ad_invariant(cartan.reduced_tableau(gen.plane(k)), z2_element())
        assert cartan.ad_invariant(cartan.reduced_tableau(gen.plane(k)), swap)
    # r1 is not fixed by the swap, so h_5 of the standard flag moves
    assert not cartan.ad_invariant(cartan.reduced_tableau(std.plane(5)), swap)


def test_flag_constructors():
    f = cartan.standard_flag()
    g = cartan.Flag.from_planes([f.plane(k) for k in range(8)])
    for k in range(1, 8):
        assert g.plane(k).unoriented() == f.plane(k).unoriented()
    with pytest.raises(ValueError):
        cartan.Flag([[1] * 7] * 7)
    with pytest.raises(ValueError):
        cartan.Flag.from_planes([coordinate_plane((X1,)), coordinate_plane((X2, X3))])


def test_flag_plane_containment():
    f = cartan.adapted_flag([1, 1, 0], [0, 0, 1]).rebased(np.random.default_rng(0))
    for k in range(1, 7):
        assert f.plane(k + 1).contains(f.plane(k))
