"""Verification suites behind ``phiplanes verify``.

Every item returns a :class:`CheckResult`; ``passed`` is False exactly when a
computed value disagrees with the expected one.  Items are run in a fixed
order so the JSON output is reproducible for a given seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .exterior import AlternatingForm, form_to_json, hodge_star, lie_act, wedge
from .g2 import (R0, R1, R2, R3, X1, X2, X3, cayley_omegas, g2_data, invariant_dimensions,
                 invariant_forms, is_structure_preserving, printed_dual_form, z2_element)
from .grassmann import (NotReversible, classify_plane, coordinate_plane, four_plane_path_identity,
                        local_model_check, rational_angle_trig, reversal_witness, three_plane_path)
from .numeric import default_tol, format_scalar
from . import cartan, spin7, torsion

__all__ = ["CheckResult", "SUITES", "ITEMS", "run_suite", "corrected_dual_form"]

EXPECTED_C = [0, 0, 0, 1, 5, 15, 28, 35]
EXPECTED_Z = [10, 21, 35]
EXPECTED_ZCODIM = [32, 21, 7]


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "details": self.details}


def _e(*axes) -> AlternatingForm:
    return AlternatingForm.basis(7, axes)


def corrected_dual_form() -> AlternatingForm:
    """-w1^dr23 + w2^dr13 - w3^dr12 + dr0^dx123."""
    w1, w2, w3 = cayley_omegas()
    return (-wedge(w1, _e(R2, R3)) + wedge(w2, _e(R1, R3)) - wedge(w3, _e(R1, R2))
            + _e(R0, X1, X2, X3))


def check_g2(seed: int) -> CheckResult:
    d = g2_data()
    return CheckResult("g2", len(d.algebra) == 14 and d.metric.is_identity and d.metric.orientation == 1,
                       {"dim": len(d.algebra), "metricIdentity": d.metric.is_identity,
                        "phiNorm2": format_scalar(d.phi_norm2())})


def check_invariants(seed: int) -> CheckResult:
    d = g2_data()
    dims = invariant_dimensions(d.algebra, 7)
    three = invariant_forms(d.algebra, 7, 3)
    four = invariant_forms(d.algebra, 7, 4)
    lines = (len(three) == 1 and len(four) == 1 and
             _proportional(three[0], d.phi) and _proportional(four[0], d.phi_dual))
    return CheckResult("invariants", dims == [1, 0, 0, 1, 1, 0, 0, 1] and lines,
                       {"dims": dims, "degree3IsPhi": lines, "degree4IsDual": lines})


def _proportional(a: AlternatingForm, b: AlternatingForm) -> bool:
    terms = b.mask_terms()
    if not terms:
        return False
    m, c = next(iter(terms.items()))
    return a * c == b * a.mask_terms().get(m, 0) and a.mask_terms().get(m, 0) != 0


def check_dual(seed: int) -> CheckResult:
    d = g2_data()
    printed = printed_dual_form()
    diff = printed - d.phi_dual
    return CheckResult("dual", d.phi_dual == corrected_dual_form(),
                       {"computed": form_to_json(d.phi_dual),
                        "printedMatches": diff.is_zero(),
                        "printedMinusComputed": form_to_json(diff),
                        "correctedMatches": d.phi_dual == corrected_dual_form()})


def check_planes(seed: int) -> CheckResult:
    d = g2_data()
    s6, c6 = rational_angle_trig(Fraction(1, 6))
    cases = {
        "xSpan": (coordinate_plane((X1, X2, X3)), "phi-plane", Fraction(0)),
        "rSpan": (coordinate_plane((R1, R2, R3)), "special-", Fraction(-1)),
        "xiPi6": (three_plane_path(s6, c6), "generic", Fraction(1, 2)),
        "xiPlus": (three_plane_path(1, 0), "special+", Fraction(1)),
    }
    out, ok = {}, True
    for name, (P, label, s) in cases.items():
        cls = classify_plane(P, d)
        good = cls.label == label and cls.s == s
        ok &= good
        out[name] = {**cls.to_json(), "expected": label, "ok": good}
    path = {}
    for q in (Fraction(0), Fraction(1, 6), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2),
              Fraction(-1, 6), Fraction(-1, 4)):
        s, c = rational_angle_trig(q)
        lhs, rhs = four_plane_path_identity(s, c, d)
        path[format_scalar(q)] = lhs == rhs
    ok &= all(path.values())
    return CheckResult("planes", ok, {"cases": out, "fourPlanePath": path})


def check_reversal(seed: int) -> CheckResult:
    d = g2_data()
    P = coordinate_plane((X1, X2, X3))
    w = reversal_witness(P, d)
    preserves = is_structure_preserving(w, d.phi)
    reverses = P.transform(w) == P.reversed()
    standard = bool((w == z2_element()).all())
    refused = {}
    s6, c6 = rational_angle_trig(Fraction(1, 6))
    for name, Q in (("associative", three_plane_path(1, 0)), ("generic", three_plane_path(s6, c6))):
        try:
            reversal_witness(Q, d)
            refused[name] = False
        except NotReversible:
            refused[name] = True
    return CheckResult("reversal", preserves and reverses and all(refused.values()),
                       {"preservesPhi": preserves, "reversesXSpan": reverses,
                        "isStandardZ2": standard, "notReversible": refused})


def check_local_model(seed: int) -> CheckResult:
    r = local_model_check()
    return CheckResult("local-model", r.ok, r.to_json())


def check_codim(seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    flags = {"standard": cartan.standard_flag(),
             "generic": cartan.adapted_flag([1, 1, 0], [0, 0, 1]),
             "rebased": cartan.standard_flag().rebased(rng)}
    seqs = {k: cartan.codim_sequence(f) for k, f in flags.items()}
    return CheckResult("codim", all(s == EXPECTED_C for s in seqs.values()), {"c": seqs})


def check_polar(seed: int) -> CheckResult:
    r = cartan.polar_extension_report(seed=seed)
    js = r.to_json()
    ok = (r.c == EXPECTED_C and r.extension_rank[4] == 32
          and js["zdims"] == EXPECTED_Z and js["zcodims"] == EXPECTED_ZCODIM
          and all(r.codim_equals_rank.values()) and r.cartan_sum == 49
          and r.integral_codim == r.cartan_sum
          and r.polar_dim_F == r.polar_dim_F_measured == r.polar_dim_F_second_graph
          and r.nested and r.contains_g2)
    return CheckResult("polar", ok, js)


def check_ad_invariance(seed: int) -> CheckResult:
    t_swap = torsion.flat_deck_map()
    out = {}
    for name, flag in (("standard", cartan.standard_flag()),
                       ("flatTorus", cartan.adapted_flag([1, 1, 0], [0, 0, 1]))):
        ts = [("z2", z2_element())] + ([("swap", t_swap)] if name == "flatTorus" else [])
        for k in range(4, 8):
            h = cartan.reduced_tableau(flag.plane(k))
            for tname, t in ts:
                out[f"{name}/{tname}/h{k}"] = cartan.ad_invariant(h, t)
    return CheckResult("ad-invariance", all(out.values()), out)


def check_torsion(seed: int) -> CheckResult:
    flat = torsion.verify_flat_model()
    ex2 = torsion.verify_example2()
    return CheckResult("torsion", flat.ok and ex2.ok,
                       {"flat": flat.to_json(), "example2": ex2.to_json()})


def check_spin7(seed: int) -> CheckResult:
    S = spin7.spin7_data()
    dim = spin7.stabilizer_dimension(S)
    self_dual = hodge_star(S.phi0, S.metric) == S.phi0
    square = wedge(S.phi0, S.phi0) == S.volume * 14
    annihilate = all(lie_act(E, S.phi0).is_zero() for E in spin7.homogeneous_generators())
    cone = spin7.cone_consistency_check([1, 0, 0, 0, 0, 0, 0, 0], S)
    return CheckResult("spin7", dim == 21 and self_dual and square and annihilate and cone == 0,
                       {"stabilizerDim": dim, "selfDual": self_dual, "squareIs14Vol": square,
                        "generatorsAnnihilate": annihilate, "coneResidualAtE0": format_scalar(cone),
                        "conventions": S.conventions()})


def random_admissible(rng: np.random.Generator):
    while True:
        v = rng.normal(size=3)
        v /= np.linalg.norm(v)
        if v[1] ** 2 + v[2] ** 2 > 1e-6:
            return tuple(float(c) for c in v)


def check_obstruction(seed: int, count: int = 500) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        x0, x1, x6 = random_admissible(rng)
        num, closed = spin7.obstruction_value(x0, x1, x6)
        worst = max(worst, abs(float(num) - float(closed)))
    r = 1 / math.sqrt(3)
    num, closed = spin7.obstruction_value(r, r, r)
    sample = abs(num - 4 / math.sqrt(33)) <= 1e-12 and abs(closed - 4 / math.sqrt(33)) <= 1e-12
    tags = {
        "(0,1,0)": spin7.classify_orbit_point(0, 1, 0).to_json(),
        "(1/3,2/3,2/3)": spin7.classify_orbit_point(Fraction(1, 3), Fraction(2, 3), Fraction(2, 3)).to_json(),
        "(0,1/2,sqrt3/2)": spin7.classify_orbit_point(0, Fraction(1, 2), math.sqrt(3) / 2).to_json(),
        "(sqrt5/3,1/3,sqrt3/3)": spin7.classify_orbit_point(math.sqrt(5) / 3, 1 / 3, math.sqrt(3) / 3).to_json(),
    }
    branches_ok = (tags["(0,1,0)"]["class"] == "PhiOrbit"
                   and tags["(1/3,2/3,2/3)"]["class"] == "Generic"
                   and tags["(0,1/2,sqrt3/2)"]["branches"] == ["x0=0", "3x1^2=x6^2"]
                   and tags["(sqrt5/3,1/3,sqrt3/3)"]["class"] == "PhiOrbit")
    return CheckResult("obstruction", worst <= 1e-10 and sample and branches_ok,
                       {"samples": count, "maxDelta": worst, "valueAtThirds": float(num),
                        "tags": tags})


def check_quadrics(seed: int, count: int = 200) -> CheckResult:
    r = spin7.orbit_sample(count=count, seed=seed)
    tol = max(default_tol(), 1e-9)
    ok = r.sphere <= tol and max(r.quadrics) <= tol and max(r.linear) <= tol
    return CheckResult("quadrics", ok, {"samples": count, "maxResiduals": r.to_json()})


def check_nearly_parallel(seed: int) -> CheckResult:
    res = spin7.nearly_parallel_check(count=10, seed=seed)
    return CheckResult("nearly-parallel", max(res) <= 1e-3, {"points": len(res), "maxResidual": max(res)})


ITEMS: dict[str, Callable[[int], CheckResult]] = {
    "g2": check_g2,
    "invariants": check_invariants,
    "dual": check_dual,
    "planes": check_planes,
    "reversal": check_reversal,
    "local-model": check_local_model,
    "codim": check_codim,
    "polar": check_polar,
    "ad-invariance": check_ad_invariance,
    "torsion": check_torsion,
    "spin7": check_spin7,
    "obstruction": check_obstruction,
    "quadrics": check_quadrics,
    "nearly-parallel": check_nearly_parallel,
}

SUITES: dict[str, list[str]] = {
    "all": list(ITEMS),
    "structure": ["g2", "invariants", "dual"],
    "planes": ["planes", "reversal", "local-model"],
    "cartan": ["codim", "polar", "ad-invariance"],
    "torsion": ["torsion"],
    "sphere": ["spin7", "obstruction", "quadrics", "nearly-parallel"],
}
SUITES.update({name: [name] for name in ITEMS if name not in SUITES})


def run_suite(name: str, seed: int = 0) -> list[CheckResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    return [ITEMS[item](seed) for item in SUITES[name]]
