"""The G2 three-form in Cayley coordinates and the objects derived from it.

Axis order on R^7 is ``(x1, x2, x3, r0, r1, r2, r3)``; the positive
orientation is ``dx1^dx2^dx3^dr0^dr1^dr2^dr3``.  With this choice the
computed dual four-form contains ``+dr0^dx1^dx2^dx3``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from . import linalg
from .exterior import (AlternatingForm, Metric, basis_masks, form_to_json,
                       hodge_star, inner, interior_product, lie_act, pullback,
                       wedge, wedge_all)
from .numeric import EXACT, NumericContext, is_exact, is_zero, sign

__all__ = [
    "CAYLEY_AXES",
    "X1", "X2", "X3", "R0", "R1", "R2", "R3",
    "NotStable",
    "NotPositive",
    "G2Data",
    "cayley_omegas",
    "cayley_phi",
    "printed_dual_form",
    "three_form_bilinear",
    "metric_from_three_form",
    "annihilator_algebra",
    "is_structure_preserving",
    "invariant_dimensions",
    "invariant_forms",
    "g2_data",
    "k_generators",
    "z2_element",
    "t_element",
    "elementary",
]

CAYLEY_AXES = ("x1", "x2", "x3", "r0", "r1", "r2", "r3")
X1, X2, X3, R0, R1, R2, R3 = range(7)


class NotStable(ValueError):
    """The three-form does not lie in an open GL(7)-orbit."""


class NotPositive(ValueError):
    """Stable three-form whose induced bilinear form is indefinite."""


def _e(*axes) -> AlternatingForm:
    return AlternatingForm.basis(7, axes)


def cayley_omegas() -> tuple[AlternatingForm, AlternatingForm, AlternatingForm]:
    """The anti-self-dual basis omega_1, omega_2, omega_3 on span(x, r0)."""
    w1 = _e(R0, X1) + _e(X2, X3)
    w2 = _e(R0, X2) - _e(X1, X3)
    w3 = _e(R0, X3) + _e(X1, X2)
    return w1, w2, w3


def cayley_phi() -> AlternatingForm:
    w1, w2, w3 = cayley_omegas()
    return (wedge(w1, _e(R1)) + wedge(w2, _e(R2)) + wedge(w3, _e(R3))
            - _e(R1, R2, R3))


def printed_dual_form() -> AlternatingForm:
    """The dual four-form transcribed literally, including its repeated
    ``dr^{12}`` slot.  Kept only to report the mismatch with the computed dual."""
    w1, w2, w3 = cayley_omegas()
    return (-wedge(w1, _e(R1, R2)) + wedge(w2, _e(R1, R3)) - wedge(w3, _e(R1, R2))
            + _e(R0, X1, X2, X3))


def three_form_bilinear(phi: AlternatingForm):
    """Matrix B with ``B(u, v) vol0 = 1/6 i_u phi ^ i_v phi ^ phi`` together
    with det(B).  ``vol0`` is the standard volume form of R^7."""
    if phi.degree != 3 or phi.dim != 7:
        raise ValueError("expected a 3-form on R^7")
    contractions = [interior_product([1 if j == i else 0 for j in range(7)], phi)
                    for i in range(7)]
    exact = phi.is_exact
    B = np.empty((7, 7), dtype=object if exact else float)
    full = tuple(range(7))
    for i in range(7):
        for j in range(i, 7):
            top = wedge_all(contractions[i], contractions[j], phi)
            val = top.coefficient(full)
            val = val / 6 if exact else float(val) / 6
            B[i, j] = B[j, i] = val
    return B, linalg.det(B)


def _ninth_root(q: Fraction):
    def iroot(n: int):
        if n < 0:
            return None
        r = int(round(n ** (1 / 9))) if n < 1 << 1000 else None
        if r is None:
            return None
        for c in (r - 1, r, r + 1):
            if c >= 0 and c ** 9 == n:
                return c
        return None

    a, b = iroot(abs(q.numerator)), iroot(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b) * (1 if q > 0 else -1)


def metric_from_three_form(phi: AlternatingForm, ctx: NumericContext = EXACT) -> Metric:
    """Metric induced by a stable positive three-form on R^7.

    The result is ``det(B)^(-1/9) B`` which does not depend on the reference
    orientation; the returned orientation is the one in which B is positive.
    The matrix is exact when det(B) has a rational ninth root, float
    otherwise (the exact pair is available from :func:`three_form_bilinear`).
    """
    B, d = three_form_bilinear(phi)
    if is_zero(d, ctx.tol):
        raise NotStable("three-form is not stable (degenerate bilinear form)")
    root = _ninth_root(Fraction(d)) if is_exact(d) else None
    if root is not None:
        g = B / root
    else:
        fd = float(d)
        g = B.astype(float) / (np.sign(fd) * abs(fd) ** (1 / 9))
    orientation = 1 if sign(d) > 0 else -1
    try:
        return Metric(g, orientation)
    except ValueError as exc:
        raise NotPositive(str(exc)) from exc


def elementary(n: int, i: int, j: int) -> np.ndarray:
    E = linalg.identity(n) * 0
    E[i, j] = Fraction(1)
    return E


def _action_matrix(a: AlternatingForm, algebra_dim: int):
    n = a.dim
    cols = [lie_act(elementary(n, i, j), a).coefficient_vector()
            for i in range(n) for j in range(n)]
    mat = np.array(cols, dtype=object).T
    return mat if a.is_exact else mat.astype(float)


def annihilator_algebra(a: AlternatingForm, ctx: NumericContext = EXACT) -> list[np.ndarray]:
    """Basis of ``{A in gl(n) : A.a = 0}``."""
    n = a.dim
    mat = _action_matrix(a, n * n)
    return [v.reshape(n, n) for v in linalg.nullspace(mat, ctx.tol)]


def is_structure_preserving(g, a: AlternatingForm, ctx: NumericContext = EXACT) -> bool:
    g = np.asarray(g)
    if is_zero(linalg.det(g), ctx.tol):
        raise linalg.SingularMatrixError("structure check needs an invertible map")
    return pullback(g, a).isclose(a, ctx.tol)


def _invariant_system(algebra, n: int, k: int):
    masks = basis_masks(n, k)
    algebra = list(algebra)
    exact = all(linalg.is_exact_array(A) for A in algebra)
    rows = []
    for A in algebra:
        images = [lie_act(A, AlternatingForm(n, k, {m: 1})).coefficient_vector()
                  for m in masks]
        block = np.array(images, dtype=object).T  # image component x basis form
        rows.extend(block)
    if not rows:
        return np.empty((0, len(masks)), dtype=object), masks
    mat = np.array(rows, dtype=object)
    return (mat if exact else mat.astype(float)), masks


def invariant_forms(algebra, n: int, k: int, ctx: NumericContext = EXACT) -> list[AlternatingForm]:
    """Basis of degree-k forms annihilated by every element of ``algebra``."""
    mat, masks = _invariant_system(algebra, n, k)
    if mat.shape[0] == 0:
        return [AlternatingForm(n, k, {m: 1}) for m in masks]
    return [AlternatingForm(n, k, dict(zip(masks, v))) for v in linalg.nullspace(mat, ctx.tol)]


def invariant_dimensions(algebra, n: int, ctx: NumericContext = EXACT) -> list[int]:
    out = []
    for k in range(n + 1):
        mat, masks = _invariant_system(algebra, n, k)
        out.append(len(masks) - (linalg.rank(mat, ctx.tol) if mat.shape[0] else 0))
    return out


def k_generators() -> list[np.ndarray]:
    """so(3) acting simultaneously on (x1, x2, x3) and (r1, r2, r3)."""
    gens = []
    for i, j in ((1, 2), (2, 0), (0, 1)):
        A = linalg.identity(7) * 0
        for off in (X1, R1):
            A[off + i, off + j] = Fraction(-1)
            A[off + j, off + i] = Fraction(1)
        gens.append(A)
    return gens


def z2_element() -> np.ndarray:
    """diag(-1, -1, -1, -1, 1, 1, 1): reverses span(x1, x2, x3) inside G2."""
    return linalg.matrix(np.diag([-1, -1, -1, -1, 1, 1, 1]))


def t_element(f) -> np.ndarray:
    """Block map (f, det f, det(f) f) on (x, r0, r) for f in O(3)."""
    f = linalg.matrix(f)
    d = linalg.det(f)
    t = linalg.identity(7) * 0
    t[0:3, 0:3] = f
    t[3, 3] = d
    t[4:7, 4:7] = f * d
    return t


@dataclass(frozen=True, eq=False)
class G2Data:
    phi: AlternatingForm
    phi_dual: AlternatingForm
    metric: Metric
    algebra: tuple

    @property
    def volume(self) -> AlternatingForm:
        return self.metric.volume_form()

    def phi_norm2(self):
        """|phi|^2 under the induced metric (7 for the Cayley form)."""
        return inner(self.phi, self.phi, self.metric)

    def to_json(self) -> dict:
        from .numeric import format_scalar
        return {
            "phi": form_to_json(self.phi),
            "phiDual": form_to_json(self.phi_dual),
            "algebra": [[[format_scalar(x) for x in row] for row in A] for A in self.algebra],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


@lru_cache(maxsize=1)
def g2_data() -> G2Data:
    phi = cayley_phi()
    metric = metric_from_three_form(phi)
    dual = hodge_star(phi, metric)
    algebra = tuple(annihilator_algebra(phi))
    if len(algebra) != 14:
        raise AssertionError(f"stabilizer algebra has dimension {len(algebra)}")
    return G2Data(phi, dual, metric, algebra)


def invariant_dims_expected(n: int = 7) -> list[int]:
    """Binomial counts: invariant dimensions for the trivial algebra."""
    return [comb(n, k) for k in range(n + 1)]
