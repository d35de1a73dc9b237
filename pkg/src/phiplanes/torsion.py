"""Left-invariant coframe algebras and the torsion of the two torus-type models.

A coframe algebra has generators theta^0..theta^{n-1} with constant structure
constants ``c[i][j][k] = c^i_{jk}`` and the Maurer-Cartan rule

    d theta^i = -1/2 c^i_{jk} theta^j ^ theta^k

(``mc_sign=-1`` flips it).  d is extended to all degrees as a graded
derivation.  Generators are declared orthonormal.

Both models use the generator order ``(a1, a2, a3, dr0, r1, r2, r3)`` so the
Cayley three-form reads the same as on R^7.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import linalg
from .exterior import (AlternatingForm, Metric, form_to_json, hodge_star, inner,
                       mask_axes, pullback, wedge)
from .g2 import R0, R1, R2, R3, X1, X2, X3, cayley_phi, metric_from_three_form, t_element
from .numeric import as_scalar, format_scalar

__all__ = [
    "JacobiFailure",
    "IdentityFailure",
    "CoframeAlgebra",
    "dga_build",
    "su2_constants",
    "FlatModelReport",
    "Example2Report",
    "verify_flat_model",
    "verify_example2",
    "flat_deck_map",
    "example2_deck_map",
]


class JacobiFailure(ValueError):
    def __init__(self, generator: int, value: AlternatingForm):
        super().__init__(f"d^2 theta^{generator} = {value!r} != 0")
        self.generator = generator
        self.value = value


class IdentityFailure(AssertionError):
    def __init__(self, message: str, residual: AlternatingForm):
        super().__init__(f"{message}; residual = {residual!r}")
        self.residual = residual


def _constants_array(n: int, c) -> np.ndarray:
    out = np.empty((n, n, n), dtype=object)
    out[...] = Fraction(0)
    if c is None:
        return out
    if isinstance(c, dict):
        for (i, j, k), v in c.items():
            out[i, j, k] = as_scalar(v)
        return out
    arr = np.asarray(c, dtype=object)
    if arr.shape != (n, n, n):
        raise ValueError(f"structure constants must have shape {(n, n, n)}")
    for idx in np.ndindex(arr.shape):
        out[idx] = as_scalar(arr[idx])
    return out


class CoframeAlgebra:
    def __init__(self, n: int, c=None, orientation: int = 1, mc_sign: int = 1, names=None):
        self.n = n
        self.c = _constants_array(n, c)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.c[i, j, k] != -self.c[i, k, j]:
                        raise ValueError(f"c^{i}_{{{j}{k}}} is not antisymmetric")
        self.mc_sign = mc_sign
        self.metric = Metric.euclidean(n, orientation)
        self.names = tuple(names) if names else tuple(f"t{i}" for i in range(n))
        self._d_gen = [self._d_generator(i) for i in range(n)]
        self._cache: dict[int, AlternatingForm] = {}
        for i in range(n):
            dd = self.d(self._d_gen[i])
            if not dd.is_zero():
                raise JacobiFailure(i, dd)

    @property
    def orientation(self) -> int:
        return self.metric.orientation

    def generator(self, i: int) -> AlternatingForm:
        return AlternatingForm.basis(self.n, (i,))

    def _d_generator(self, i: int) -> AlternatingForm:
        terms = {}
        for j in range(self.n):
            for k in range(j + 1, self.n):
                v = self.c[i, j, k]
                if v != 0:
                    terms[(j, k)] = -self.mc_sign * v
        return AlternatingForm(self.n, 2, terms)

    def _d_mask(self, mask: int) -> AlternatingForm:
        hit = self._cache.get(mask)
        if hit is not None:
            return hit
        axes = mask_axes(mask)
        first = axes[0]
        rest = AlternatingForm.basis(self.n, axes[1:]) if len(axes) > 1 else AlternatingForm.one(self.n)
        out = wedge(self._d_gen[first], rest)
        if len(axes) > 1:
            out = out - wedge(self.generator(first), self._d_mask(mask & ~(1 << first)))
        self._cache[mask] = out
        return out

    def d(self, a: AlternatingForm) -> AlternatingForm:
        if a.dim != self.n:
            raise ValueError("form lives on a different algebra")
        out = AlternatingForm.zero(self.n, a.degree + 1)
        for mask, coeff in a.mask_terms().items():
            if mask:
                out = out + self._d_mask(mask) * coeff
        return out

    def star(self, a: AlternatingForm) -> AlternatingForm:
        return hodge_star(a, self.metric)

    def is_automorphism(self, L) -> bool:
        """True when the coframe map theta^i -> sum_j L[i,j] theta^j commutes with d."""
        return all(pullback(L, self._d_gen[i]) == self.d(pullback(L, self.generator(i)))
                   for i in range(self.n))

    def conventions(self) -> dict:
        return {"generators": list(self.names), "orientation": self.orientation,
                "maurerCartan": "d theta^i = %s1/2 c^i_jk theta^j theta^k"
                                % ("-" if self.mc_sign > 0 else "+")}


def dga_build(n: int, structure_constants=None, orientation: int = 1,
              mc_sign: int = 1, names=None) -> CoframeAlgebra:
    return CoframeAlgebra(n, structure_constants, orientation, mc_sign, names)


def su2_constants(n: int, offset: int, scale=2) -> dict:
    """c^{offset+k}_{offset+i, offset+j} = scale * eps_{ijk}."""
    scale = as_scalar(scale)
    out = {}
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        out[(offset + k, offset + i, offset + j)] = scale
        out[(offset + k, offset + j, offset + i)] = -scale
    return out


GENERATORS = ("a1", "a2", "a3", "dr0", "r1", "r2", "r3")


def _swap(i: int, j: int) -> list:
    f = [[int(a == b) for b in range(3)] for a in range(3)]
    f[i][i] = f[j][j] = 0
    f[i][j] = f[j][i] = 1
    return f


def flat_deck_map() -> np.ndarray:
    """Coframe map of the flat-torus involution: dx1 <-> dx2, dr0 -> -dr0,
    (dr1, dr2, dr3) -> (-dr2, -dr1, -dr3)."""
    return t_element(_swap(0, 1))


def example2_deck_map() -> np.ndarray:
    """a1 <-> a3, a2 fixed, dr0 -> -dr0, (r1, r2, r3) -> (-r3, -r2, -r1)."""
    return t_element(_swap(0, 2))


def _invariance(L, forms: dict) -> dict:
    return {name: pullback(L, a) == a for name, a in forms.items()}


# ---------------------------------------------------------------------------
# flat model

@dataclass
class FlatModelReport:
    dphi_zero: bool
    dstar_zero: bool
    stable_positive: bool
    deck_invariant: dict
    conventions: dict

    @property
    def ok(self) -> bool:
        return self.dphi_zero and self.dstar_zero and self.stable_positive and all(self.deck_invariant.values())

    def to_json(self) -> dict:
        return {"dPhi": "0" if self.dphi_zero else "nonzero",
                "dStarPhi": "0" if self.dstar_zero else "nonzero",
                "stablePositive": self.stable_positive,
                "deckInvariant": self.deck_invariant,
                "conventions": self.conventions, "ok": self.ok}


def verify_flat_model() -> FlatModelReport:
    A = dga_build(7, None, names=GENERATORS)
    phi = cayley_phi()
    star = A.star(phi)
    try:
        g = metric_from_three_form(phi)
        positive = g.is_identity and g.orientation == A.orientation
    except ValueError:
        positive = False
    L = flat_deck_map()
    return FlatModelReport(A.d(phi).is_zero(), A.d(star).is_zero(), positive,
                           _invariance(L, {"phi": phi, "starPhi": star}), A.conventions())


# ---------------------------------------------------------------------------
# the S^1 x SU(2) model

def _fit(target: AlternatingForm, basis: Sequence[AlternatingForm]):
    """Exact coefficients x with target = sum x_i basis_i, or None."""
    masks = sorted(set().union(target.mask_terms(), *(b.mask_terms() for b in basis)))
    if not masks:
        return [Fraction(0)] * len(basis)
    M = np.array([[b.mask_terms().get(m, Fraction(0)) for b in basis] +
                  [target.mask_terms().get(m, Fraction(0))] for m in masks], dtype=object)
    R, piv = linalg.rref(M)
    if len(basis) in piv:
        return None
    x = [Fraction(0)] * len(basis)
    for row, p in enumerate(piv):
        x[p] = R[row, len(basis)]
    return x


@dataclass
class Example2Report:
    scale: object
    conventions: dict
    dphi: AlternatingForm = field(repr=False)
    phi_hat: AlternatingForm = field(repr=False)
    chi3: AlternatingForm = field(repr=False)
    star_chi3: AlternatingForm = field(repr=False)
    residual: AlternatingForm
    identity_holds: bool
    dphi_hat_zero: bool
    star_chi3_as_stated: bool
    fit: list | None
    balancing_scale: object
    attempts: list
    readings: dict
    deck_invariant: dict
    deck_automorphism: bool

    @property
    def ok(self) -> bool:
        return self.identity_holds and self.dphi_hat_zero

    def to_json(self) -> dict:
        fmt = format_scalar
        return {
            "scale": fmt(self.scale),
            "conventions": self.conventions,
            "identityHolds": self.identity_holds,
            "dFourFormZero": self.dphi_hat_zero,
            "residual": form_to_json(self.residual),
            "residualNorm2": fmt(inner(self.residual, self.residual)),
            "starChi3AsStated": self.star_chi3_as_stated,
            "fit": None if self.fit is None else {"fourForm": fmt(self.fit[0]),
                                                  "starChi3": fmt(self.fit[1])},
            "balancingScale": None if self.balancing_scale is None else fmt(self.balancing_scale),
            "attempts": self.attempts,
            "readings": self.readings,
            "deckInvariant": self.deck_invariant,
            "deckAutomorphism": self.deck_automorphism,
            "ok": self.ok,
        }


def _example2_terms(A: CoframeAlgebra):
    phi = cayley_phi()
    phi_hat = A.star(phi)
    chi3 = AlternatingForm.basis(7, (R1, R2, R3), Fraction(1, 2))
    return phi, A.d(phi), phi_hat, chi3, A.star(chi3)


def verify_example2(scale=2, strict: bool = False) -> Example2Report:
    """Check d(phi) = 1/2 *phi + *chi3 and d(*phi) = 0 on X' x S^1 x SU(2).

    The su(2) block has structure constants ``scale * eps``.  The default
    orientation and Maurer-Cartan sign are tried first, then the other three
    combinations; the first combination that balances is reported.
    """
    scale = as_scalar(scale)
    c = su2_constants(7, R1, scale)
    attempts = []
    chosen = None
    for orientation, mc_sign in ((1, 1), (-1, 1), (1, -1), (-1, -1)):
        A = dga_build(7, c, orientation, mc_sign, GENERATORS)
        phi, dphi, phi_hat, chi3, star_chi3 = _example2_terms(A)
        residual = dphi - phi_hat / 2 - star_chi3
        holds = residual.is_zero()
        attempts.append({"orientation": orientation, "mcSign": mc_sign,
                         "residualNorm2": format_scalar(inner(residual, residual)),
                         "holds": holds})
        if chosen is None and holds:
            chosen = (A, phi, dphi, phi_hat, chi3, star_chi3, residual)
    if chosen is None:
        A = dga_build(7, c, 1, 1, GENERATORS)
        phi, dphi, phi_hat, chi3, star_chi3 = _example2_terms(A)
        chosen = (A, phi, dphi, phi_hat, chi3, star_chi3, dphi - phi_hat / 2 - star_chi3)
    A, phi, dphi, phi_hat, chi3, star_chi3, residual = chosen
    holds = residual.is_zero()
    fit = _fit(dphi, [phi_hat, star_chi3])
    balancing = None
    if fit is not None and fit[0] != 0 and fit[1] == 2 * fit[0]:
        # d phi is linear in the structure constants
        balancing = scale * Fraction(1, 2) / fit[0]
    stated = AlternatingForm.basis(7, (R0, X1, X2, X3), -1)
    L = example2_deck_map()
    report = Example2Report(
        scale=scale, conventions=A.conventions(), dphi=dphi, phi_hat=phi_hat, chi3=chi3,
        star_chi3=star_chi3, residual=residual, identity_holds=holds,
        dphi_hat_zero=A.d(phi_hat).is_zero(), star_chi3_as_stated=(star_chi3 * 2 == stated),
        fit=fit, balancing_scale=balancing, attempts=attempts,
        readings={"threeForm": "balances" if holds else "does not balance",
                  "fourForm": "degree mismatch: d of a 4-form cannot equal a 3-form plus a 4-form"},
        deck_invariant=_invariance(L, {"phi": phi, "fourForm": phi_hat, "chi3": chi3,
                                       "starChi3": star_chi3, "dphi": dphi}),
        deck_automorphism=A.is_automorphism(L))
    if strict and not report.ok:
        raise IdentityFailure("d phi != 1/2 *phi + *chi3", residual)
    return report


@lru_cache(maxsize=None)
def _cyclic_fit(scale):
    """Fit coefficients after relabeling (x1,x2,x3) and (r1,r2,r3) cyclically."""
    P = np.empty((7, 7), dtype=object)
    P[...] = Fraction(0)
    P[R0, R0] = Fraction(1)
    for a, b in ((0, 1), (1, 2), (2, 0)):
        P[X1 + a, X1 + b] = Fraction(1)
        P[R1 + a, R1 + b] = Fraction(1)
    A = dga_build(7, su2_constants(7, R1, scale), names=GENERATORS)
    phi, dphi, phi_hat, chi3, star_chi3 = _example2_terms(A)
    moved = [pullback(P, f) for f in (dphi, phi_hat, star_chi3)]
    return A.is_automorphism(P), tuple(_fit(moved[0], moved[1:]) or ())


def relabel_consistency(scale=2) -> bool:
    scale = as_scalar(scale)
    auto, fit = _cyclic_fit(scale)
    return auto and list(fit) == verify_example2(scale).fit
