"""The Cayley four-form on R^8, the nearly parallel G2-structure it induces on
S^7, and the cohomogeneity computations for the group generated by E_0..E_3.

Real coordinates on R^8 are ``x0..x7``.  A *pairing* says which real
coordinates form the complex coordinates z_1..z_4; the default is
``z_j = x_{2j-2} + i x_{2j-1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Sequence

import numpy as np

from . import linalg
from .exterior import (AlternatingForm, Metric, hodge_star, inner, interior_product,
                       lie_act, restrict, wedge)
from .g2 import annihilator_algebra, metric_from_three_form
from .numeric import EXACT, NumericContext, as_scalar, format_scalar, is_exact, is_zero, sqrt

__all__ = [
    "NoCompatiblePairing",
    "NotUnit",
    "DegenerateTangentFrame",
    "Pairing",
    "Spin7Data",
    "SpherePoint",
    "homogeneous_generators",
    "generator_matrix",
    "build_spin7",
    "spin7_data",
    "sphere_frame",
    "sphere_three_form",
    "cone_consistency_check",
    "sphere_metric_check",
    "stabilizer_dimension",
    "quadric_residuals",
    "obstruction_value",
    "OrbitTag",
    "classify_orbit_point",
    "OrbitSample",
    "orbit_sample",
    "nearly_parallel_check",
]


class NoCompatiblePairing(RuntimeError):
    pass


class NotUnit(ValueError):
    pass


class DegenerateTangentFrame(ValueError):
    pass


# ---------------------------------------------------------------------------
# generators

def generator_matrix(a0, a1, a2, a3) -> np.ndarray:
    """A = sum a_j E_j as an 8x8 matrix acting on column vectors."""
    a0, a1, a2, a3 = (as_scalar(a) for a in (a0, a1, a2, a3))
    z = a0 * 0
    rows = [
        [z, z, z, z, z, z, z, 3 * a0],
        [z, z, a1, a2, z, z, -a0, z],
        [z, -a1, z, -a3, z, a0, z, z],
        [z, -a2, a3, z, a0, z, z, z],
        [z, z, z, -a0, z, a3, a2, z],
        [z, z, -a0, z, -a3, z, a1, z],
        [z, a0, z, z, -a2, -a1, z, z],
        [-3 * a0, z, z, z, z, z, z, z],
    ]
    exact = all(is_exact(a) for a in (a0, a1, a2, a3))
    return np.array(rows, dtype=object if exact else float)


@lru_cache(maxsize=1)
def homogeneous_generators() -> tuple[np.ndarray, ...]:
    """E_0 (spanning the circle T) and E_1, E_2, E_3 (spanning so(3))."""
    return tuple(generator_matrix(*[int(i == j) for i in range(4)]) for j in range(4))


# ---------------------------------------------------------------------------
# the Cayley form

@dataclass(frozen=True)
class Pairing:
    """z_j = x_{pairs[j][0]} + i x_{pairs[j][1]}; Psi0 enters as sign * Re Psi0 (or Im Psi0)."""

    pairs: tuple[tuple[int, int], ...]
    psi_sign: int = 1
    imaginary: bool = False

    def describe(self) -> dict:
        return {
            "pairs": [list(p) for p in self.pairs],
            "psi": ("-" if self.psi_sign < 0 else "+") + ("Im" if self.imaginary else "Re"),
        }


DEFAULT_PAIRING = Pairing(((0, 1), (2, 3), (4, 5), (6, 7)))


def _dx(i: int) -> AlternatingForm:
    return AlternatingForm.basis(8, (i,))


def _complex_wedge(a, b):
    (ar, ai), (br, bi) = a, b
    return (wedge(ar, br) - wedge(ai, bi), wedge(ar, bi) + wedge(ai, br))


def _forms_for(p: Pairing):
    omega = AlternatingForm.zero(8, 2)
    for a, b in p.pairs:
        omega = omega - wedge(_dx(a), _dx(b))
    psi = (_dx(p.pairs[0][0]), _dx(p.pairs[0][1]))
    for a, b in p.pairs[1:]:
        psi = _complex_wedge(psi, (_dx(a), _dx(b)))
    part = psi[1] if p.imaginary else psi[0]
    part = part * p.psi_sign
    phi0 = wedge(omega, omega) / 2 + part
    return omega, part, phi0


def _candidate_pairings():
    yield DEFAULT_PAIRING
    base = ((0, 7), (1, 6), (2, 5), (3, 4))
    for flips in product((0, 1), repeat=4):
        pairs = tuple((b, a) if f else (a, b) for (a, b), f in zip(base, flips))
        for imaginary in (False, True):
            for s in (1, -1):
                yield Pairing(pairs, s, imaginary)
    for imaginary in (False, True):
        for s in (1, -1):
            if (imaginary, s) != (False, 1):
                yield Pairing(DEFAULT_PAIRING.pairs, s, imaginary)


@dataclass(frozen=True, eq=False)
class Spin7Data:
    omega0: AlternatingForm
    psi0_real: AlternatingForm
    phi0: AlternatingForm
    pairing: Pairing
    orientation: int
    searched: int = 1

    @property
    def metric(self) -> Metric:
        return Metric.euclidean(8, self.orientation)

    @property
    def volume(self) -> AlternatingForm:
        return AlternatingForm.volume(8, self.orientation)

    def conventions(self) -> dict:
        return {**self.pairing.describe(), "orientation": self.orientation,
                "candidatesTried": self.searched}


def build_spin7() -> Spin7Data:
    """Cayley form 1/2 w0^2 + Re Psi0 under the first pairing compatible with E_0..E_3.

    The orientation of R^8 is the one making the form self-dual."""
    gens = homogeneous_generators()
    for n, p in enumerate(_candidate_pairings(), start=1):
        omega, psi, phi0 = _forms_for(p)
        if all(lie_act(E, phi0).is_zero() for E in gens):
            break
    else:
        raise NoCompatiblePairing("no pairing convention makes E_0..E_3 preserve the Cayley form")
    for orientation in (1, -1):
        if hodge_star(phi0, Metric.euclidean(8, orientation)) == phi0:
            break
    else:
        raise AssertionError("Cayley form is not self-dual in either orientation")
    return Spin7Data(omega, psi, phi0, p, orientation, n)


@lru_cache(maxsize=1)
def spin7_data() -> Spin7Data:
    return build_spin7()


def stabilizer_dimension(S: Spin7Data | None = None) -> int:
    S = S or spin7_data()
    return len(annihilator_algebra(S.phi0))


# ---------------------------------------------------------------------------
# sphere points and tangent frames

class SpherePoint:
    __slots__ = ("x", "exact")

    def __init__(self, coords: Sequence, tol: float = 1e-9):
        xs = [as_scalar(c) for c in coords]
        if len(xs) != 8:
            raise ValueError("points of S^7 have 8 coordinates")
        self.exact = all(is_exact(c) for c in xs)
        if not self.exact:
            xs = [float(c) for c in xs]
        n2 = sum(c * c for c in xs)
        if not is_zero(n2 - 1, tol):
            raise NotUnit(f"|x|^2 = {float(n2)}")
        self.x = tuple(xs)

    @classmethod
    def random(cls, rng: np.random.Generator) -> "SpherePoint":
        v = rng.normal(size=8)
        return cls(v / np.linalg.norm(v))

    def array(self) -> np.ndarray:
        return np.array(self.x, dtype=object if self.exact else float)


def _coerce_point(x) -> SpherePoint:
    return x if isinstance(x, SpherePoint) else SpherePoint(x)


def sphere_frame(x, flip: bool = False) -> np.ndarray:
    """8x7 matrix whose columns are an orthonormal basis of x^perp, positively
    oriented for the orientation i_x vol8 (negatively when ``flip``).

    Built from the Householder reflection taking e_0 to x, so it is exact for
    rational x."""
    p = _coerce_point(x)
    xv = p.array()
    one = Fraction(1) if p.exact else 1.0
    H = linalg.identity(8) if p.exact else np.eye(8)
    v = xv.copy()
    v[0] = v[0] - one
    vv = sum(c * c for c in v)
    reflected = not is_zero(vv, 1e-15)
    if reflected:
        H = H - np.outer(v, v) * (2 / vv if not p.exact else Fraction(2) / vv)
    frame = H[:, 1:].copy()
    # det[x, frame] = det H = -1 for a genuine reflection
    if reflected != flip:
        frame[:, 0] = -frame[:, 0]
    return frame


def _columns(frame: np.ndarray) -> list:
    return [list(frame[:, j]) for j in range(frame.shape[1])]


def sphere_three_form(x, S: Spin7Data | None = None, flip: bool = False) -> AlternatingForm:
    """phi_x(u, v, w) = Phi0(x, u, v, w) written in the frame of :func:`sphere_frame`."""
    S = S or spin7_data()
    p = _coerce_point(x)
    ix = interior_product(list(p.x), S.phi0)
    return restrict(ix, _columns(sphere_frame(p, flip)))


def cone_consistency_check(x, S: Spin7Data | None = None, flip: bool = False):
    """Norm of Phi0|x^perp - *7 phi_x (zero for the orientation i_x vol8)."""
    S = S or spin7_data()
    p = _coerce_point(x)
    frame = sphere_frame(p, flip)
    phi_x = restrict(interior_product(list(p.x), S.phi0), _columns(frame))
    four = restrict(S.phi0, _columns(frame))
    # the frame is orthonormal and positively oriented, so *7 is Euclidean
    diff = four - hodge_star(phi_x, Metric.euclidean(7))
    n2 = inner(diff, diff)
    return sqrt(n2) if is_exact(n2) else math.sqrt(float(n2))


def sphere_metric_check(x, S: Spin7Data | None = None) -> Metric:
    """Metric induced by phi_x; identity for a positively oriented frame."""
    return metric_from_three_form(sphere_three_form(x, S))


# ---------------------------------------------------------------------------
# the obstruction function

def _exact_or_float(fn, *args):
    try:
        return fn(*args)
    except (ValueError, TypeError):
        return fn(*[float(a) for a in args])


def _closed_form(x0, x1, x6):
    num = 4 * abs(x0 * x6 * (3 * x1 * x1 - x6 * x6))
    den = (x1 * x1 + x6 * x6) * sqrt(8 * x0 * x0 + 1)
    return num / den


def _determinant_side(x0, x1, x6, S):
    E0, E1, E2, _ = homogeneous_generators()
    exact = all(is_exact(c) for c in (x0, x1, x6))
    zero = Fraction(0) if exact else 0.0
    x = np.array([x0, x1, zero, zero, zero, zero, x6, zero], dtype=object if exact else float)
    if not exact:
        E0, E1, E2 = (E.astype(float) for E in (E0, E1, E2))
    n1 = sqrt(8 * x0 * x0 + 1)
    n2 = sqrt(x1 * x1 + x6 * x6)
    v1, v2, v3 = E0 @ x / n1, E1 @ x / n2, E2 @ x / n2
    return abs(S.phi0(list(x), list(v1), list(v2), list(v3)))


def obstruction_value(x0, x1, x6, S: Spin7Data | None = None, tol: float = 1e-9):
    """(|Phi0(x, v1, v2, v3)|, closed form) at x = (x0, x1, 0, 0, 0, 0, x6, 0).

    Both sides are exact when the inputs and the square roots allow it."""
    S = S or spin7_data()
    x0, x1, x6 = (as_scalar(c) for c in (x0, x1, x6))
    if not is_zero(_exact_or_float(lambda a, b, c: a * a + b * b + c * c - 1, x0, x1, x6), tol):
        raise NotUnit("x0^2 + x1^2 + x6^2 must be 1")
    if is_zero(_exact_or_float(lambda a, b: a * a + b * b, x1, x6), tol):
        raise DegenerateTangentFrame("x1 = x6 = 0: the tangent frame degenerates")
    numeric = _exact_or_float(lambda a, b, c: _determinant_side(a, b, c, S), x0, x1, x6)
    closed = _exact_or_float(_closed_form, x0, x1, x6)
    return numeric, closed


@dataclass(frozen=True)
class OrbitTag:
    kind: str  # "PhiOrbit" or "Generic"
    branches: tuple[str, ...]
    value: object

    def to_json(self) -> dict:
        return {"class": self.kind, "branches": list(self.branches),
                "obstruction": format_scalar(self.value)}


def classify_orbit_point(x0, x1, x6, ctx: NumericContext = EXACT, S: Spin7Data | None = None) -> OrbitTag:
    numeric, _ = obstruction_value(x0, x1, x6, S, ctx.tol)
    x0, x1, x6 = (as_scalar(c) for c in (x0, x1, x6))
    branches = []
    if ctx.is_zero(x0):
        branches.append("x0=0")
    if ctx.is_zero(x6):
        branches.append("x6=0")
    try:
        cubic = 3 * x1 * x1 - x6 * x6
    except ValueError:
        cubic = 3 * float(x1) ** 2 - float(x6) ** 2
    if ctx.is_zero(cubic):
        branches.append("3x1^2=x6^2")
    kind = "PhiOrbit" if ctx.is_zero(numeric) else "Generic"
    return OrbitTag(kind, tuple(branches), numeric)


# ---------------------------------------------------------------------------
# orbit sampling

BASE_POINT = (0, 1, 0, 0, 0, 0, 0, 0)


@dataclass
class OrbitSample:
    points: list[np.ndarray] = field(repr=False)
    sphere: float
    quadrics: list[float] | None
    linear: list[float] | None

    def to_json(self) -> dict:
        return {"sphere": self.sphere, "quadrics": self.quadrics, "linear": self.linear}


def quadric_residuals(y) -> tuple[list[float], list[float]]:
    y = [float(c) for c in y]
    quad = [y[1] * y[5] + y[2] * y[6], y[1] * y[4] + y[3] * y[6], y[2] * y[4] - y[3] * y[5]]
    return [abs(q) for q in quad], [abs(y[0]), abs(y[7])]


def orbit_sample(x=BASE_POINT, count: int = 200, seed: int = 0,
                 max_norm: float = 10.0) -> OrbitSample:
    """Points exp(sum a_j E_j) x for random a with |a| <= max_norm."""
    p = _coerce_point(x)
    xv = np.array([float(c) for c in p.x])
    rng = np.random.default_rng(seed)
    pts, sph = [], 0.0
    quad, lin = [0.0] * 3, [0.0] * 2
    track = all(float(a) == b for a, b in zip(p.x, BASE_POINT))
    for _ in range(count):
        a = rng.normal(size=4) * (max_norm / 4)
        n = np.linalg.norm(a)
        if n > max_norm:
            a *= max_norm / n
        y = linalg.expm(generator_matrix(*a)) @ xv
        pts.append(y)
        sph = max(sph, abs(float(y @ y) - 1))
        if track:
            q, l = quadric_residuals(y)
            quad = [max(u, v) for u, v in zip(quad, q)]
            lin = [max(u, v) for u, v in zip(lin, l)]
    return OrbitSample(pts, sph, quad if track else None, lin if track else None)


# ---------------------------------------------------------------------------
# nearly parallel check

def _stereo(u: np.ndarray):
    """Inverse stereographic projection from e_7 and its Jacobian (8x7)."""
    s = float(u @ u)
    den = 1 + s
    x = np.concatenate([2 * u / den, [(s - 1) / den]])
    J = np.zeros((8, 7))
    J[:7, :] = 2 * np.eye(7) / den - 4 * np.outer(u, u) / den ** 2
    J[7, :] = 4 * u / den ** 2
    return x, J


def _chart_form(u: np.ndarray, S: Spin7Data) -> AlternatingForm:
    x, J = _stereo(u)
    return restrict(interior_product(list(x), S.phi0.as_float()), [list(J[:, j]) for j in range(7)])


def _exterior_derivative_fd(u: np.ndarray, S: Spin7Data, h: float) -> AlternatingForm:
    """d of the chart three-form by central differences of its coefficients."""
    partials = []
    for i in range(7):
        e = np.zeros(7)
        e[i] = h
        partials.append((_chart_form(u + e, S) - _chart_form(u - e, S)) / (2 * h))
    out = AlternatingForm.zero(7, 4)
    for i, da in enumerate(partials):
        out = out + wedge(AlternatingForm.basis(7, (i,), 1.0), da)
    return out


def nearly_parallel_check(count: int = 10, seed: int = 0, h: float = 1e-5,
                          S: Spin7Data | None = None, scale: float = 0.6) -> list[float]:
    """Residuals |d phi - 4 *7 phi| (chart metric) at random chart points."""
    S = S or spin7_data()
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        u = rng.normal(size=7) * scale
        x, J = _stereo(u)
        phi = _chart_form(u, S)
        dphi = _exterior_derivative_fd(u, S, h)
        orient = 1 if np.linalg.det(np.column_stack([x, J])) > 0 else -1
        g = Metric(J.T @ J, orient)
        diff = dphi - hodge_star(phi, g) * 4.0
        out.append(math.sqrt(max(0.0, float(inner(diff, diff, g)))))
    return out
