"""G2-orbits of 3- and 4-planes in R^7.

The orbit of an oriented plane is detected by one number ``s``: the value of
phi (3-planes) or of its dual (4-planes) on an oriented orthonormal basis.
``|s| = 1`` are the associative/coassociative orbits, ``s = 0`` the
phi-planes, and anything in between a generic orbit.  Reversing the
orientation negates ``s``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .exterior import (AlternatingForm, Metric, Multivector, evaluate,
                       interior_product, lie_act, pullback, restrict, wedge)
from .g2 import (R0, R1, R2, R3, X1, X2, X3, G2Data, g2_data, k_generators,
                 z2_element)
from .numeric import (EXACT, NumericContext, QuadraticSurd, as_scalar,
                      format_scalar, is_exact, is_zero, isclose, sign, sqrt)

__all__ = [
    "Plane",
    "OrbitClass",
    "DegeneratePlaneError",
    "NotReversible",
    "orthonormal_basis",
    "orbit_invariant",
    "classify_plane",
    "reversal_witness",
    "local_model_check",
    "LocalModelReport",
    "rational_angle_trig",
    "three_plane_path",
    "four_plane_path",
    "four_plane_path_identity",
    "coordinate_plane",
]


class DegeneratePlaneError(ValueError):
    pass


class NotReversible(ValueError):
    """Raised for planes whose G2-orbit does not contain the reversed plane."""


class Plane:
    """k-dimensional subspace of R^n spanned by ``basis`` (one vector per row)."""

    __slots__ = ("dim", "rank", "basis", "oriented")

    def __init__(self, basis: Sequence[Sequence], oriented: bool = True, dim: int | None = None):
        rows = [tuple(as_scalar(x) for x in v) for v in basis]
        if dim is None:
            if not rows:
                raise ValueError("empty basis needs an explicit dimension")
            dim = len(rows[0])
        if any(len(v) != dim for v in rows):
            raise ValueError("basis vectors have inconsistent lengths")
        if rows:
            arr = np.array(rows, dtype=object)
            exact = all(is_exact(x) for x in arr.ravel())
            r = linalg.rank(arr if exact else arr.astype(float))
            if r != len(rows):
                raise DegeneratePlaneError(f"basis of {len(rows)} vectors has rank {r}")
        self.dim = dim
        self.rank = len(rows)
        self.basis = tuple(rows)
        self.oriented = bool(oriented)

    def plucker(self) -> Multivector:
        if not self.basis:
            return Multivector(self.dim, 0, {(): 1})
        return Multivector.from_vectors(self.basis)

    def reversed(self) -> "Plane":
        if self.rank == 0:
            return self
        return Plane((tuple(-x for x in self.basis[0]),) + self.basis[1:], self.oriented, self.dim)

    def unoriented(self) -> "Plane":
        return Plane(self.basis, False, self.dim)

    def matrix(self) -> np.ndarray:
        """n x k matrix with the basis vectors as columns."""
        return np.array(self.basis, dtype=object).T.reshape(self.dim, self.rank)

    def transform(self, g) -> "Plane":
        g = np.asarray(g)
        return Plane([tuple(g @ np.array(v, dtype=object)) for v in self.basis], self.oriented, self.dim)

    def contains(self, other: "Plane") -> bool:
        return linalg.span_contains([np.array(v, dtype=object) for v in self.basis],
                                    [np.array(v, dtype=object) for v in other.basis])

    def __eq__(self, other):
        if not isinstance(other, Plane):
            return NotImplemented
        if (self.dim, self.rank, self.oriented) != (other.dim, other.rank, other.oriented):
            return False
        a, b = self.plucker(), other.plucker()
        # proportional Plücker vectors; positive ratio when oriented
        ta, tb = a.mask_terms(), b.mask_terms()
        if ta.keys() != tb.keys():
            return False
        m0 = next(iter(ta))
        ratio = tb[m0] / ta[m0]
        if self.oriented and sign(ratio) < 0:
            return False
        return all(tb[m] == ratio * ta[m] for m in ta)

    def __hash__(self):
        return hash((self.dim, self.rank, self.oriented))

    def __repr__(self):
        return f"Plane(rank={self.rank}, dim={self.dim}, oriented={self.oriented}, basis={self.basis})"

    def to_json(self) -> dict:
        return {"dim": self.dim, "vectors": [[format_scalar(x) for x in v] for v in self.basis],
                "oriented": self.oriented}

    @classmethod
    def from_json(cls, obj) -> "Plane":
        if not isinstance(obj, dict):
            raise ValueError("plane JSON must be an object")
        try:
            dim, vectors = obj["dim"], obj["vectors"]
        except KeyError as exc:
            raise ValueError(f"plane JSON missing {exc}") from exc
        oriented = obj.get("oriented", True)
        if not isinstance(dim, int) or isinstance(dim, bool) or not isinstance(vectors, list):
            raise ValueError("plane JSON has the wrong field types")
        if not isinstance(oriented, bool):
            raise ValueError("'oriented' must be a boolean")
        rows = []
        for v in vectors:
            if not isinstance(v, list) or len(v) != dim:
                raise ValueError(f"vector {v!r} does not have length {dim}")
            row = []
            for x in v:
                if isinstance(x, bool) or not isinstance(x, (str, int, float)):
                    raise ValueError(f"bad coordinate {x!r}")
                row.append(as_scalar(x))
            rows.append(row)
        return cls(rows, oriented, dim)


def coordinate_plane(axes: Sequence[int], dim: int = 7, oriented: bool = True) -> Plane:
    return Plane([[1 if j == i else 0 for j in range(dim)] for i in axes], oriented, dim)


def _gram(u, v, G):
    return np.array(u, dtype=object) @ G @ np.array(v, dtype=object)


def orthonormal_basis(P: Plane, g: Metric | None = None):
    """Gram-Schmidt.  Returns ``(Q, norms2)``.

    For exact planes Q has an orthogonal basis (no square roots) and
    ``norms2`` holds the exact squared lengths; float planes are normalised
    and ``norms2`` is all ones.  The orientation of Q matches P.
    """
    G = (g or Metric.euclidean(P.dim)).matrix
    exact = all(is_exact(x) for v in P.basis for x in v)
    out, norms = [], []
    for v in P.basis:
        w = np.array(v, dtype=object)
        for u, nu in zip(out, norms):
            w = w - (_gram(w, u, G) / nu) * u
        nw = _gram(w, w, G)
        if is_zero(nw, 1e-12):
            raise DegeneratePlaneError("plane is degenerate for this metric")
        out.append(w)
        norms.append(nw)
    if not exact:
        out = [np.array([float(x) for x in w]) / np.sqrt(float(n)) for w, n in zip(out, norms)]
        norms = [1.0] * len(out)
    return Plane([tuple(w) for w in out], P.oriented, P.dim), norms


def _calibrating_form(P: Plane, data: G2Data) -> AlternatingForm:
    if P.dim != 7 or P.rank not in (3, 4):
        raise ValueError(f"orbit invariants are defined for 3- and 4-planes of R^7, "
                         f"got a {P.rank}-plane in R^{P.dim}")
    return data.phi if P.rank == 3 else data.phi_dual


def orbit_invariant(P: Plane, data: G2Data | None = None):
    """``s`` in [-1, 1]; exact (Fraction or QuadraticSurd) when possible."""
    data = data or g2_data()
    form = _calibrating_form(P, data)
    Q, norms = orthonormal_basis(P, data.metric)
    val = evaluate(form, Q.basis)
    prod = Fraction(1)
    for n in norms:
        prod = prod * n
    if is_exact(val) and is_exact(prod):
        s2 = val * val / prod
        if s2 == 0:
            return Fraction(0)
        root = sqrt(s2) if isinstance(s2, (int, Fraction)) else None
        if root is not None and is_exact(root):
            return root if sign(val) > 0 else -root
        return float(val) / float(np.sqrt(float(prod)))
    return float(val) / float(np.sqrt(float(prod)))


@dataclass(frozen=True)
class OrbitClass:
    """Orbit type of a plane.  ``kind`` is 'special', 'phi-plane' or 'generic';
    ``sign`` is the sign of a special oriented plane (None when unoriented)."""

    kind: str
    s: object
    sign: int | None = None

    @property
    def label(self) -> str:
        if self.kind == "special" and self.sign is not None:
            return "special+" if self.sign > 0 else "special-"
        return self.kind

    def to_json(self) -> dict:
        return {"s": format_scalar(self.s), "class": self.label}


def classify_plane(P: Plane, data: G2Data | None = None, ctx: NumericContext = EXACT) -> OrbitClass:
    data = data or g2_data()
    s = orbit_invariant(P if P.oriented else Plane(P.basis, True, P.dim), data)
    if not P.oriented:
        s = abs(s)
    if is_zero(s, ctx.tol):
        return OrbitClass("phi-plane", s if is_exact(s) else 0.0)
    if isclose(abs(s), 1, ctx.tol):
        return OrbitClass("special", s, (1 if sign(s) > 0 else -1) if P.oriented else None)
    return OrbitClass("generic", s)


def _complement(P: Plane, G) -> Plane:
    A = (P.matrix().T @ G)
    exact = linalg.is_exact_array(A)
    basis = linalg.nullspace(A if exact else A.astype(float))
    return Plane([tuple(v) for v in basis], False, P.dim)


def reversal_witness(P: Plane, data: G2Data | None = None, ctx: NumericContext = EXACT) -> np.ndarray:
    """A G2 element mapping the phi-plane P to itself with reversed orientation.

    For the 3-plane P with metric-dual direction w of ``phi_dual(u1,u2,u3,.)``
    the witness is the reflection ``-1`` on ``P + span(w)``, ``+1`` on its
    complement; in standard position this is diag(-1,-1,-1,-1,1,1,1).
    4-planes are handled through their orthogonal 3-plane.  The construction
    is rational for rational planes.
    """
    data = data or g2_data()
    cls = classify_plane(P.unoriented(), data, ctx)
    if cls.kind != "phi-plane":
        raise NotReversible(f"{cls.label} plane (s={cls.s}) cannot be reversed by G2")
    G = data.metric.matrix
    if P.rank == 4:
        P = _complement(P, G)
    exact = all(is_exact(x) for v in P.basis for x in v)
    contracted = data.phi_dual
    for u in P.basis:
        contracted = interior_product(u, contracted)
    w = np.array(contracted.coefficient_vector(), dtype=object)
    w = linalg.inverse(G) @ w if not data.metric.is_identity else w
    Q = np.column_stack([P.matrix(), w.reshape(-1, 1)])
    if not exact:
        Q = Q.astype(float)
        G = G.astype(float)
    proj = Q @ linalg.inverse(Q.T @ G @ Q, ctx.tol) @ Q.T @ G
    return linalg.identity(P.dim, exact) - 2 * proj


# ---------------------------------------------------------------------------
# The local model around the standard phi-plane

@dataclass
class LocalModelReport:
    matrix: np.ndarray
    rank: int
    block_preserving: bool
    equivariant: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.rank == 4 and self.block_preserving and self.equivariant and not self.failures

    def to_json(self) -> dict:
        return {"rank": self.rank, "blockPreserving": self.block_preserving,
                "equivariant": self.equivariant, "failures": self.failures,
                "matrix": [[format_scalar(x) for x in row] for row in self.matrix]}


_XI = (X1, X2, X3)
_PERP = (R0, R1, R2, R3)
_L3 = ((0, 1, 2),)
_L2 = ((0, 1), (0, 2), (1, 2))


def _local_map_column(vec, data: G2Data) -> list:
    """(i_u phi_dual|xi, i_v phi|xi) for vec = u + v with u in mu, v in lambda."""
    u = [0] * 7
    v = [0] * 7
    u[R0] = vec[0]
    for i, ax in enumerate((R1, R2, R3)):
        v[ax] = vec[1 + i]
    xi = [[1 if j == a else 0 for j in range(7)] for a in _XI]
    three = restrict(interior_product(u, data.phi_dual), xi)
    two = restrict(interior_product(v, data.phi), xi)
    return [three.coefficient(c) for c in _L3] + [two.coefficient(c) for c in _L2]


def _rational_rotation(axis: int, c: Fraction, s: Fraction) -> np.ndarray:
    R = linalg.identity(3)
    i, j = [(1, 2), (2, 0), (0, 1)][axis]
    R[i, i], R[i, j], R[j, i], R[j, j] = c, -s, s, c
    return R


def _k_element(a) -> np.ndarray:
    h = linalg.identity(7)
    h[0:3, 0:3] = a
    h[4:7, 4:7] = a
    return h


def _forms_rep(act) -> np.ndarray:
    """Matrix of a linear action on Lambda^3 xi* + Lambda^2 xi* in the basis
    (dx123, dx12, dx13, dx23)."""
    basis = [AlternatingForm(3, 3, {c: 1}) for c in _L3] + [AlternatingForm(3, 2, {c: 1}) for c in _L2]
    cols = []
    for b in basis:
        img = act(b)
        if img.degree == 3:
            cols.append([img.coefficient(_L3[0]), 0, 0, 0])
        else:
            cols.append([0] + [img.coefficient(c) for c in _L2])
    return np.array(cols, dtype=object).T


def local_model_check(data: G2Data | None = None) -> LocalModelReport:
    """Check that (u, v) -> (i_u phi_dual|xi, i_v phi|xi) is an H-equivariant
    isomorphism from xi-perp = mu + lambda onto Lambda^3 xi* + Lambda^2 xi*,
    for xi = span(x1, x2, x3)."""
    data = data or g2_data()
    basis = [[1 if i == j else 0 for i in range(4)] for j in range(4)]
    M = np.array([_local_map_column(b, data) for b in basis], dtype=object).T
    rk = linalg.rank(M)

    group = [("z2", z2_element())]
    for ax in range(3):
        group.append((f"k_rot{ax}", _k_element(_rational_rotation(ax, Fraction(3, 5), Fraction(4, 5)))))
    failures, block_ok, equi_ok = [], True, True
    for name, h in group:
        if not (np.all(h[0:3, 3:7] == 0) and np.all(h[3:7, 0:3] == 0)):
            failures.append(f"{name}: does not preserve xi")
            continue
        perp = h[3:7, 3:7]
        if not (np.all(perp[0, 1:] == 0) and np.all(perp[1:, 0] == 0)):
            block_ok = False
            failures.append(f"{name}: mixes mu and lambda")
        hx_inv = linalg.inverse(h[0:3, 0:3])
        rho = _forms_rep(lambda f: pullback(hx_inv, f))
        if not np.all(M @ perp == rho @ M):
            equi_ok = False
            failures.append(f"{name}: map is not equivariant")
    for idx, A in enumerate(k_generators()):
        rho = _forms_rep(lambda f: lie_act(-A[0:3, 0:3], f))
        if not np.all(M @ A[3:7, 3:7] == rho @ M):
            equi_ok = False
            failures.append(f"k_gen{idx}: infinitesimal equivariance fails")
    return LocalModelReport(M, rk, block_ok, equi_ok, failures)


# ---------------------------------------------------------------------------
# Orbit-parametrising paths

def rational_angle_trig(q) -> tuple:
    """(sin, cos) of ``q * pi``; exact when q has denominator 1, 2, 3, 4 or 6."""
    q = Fraction(q)
    r = q % 2
    table = {}
    half3 = QuadraticSurd(0, Fraction(1, 2), 3)
    half2 = QuadraticSurd(0, Fraction(1, 2), 2)
    base = {
        Fraction(0): (Fraction(0), Fraction(1)),
        Fraction(1, 6): (Fraction(1, 2), half3),
        Fraction(1, 4): (half2, half2),
        Fraction(1, 3): (half3, Fraction(1, 2)),
        Fraction(1, 2): (Fraction(1), Fraction(0)),
    }
    for a, (s, c) in base.items():
        table[a] = (s, c)
        table[1 - a] = (s, -c)
        table[(1 + a) % 2] = (-s, -c)
        table[(2 - a) % 2] = (-s, c)
    if r in table:
        return table[r]
    return math.sin(float(q) * math.pi), math.cos(float(q) * math.pi)


def _vec(**coords) -> list:
    v = [Fraction(0)] * 7
    names = {"x1": X1, "x2": X2, "x3": X3, "r0": R0, "r1": R1, "r2": R2, "r3": R3}
    for k, c in coords.items():
        v[names[k]] = c
    return v


def three_plane_path(sin_t, cos_t) -> Plane:
    """(sin t d/dr1 + cos t d/dx1) ^ d/dx2 ^ d/dx3."""
    return Plane([_vec(r1=sin_t, x1=cos_t), _vec(x2=1), _vec(x3=1)])


def four_plane_path(sin_t, cos_t) -> Plane:
    """(sin t d/dr0 + cos t d/dr1) ^ d/dx1 ^ d/dx2 ^ d/dx3."""
    return Plane([_vec(r0=sin_t, r1=cos_t), _vec(x1=1), _vec(x2=1), _vec(x3=1)])


def four_plane_path_identity(sin_t, cos_t, data: G2Data | None = None):
    """Both sides of phi_dual|xi_t = sin t (sin t dr0 + cos t dr1) ^ dx123,
    as forms on the plane (in its path basis)."""
    data = data or g2_data()
    P = four_plane_path(sin_t, cos_t)
    lhs = restrict(data.phi_dual, P.basis)
    e = lambda *a: AlternatingForm.basis(7, a)
    ambient = wedge(e(R0) * sin_t + e(R1) * cos_t, e(X1, X2, X3)) * sin_t
    rhs = restrict(ambient, P.basis)
    return lhs, rhs
