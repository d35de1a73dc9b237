"""Linear algebra behind the Cartan-Kähler argument for torsion-free G2-structures.

The ideal on the frame bundle F of R^7 is generated by the differentials of
the pulled-back invariant forms {phi, *phi, vol}.  At the identity frame a
tangent vector is ``(y, A)`` with ``y`` in R^7 (horizontal) and ``A`` in
gl(7) (vertical); the differential of a pulled-back invariant form delta is

    Omega(v0, .., vp) = -sum_m (-1)^m (A_{v_m} . delta)(y_{v0}, .., ^m, .., y_{vp})

where ``A . delta`` is :func:`phiplanes.exterior.lie_act`.  Polar spaces,
reduced tableaux h_k and the integral-element variety are all linear
systems built from this expression.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np

from . import linalg
from .exterior import AlternatingForm, evaluate, lie_act, restrict
from .g2 import R0, R1, R2, R3, X1, X2, X3, G2Data, elementary, g2_data
from .grassmann import Plane, classify_plane
from .numeric import as_scalar

__all__ = [
    "GL_DIM",
    "FIBER_DIM",
    "S_DIM",
    "Flag",
    "NonConformingFlag",
    "TableauReport",
    "standard_flag",
    "adapted_flag",
    "reduced_tableau",
    "codim_sequence",
    "flag_conformance",
    "polar_space_dimension",
    "integral_graph_space",
    "integral_element_codim",
    "ad_invariant",
    "polar_extension_report",
]

GL_DIM = 49
FIBER_DIM = GL_DIM
G2_DIM = 14
S_DIM = 7 + GL_DIM - G2_DIM  # dim F/G2 = 42


class NonConformingFlag(ValueError):
    pass


def _unit(i: int) -> list:
    return [Fraction(1) if j == i else Fraction(0) for j in range(7)]


class Flag:
    """Complete flag F_0 < F_1 < ... < F_7 = R^7, stored by an adapted basis:
    F_k is spanned by the first k vectors."""

    def __init__(self, vectors: Sequence[Sequence]):
        vecs = [tuple(as_scalar(x) for x in v) for v in vectors]
        if len(vecs) != 7 or any(len(v) != 7 for v in vecs):
            raise ValueError("a complete flag of R^7 needs 7 vectors of length 7")
        if linalg.rank(np.array(vecs, dtype=object)) != 7:
            raise ValueError("flag vectors are not linearly independent")
        self.vectors = tuple(vecs)

    @classmethod
    def from_planes(cls, planes: Sequence[Plane]) -> "Flag":
        """Build from nested planes F_1, ..., F_7 (F_0 = 0 is implicit)."""
        planes = list(planes)
        if planes and planes[0].rank == 0:
            planes = planes[1:]
        if [p.rank for p in planes] != list(range(1, 8)):
            raise ValueError("expected planes of dimensions 1..7")
        vectors = []
        for p in planes:
            if vectors and not p.contains(Plane(vectors, dim=7)):
                raise ValueError(f"F_{p.rank - 1} is not contained in F_{p.rank}")
            new = next(v for v in p.basis
                       if linalg.rank(np.array(vectors + [v], dtype=object)) == len(vectors) + 1)
            vectors.append(new)
        return cls(vectors)

    def plane(self, k: int) -> Plane:
        return Plane(self.vectors[:k], True, 7)

    def rebased(self, rng: np.random.Generator) -> "Flag":
        """Same flag, new adapted basis: a random exact unipotent-times-diagonal change."""
        vecs = [np.array(v, dtype=object) for v in self.vectors]
        out = []
        for k, v in enumerate(vecs):
            scale = Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 5)))
            w = v * scale
            for j in range(k):
                w = w + vecs[j] * Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 4)))
            out.append(tuple(w))
        return Flag(out)


def standard_flag() -> Flag:
    """(x1) < (x1,x2) < (x1,x2,x3) < +r0 < +r1 < +r2 < +r3."""
    return Flag([_unit(a) for a in (X1, X2, X3, R0, R1, R2, R3)])


def adapted_flag(l1: Sequence, l2: Sequence, l3: Sequence | None = None) -> Flag:
    """Flag R^4 + L_1 < R^4 + L_2 < R^7 with L_1 = span(l1), L_2 = span(l1, l2),
    where l1, l2, l3 are given in (r1, r2, r3) coordinates."""
    lifted = []
    for v in (l1, l2) + ((l3,) if l3 is not None else ()):
        w = [Fraction(0)] * 7
        for i, c in enumerate(v):
            w[R1 + i] = as_scalar(c)
        lifted.append(w)
    if l3 is None:
        for a in (R1, R2, R3):
            cand = lifted + [_unit(a)]
            if linalg.rank(np.array(cand, dtype=object)) == 3:
                lifted.append(_unit(a))
                break
    return Flag([_unit(a) for a in (X1, X2, X3, R0)] + lifted)


# ---------------------------------------------------------------------------
# reduced tableaux

def _invariant_generators(data: G2Data) -> list[AlternatingForm]:
    return [data.phi, data.phi_dual, data.volume]


@lru_cache(maxsize=4)
def _elementary_actions(data: G2Data):
    gens = _invariant_generators(data)
    return [[lie_act(elementary(7, i, j), d) for d in gens] for i in range(7) for j in range(7)]


def _tableau_matrix(basis: Sequence[Sequence], data: G2Data) -> np.ndarray:
    """Rows: components of iota^*(A . delta); columns: the 49 entries of A."""
    actions = _elementary_actions(data)
    cols = []
    for acts in actions:
        col = []
        for a in acts:
            if a.degree <= len(basis):
                col.extend(restrict(a, basis).coefficient_vector())
        cols.append(col)
    return np.array(cols, dtype=object).T.reshape(-1, GL_DIM)


def reduced_tableau(F: Plane, data: G2Data | None = None) -> list[np.ndarray]:
    """Basis of h(F) = {A in gl(7) : iota_F^*(A . delta) = 0 for delta in {phi, *phi, vol}}."""
    data = data or g2_data()
    mat = _tableau_matrix(F.basis, data)
    return [v.reshape(7, 7) for v in linalg.nullspace(mat)]


def codim_sequence(flag: Flag, data: G2Data | None = None) -> list[int]:
    data = data or g2_data()
    return [linalg.rank(_tableau_matrix(flag.vectors[:k], data)) for k in range(8)]


def flag_conformance(flag: Flag, data: G2Data | None = None) -> tuple[bool, str]:
    """Conforming flags have F_3 a phi-plane and F_4 coassociative."""
    data = data or g2_data()
    c3 = classify_plane(flag.plane(3).unoriented(), data)
    if c3.kind != "phi-plane":
        return False, f"F_3 is a {c3.kind} plane (s={c3.s}), not a phi-plane"
    c4 = classify_plane(flag.plane(4).unoriented(), data)
    if c4.kind != "special":
        return False, f"F_4 is a {c4.kind} plane, not coassociative"
    return True, "ok"


def ad_invariant(basis: Sequence[np.ndarray], t) -> bool:
    """True when span(basis) is preserved by A -> t A t^-1."""
    t = np.asarray(t, dtype=object)
    t_inv = linalg.inverse(t)
    moved = [(t @ A @ t_inv).ravel() for A in basis]
    return linalg.span_contains([A.ravel() for A in basis], moved)


# ---------------------------------------------------------------------------
# polar spaces on the frame bundle

def _graph_value(ell: Sequence[np.ndarray] | None, f: Sequence) -> np.ndarray | None:
    if ell is None:
        return None
    out = None
    for c, L in zip(f, ell):
        if c != 0:
            out = L * c if out is None else out + L * c
    return out


def _polar_matrix(basis: Sequence[Sequence], data: G2Data,
                  ell: Sequence[np.ndarray] | None) -> np.ndarray:
    """Rows of the polar system for E_k = graph of ``ell`` over span(basis).

    Unknowns: v = (y_0..y_6, A_00..A_66)."""
    k = len(basis)
    actions = _elementary_actions(data)
    gens = _invariant_generators(data)
    graph = [_graph_value(ell, f) for f in basis]
    rows = []
    for d_idx, delta in enumerate(gens):
        p = delta.degree
        if p > k:
            continue
        graph_acts = [lie_act(G, delta) if G is not None else None for G in graph]
        for J in combinations(range(k), p):
            fJ = [basis[j] for j in J]
            row = [Fraction(0)] * 7
            # horizontal unknowns: -sum_m (-1)^m ((ell f_jm) . delta)(e_i, f_J minus jm)
            for m, jm in enumerate(J, start=1):
                ga = graph_acts[jm]
                if ga is None or len(ga) == 0:
                    continue
                others = [basis[j] for j in J if j != jm]
                for i in range(7):
                    val = evaluate(ga, [_unit(i)] + others)
                    row[i] -= val if m % 2 else -val
            # vertical unknowns: -(E_ij . delta)(f_J)
            for ij in range(GL_DIM):
                row.append(-evaluate(actions[ij][d_idx], fJ) if p else Fraction(0))
            rows.append(row)
    if not rows:
        return np.empty((0, 7 + GL_DIM), dtype=object)
    return np.array(rows, dtype=object)


def polar_space_dimension(flag: Flag, k: int, data: G2Data | None = None,
                          ell: Sequence[np.ndarray] | None = None) -> int:
    """dim H(E_k) in T F, where E_7 is the graph of ``ell`` (zero by default)."""
    data = data or g2_data()
    mat = _polar_matrix(flag.vectors[:k], data, ell)
    return 7 + GL_DIM - (linalg.rank(mat) if mat.shape[0] else 0)


def _integral_system(data: G2Data) -> np.ndarray:
    """Linear conditions on ell (7 matrices, 343 unknowns) for the graph of ell
    to be an integral 7-plane through the identity frame."""
    gens = _invariant_generators(data)
    basis = [_unit(i) for i in range(7)]
    actions = _elementary_actions(data)
    rows = []
    for d_idx, delta in enumerate(gens):
        p = delta.degree
        if p + 1 > 7:
            continue
        for J in combinations(range(7), p + 1):
            row = [Fraction(0)] * (7 * GL_DIM)
            for m, jm in enumerate(J):
                others = [basis[j] for j in J if j != jm]
                s = -1 if m % 2 else 1
                for ij in range(GL_DIM):
                    val = evaluate(actions[ij][d_idx], others)
                    if val != 0:
                        row[jm * GL_DIM + ij] -= s * val
            rows.append(row)
    return np.array(rows, dtype=object)


@lru_cache(maxsize=1)
def _integral_nullspace(data: G2Data):
    return linalg.nullspace(_integral_system(data))


def integral_element_codim(data: G2Data | None = None) -> int:
    """Codimension of the transverse integral 7-planes at the identity frame
    inside the 343-dimensional space of transverse 7-planes."""
    data = data or g2_data()
    return linalg.rank(_integral_system(data))


def integral_graph_space(data: G2Data | None = None) -> list[list[np.ndarray]]:
    """Basis of maps ell: R^7 -> gl(7) whose graphs are integral elements."""
    data = data or g2_data()
    return [[v[m * GL_DIM:(m + 1) * GL_DIM].reshape(7, 7) for m in range(7)]
            for v in _integral_nullspace(data)]


def random_integral_graph(rng: np.random.Generator, data: G2Data | None = None,
                          terms: int = 6) -> list[np.ndarray]:
    """A random exact integral graph (sparse rational combination of the basis)."""
    data = data or g2_data()
    ns = _integral_nullspace(data)
    idx = rng.choice(len(ns), size=min(terms, len(ns)), replace=False)
    v = sum((ns[i] * Fraction(int(rng.integers(-4, 5)) or 1, int(rng.integers(1, 4))) for i in idx),
            start=np.zeros(7 * GL_DIM, dtype=object) * Fraction(0))
    return [v[m * GL_DIM:(m + 1) * GL_DIM].reshape(7, 7) for m in range(7)]


# ---------------------------------------------------------------------------
# the report

@dataclass
class TableauReport:
    c: list[int]
    h_bases: list[list[np.ndarray]] = field(repr=False)
    dim_h: list[int]
    polar_dim_F: list[int]
    polar_dim_S: list[int]
    extension_rank: list[int]
    polar_dim_F_measured: list[int]
    polar_dim_F_second_graph: list[int]
    z_dims: dict[int, int]
    z_codims: dict[int, int]
    codim_equals_rank: dict[int, bool]
    cartan_sum: int
    integral_codim: int
    nested: bool
    contains_g2: bool
    conforming: bool
    note: str = ""

    def to_json(self) -> dict:
        return {
            "c": self.c,
            "dimH_F": self.polar_dim_F,
            "dimH_S": self.polar_dim_S,
            "r": self.extension_rank,
            "r4": self.extension_rank[4],
            "zdims": [self.z_dims[k] for k in (4, 5, 6)],
            "zcodims": [self.z_codims[k] for k in (4, 5, 6)],
            "codimEqualsRank": [self.codim_equals_rank[k] for k in (4, 5, 6)],
            "cartanSum": self.cartan_sum,
            "integralCodim": self.integral_codim,
            "nested": self.nested,
            "containsG2": self.contains_g2,
        }


def polar_extension_report(flag: Flag | None = None, data: G2Data | None = None,
                           second_graph: Sequence[np.ndarray] | None = None,
                           seed: int = 0) -> TableauReport:
    """Codimensions, polar dimensions, extension ranks and Z_k bookkeeping.

    Polar spaces are computed twice on the frame bundle: with E_7 the
    horizontal plane and with E_7 the graph of ``second_graph`` (a random
    integral graph by default).  Both must agree with h_k + E_7.
    """
    data = data or g2_data()
    flag = flag or standard_flag()
    ok, why = flag_conformance(flag, data)
    if not ok:
        raise NonConformingFlag(why)
    if second_graph is None:
        second_graph = random_integral_graph(np.random.default_rng(seed), data)
    h = [reduced_tableau(flag.plane(k), data) for k in range(8)]
    dim_h = [len(b) for b in h]
    c = [GL_DIM - d for d in dim_h]
    polar_F = [d + 7 for d in dim_h]
    polar_S = [d - G2_DIM for d in polar_F]
    ranks = [polar_S[k] - k - 1 for k in range(8)]
    measured = [polar_space_dimension(flag, k, data) for k in range(8)]
    measured2 = [polar_space_dimension(flag, k, data, second_graph) for k in range(8)]
    z_dims = {4: 3 + 1 + 1 + c[4], 5: 3 + 1 + 2 + c[5], 6: 3 + 4 + c[6]}
    z_codims = {k: S_DIM - z for k, z in z_dims.items()}
    nested = all(linalg.span_contains([A.ravel() for A in h[k]], [A.ravel() for A in h[k + 1]])
                 for k in range(7))
    contains = all(linalg.span_contains([A.ravel() for A in h[k]], [A.ravel() for A in data.algebra])
                   for k in range(8))
    return TableauReport(
        c=c, h_bases=h, dim_h=dim_h, polar_dim_F=polar_F, polar_dim_S=polar_S,
        extension_rank=ranks, polar_dim_F_measured=measured,
        polar_dim_F_second_graph=measured2, z_dims=z_dims, z_codims=z_codims,
        codim_equals_rank={k: z_codims[k] == ranks[k] for k in (4, 5, 6)},
        cartan_sum=sum(c[:7]), integral_codim=integral_element_codim(data),
        nested=nested, contains_g2=contains, conforming=ok)
