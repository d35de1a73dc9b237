"""Sparse exterior algebra on R^n for n <= 8.

Basis monomials ``e^{i1} ^ ... ^ e^{ik}`` (i1 < ... < ik) are keyed by the
bitmask ``sum(1 << i)``; signs come from counting inversions when two
monomials are merged.  Coefficients are kept as given (exact or float) and
exact zeros are dropped on construction, so two exact forms are equal iff
their term dictionaries are equal.

Matrices follow the column convention: column j of ``L`` is the image of
basis vector j, so ``L.T`` acts on covectors and the pullback of ``e^i`` is
``sum_j L[i, j] e^j``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from .numeric import (as_scalar, format_scalar, is_exact, is_zero, parse_scalar,
                      sqrt)

__all__ = [
    "MAX_DIM",
    "AlternatingForm",
    "Multivector",
    "Metric",
    "DegenerateMetricError",
    "mask_axes",
    "axes_mask",
    "basis_masks",
    "wedge",
    "wedge_all",
    "interior_product",
    "pullback",
    "restrict",
    "evaluate",
    "hodge_star",
    "inner",
    "lie_act",
    "form_to_json",
    "form_from_json",
    "dumps",
    "loads",
]

MAX_DIM = 8


@lru_cache(maxsize=None)
def mask_axes(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def axes_mask(axes: Iterable[int]) -> int:
    m = 0
    for i in axes:
        m |= 1 << i
    return m


@lru_cache(maxsize=None)
def basis_masks(n: int, k: int) -> tuple[int, ...]:
    """All degree-k masks on R^n in lexicographic order of their axes."""
    return tuple(axes_mask(c) for c in combinations(range(n), k))


@lru_cache(maxsize=None)
def merge_sign(a: int, b: int) -> int:
    """Sign of e^a ^ e^b relative to e^(a|b); 0 when the masks overlap."""
    if a & b:
        return 0
    inversions = 0
    for j in mask_axes(b):
        inversions += bin(a >> (j + 1)).count("1")
    return -1 if inversions & 1 else 1


def _sort_sign(axes: Sequence[int]) -> tuple[int, int]:
    """(sign, mask) of the monomial e^{axes[0]} ^ e^{axes[1]} ^ ..."""
    if len(set(axes)) != len(axes):
        return 0, 0
    inversions = sum(1 for p in range(len(axes)) for q in range(p + 1, len(axes))
                     if axes[p] > axes[q])
    return (-1 if inversions & 1 else 1), axes_mask(axes)


def _clean(terms: Mapping[int, object]) -> dict[int, object]:
    return {m: c for m, c in terms.items() if not (is_exact(c) and c == 0)}


class _Graded:
    """Shared storage for forms and multivectors: homogeneous degree,
    sparse coefficients.  Instances are treated as immutable."""

    __slots__ = ("dim", "degree", "_terms")

    def __init__(self, dim: int, degree: int, terms: Mapping | None = None):
        if not 0 <= dim <= MAX_DIM:
            raise ValueError(f"dimension must be in [0, {MAX_DIM}], got {dim}")
        if degree < 0:
            raise ValueError("negative degree")
        clean = {}
        for key, c in (terms or {}).items():
            if isinstance(key, int):
                mask, s = key, 1
            else:
                s, mask = _sort_sign(tuple(key))
                if s == 0:
                    continue
            if bin(mask).count("1") != degree or mask >> dim:
                raise ValueError(f"monomial {mask_axes(mask)} incompatible with "
                                 f"degree {degree} on R^{dim}")
            c = as_scalar(c)
            clean[mask] = clean.get(mask, 0) + (c if s == 1 else -c)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "_terms", _clean(clean))

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    # construction helpers -------------------------------------------------
    @classmethod
    def zero(cls, dim: int, degree: int):
        return cls(dim, degree)

    @classmethod
    def basis(cls, dim: int, axes: Sequence[int], coeff=1):
        return cls(dim, len(axes), {tuple(axes): coeff})

    @classmethod
    def from_terms(cls, dim: int, degree: int, terms: Mapping):
        return cls(dim, degree, terms)

    def _new(self, terms, degree=None, dim=None):
        out = object.__new__(type(self))
        object.__setattr__(out, "dim", self.dim if dim is None else dim)
        object.__setattr__(out, "degree", self.degree if degree is None else degree)
        object.__setattr__(out, "_terms", _clean(terms))
        return out

    # access -----------------------------------------------------------------
    def terms(self) -> dict[tuple[int, ...], object]:
        return {mask_axes(m): c for m, c in sorted(self._terms.items(),
                                                   key=lambda kv: mask_axes(kv[0]))}

    def mask_terms(self) -> dict[int, object]:
        return dict(self._terms)

    def coefficient(self, axes: Sequence[int]):
        s, mask = _sort_sign(tuple(axes))
        if s == 0:
            return Fraction(0)
        return s * self._terms.get(mask, Fraction(0))

    def coefficient_vector(self) -> list:
        """Coefficients in the lexicographic basis of the degree."""
        return [self._terms.get(m, Fraction(0)) for m in basis_masks(self.dim, self.degree)]

    def __len__(self):
        return len(self._terms)

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self._terms.values())

    # vector space structure --------------------------------------------------
    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other):
        self._check(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out[m] + c if m in out else c
        return self._new(out)

    def __neg__(self):
        return self._new({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, _Graded):
            return NotImplemented
        scalar = as_scalar(scalar)
        return self._new({m: scalar * c for m, c in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        scalar = as_scalar(scalar)
        return self._new({m: c / scalar for m, c in self._terms.items()})

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (self.dim, self.degree, self._terms) == (other.dim, other.degree, other._terms)

    def __hash__(self):
        return hash((type(self).__name__, self.dim, self.degree,
                     frozenset(self._terms.items())))

    def is_zero(self, tol: float = 1e-9) -> bool:
        return all(is_zero(c, tol) for c in self._terms.values())

    def isclose(self, other, tol: float = 1e-9) -> bool:
        return (self - other).is_zero(tol)

    def norm2(self):
        """Sum of squared coefficients (the Euclidean norm squared)."""
        total = Fraction(0)
        for c in self._terms.values():
            total = total + c * c
        return total

    def max_abs(self) -> float:
        return max((abs(float(c)) for c in self._terms.values()), default=0.0)

    def as_float(self):
        return self._new({m: float(c) for m, c in self._terms.items()})

    def __repr__(self):
        if not self._terms:
            return f"{type(self).__name__}(0, dim={self.dim}, degree={self.degree})"
        sym = "e" if isinstance(self, AlternatingForm) else "E"
        parts = []
        for axes, c in self.terms().items():
            mono = "^".join(f"{sym}{i}" for i in axes) or "1"
            parts.append(f"{c}*{mono}")
        return f"{type(self).__name__}({' + '.join(parts)}, dim={self.dim})"


class AlternatingForm(_Graded):
    """Alternating k-form on R^n with sparse coefficients."""

    __slots__ = ()

    @classmethod
    def one(cls, dim: int):
        return cls(dim, 0, {(): 1})

    @classmethod
    def volume(cls, dim: int, coeff=1):
        return cls(dim, dim, {tuple(range(dim)): coeff})

    @classmethod
    def covector(cls, coords: Sequence):
        return cls(len(coords), 1, {(i,): c for i, c in enumerate(coords)})

    def __call__(self, *vectors):
        return evaluate(self, vectors)


class Multivector(_Graded):
    """Contravariant counterpart of :class:`AlternatingForm`; degree 1 is a vector."""

    __slots__ = ()

    @classmethod
    def vector(cls, coords: Sequence):
        return cls(len(coords), 1, {(i,): c for i, c in enumerate(coords)})

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence]):
        """Decomposable multivector v1 ^ ... ^ vk (Plücker coordinates)."""
        vecs = [list(v) for v in vectors]
        n = len(vecs[0])
        k = len(vecs)
        mat = linalg.matrix(np.array(vecs, dtype=object).T) if vecs else None
        terms = {}
        for mask in basis_masks(n, k):
            rows = list(mask_axes(mask))
            terms[mask] = linalg.det(mat[rows, :])
        return cls(n, k, terms)

    def components(self) -> list:
        if self.degree != 1:
            raise ValueError("components() is only defined for vectors")
        return [self._terms.get(1 << i, Fraction(0)) for i in range(self.dim)]


def _as_vector(v, dim: int | None = None) -> list:
    if isinstance(v, Multivector):
        if v.degree != 1:
            raise ValueError("expected a degree-1 multivector")
        coords = v.components()
    else:
        coords = [as_scalar(x) for x in np.ravel(np.asarray(v, dtype=object))]
    if dim is not None and len(coords) != dim:
        raise ValueError(f"vector of length {len(coords)} on R^{dim}")
    return coords


def _check_same_dim(a: _Graded, b: _Graded):
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def wedge(a: _Graded, b: _Graded) -> _Graded:
    """Exterior product.  Degrees beyond the dimension give the zero element."""
    if type(a) is not type(b):
        raise TypeError("wedge needs two forms or two multivectors")
    _check_same_dim(a, b)
    out: dict[int, object] = {}
    for ma, ca in a._terms.items():
        for mb, cb in b._terms.items():
            s = merge_sign(ma, mb)
            if s == 0:
                continue
            c = ca * cb
            m = ma | mb
            out[m] = out.get(m, 0) + (c if s == 1 else -c)
    return a._new(out, degree=a.degree + b.degree)


def wedge_all(*items: _Graded) -> _Graded:
    out = items[0]
    for x in items[1:]:
        out = wedge(out, x)
    return out


def interior_product(v, a: AlternatingForm) -> AlternatingForm:
    """Contraction ``i_v a`` of a vector into the first slot of a form."""
    if a.degree == 0:
        raise ValueError("interior product of a 0-form")
    v = _as_vector(v, a.dim)
    out: dict[int, object] = {}
    for mask, c in a._terms.items():
        for pos, j in enumerate(mask_axes(mask)):
            if is_exact(v[j]) and v[j] == 0:
                continue
            term = v[j] * c
            m = mask & ~(1 << j)
            out[m] = out.get(m, 0) + (-term if pos & 1 else term)
    return a._new(out, degree=a.degree - 1)


def pullback(L, a: AlternatingForm) -> AlternatingForm:
    """Pullback along a linear map R^m -> R^n given as an n x m matrix."""
    L = np.asarray(L)
    if L.ndim != 2 or L.shape[0] != a.dim:
        raise ValueError(f"map of shape {L.shape} cannot pull back a form on R^{a.dim}")
    m = L.shape[1]
    rows = [{1 << j: as_scalar(L[i, j]) for j in range(m)
             if not (is_exact(as_scalar(L[i, j])) and as_scalar(L[i, j]) == 0)}
            for i in range(a.dim)]
    out: dict[int, object] = {}
    for mask, c in a._terms.items():
        acc: dict[int, object] = {0: c}
        for i in mask_axes(mask):
            nxt: dict[int, object] = {}
            for ma, ca in acc.items():
                for mb, cb in rows[i].items():
                    s = merge_sign(ma, mb)
                    if s == 0:
                        continue
                    val = ca * cb
                    nxt[ma | mb] = nxt.get(ma | mb, 0) + (val if s == 1 else -val)
            acc = nxt
            if not acc:
                break
        for mm, cc in acc.items():
            out[mm] = out.get(mm, 0) + cc
    res = object.__new__(AlternatingForm)
    object.__setattr__(res, "dim", m)
    object.__setattr__(res, "degree", a.degree)
    object.__setattr__(res, "_terms", _clean(out))
    return res


def restrict(a: AlternatingForm, basis: Sequence[Sequence]) -> AlternatingForm:
    """Pullback of ``a`` to the subspace spanned by ``basis`` (vectors as rows)."""
    frame = np.array([_as_vector(v, a.dim) for v in basis], dtype=object).T
    if frame.size == 0:
        frame = np.empty((a.dim, 0), dtype=object)
    return pullback(frame, a)


def evaluate(a: AlternatingForm, vectors: Sequence):
    """a(v1, ..., vk)."""
    if len(vectors) != a.degree:
        raise ValueError(f"a {a.degree}-form needs {a.degree} arguments")
    return restrict(a, vectors).coefficient(tuple(range(a.degree)))


class DegenerateMetricError(ValueError):
    pass


class Metric:
    """Symmetric positive definite bilinear form plus an orientation sign."""

    __slots__ = ("matrix", "orientation", "_inv", "_sqrt_det", "_is_identity")

    def __init__(self, matrix, orientation: int = 1, check: bool = True):
        mat = np.asarray(matrix)
        if mat.dtype != object and mat.dtype != float:
            mat = linalg.matrix(mat)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("metric must be a square matrix")
        if orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        self.matrix = mat
        self.orientation = orientation
        n = mat.shape[0]
        if check:
            exact = mat.dtype == object
            sym = all((mat[i, j] == mat[j, i]) if exact else abs(mat[i, j] - mat[j, i]) <= 1e-12
                      for i in range(n) for j in range(n))
            if not sym:
                raise DegenerateMetricError("metric is not symmetric")
            if exact:
                if any(linalg.det(mat[:k, :k]) <= 0 for k in range(1, n + 1)):
                    raise DegenerateMetricError("metric is not positive definite")
            elif n and np.linalg.eigvalsh(mat.astype(float)).min() <= 0:
                raise DegenerateMetricError("metric is not positive definite")
        self._is_identity = all(
            (mat[i, j] == (1 if i == j else 0)) for i in range(n) for j in range(n))
        self._inv = None
        self._sqrt_det = None

    @classmethod
    def euclidean(cls, n: int, orientation: int = 1):
        return cls(linalg.identity(n), orientation, check=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_identity(self) -> bool:
        return self._is_identity

    def inverse(self):
        if self._inv is None:
            object.__setattr__(self, "_inv", linalg.inverse(self.matrix))
        return self._inv

    def sqrt_det(self):
        if self._sqrt_det is None:
            object.__setattr__(self, "_sqrt_det", sqrt(linalg.det(self.matrix)))
        return self._sqrt_det

    def volume_form(self) -> AlternatingForm:
        return AlternatingForm.volume(self.dim, self.orientation * self.sqrt_det())

    def raise_indices(self, a: AlternatingForm) -> AlternatingForm:
        """Components of the multivector metric-dual to ``a``, as a form."""
        return a if self._is_identity else pullback(self.inverse(), a)

    def with_orientation(self, orientation: int) -> "Metric":
        return Metric(self.matrix, orientation, check=False)

    def __eq__(self, other):
        if not isinstance(other, Metric):
            return NotImplemented
        return (self.orientation == other.orientation
                and self.matrix.shape == other.matrix.shape
                and bool(np.all(self.matrix == other.matrix)))

    def __repr__(self):
        return f"Metric(orientation={self.orientation}, matrix=\n{self.matrix})"


def _check_metric(a: AlternatingForm, g: Metric):
    if g.dim != a.dim:
        raise ValueError(f"metric on R^{g.dim} used with a form on R^{a.dim}")


def inner(a: AlternatingForm, b: AlternatingForm, g: Metric | None = None):
    """Induced inner product on k-forms."""
    g = g or Metric.euclidean(a.dim)
    _check_metric(a, g)
    if a.degree != b.degree:
        raise ValueError("inner product of forms of different degree")
    raised = g.raise_indices(a)
    total = Fraction(0)
    for m, c in raised._terms.items():
        if m in b._terms:
            total = total + c * b._terms[m]
    return total


def hodge_star(a: AlternatingForm, g: Metric | None = None) -> AlternatingForm:
    """Hodge dual, defined by ``b ^ *a = <b, a> vol_g`` for all b."""
    g = g or Metric.euclidean(a.dim)
    _check_metric(a, g)
    n = a.dim
    full = (1 << n) - 1
    raised = g.raise_indices(a)
    scale = g.sqrt_det() if not g.is_identity else 1
    scale = g.orientation * scale
    out = {}
    for m, c in raised._terms.items():
        comp = full & ~m
        out[comp] = merge_sign(m, comp) * scale * c
    return a._new(out, degree=n - a.degree)


def lie_act(A, a: AlternatingForm) -> AlternatingForm:
    """Infinitesimal action (A.a)(u1..uk) = sum_i a(u1, .., A u_i, .., uk)."""
    A = np.asarray(A)
    if A.shape != (a.dim, a.dim):
        raise ValueError(f"endomorphism of shape {A.shape} on R^{a.dim}")
    nz = [[(i, as_scalar(A[j, i])) for i in range(a.dim)
           if not (is_exact(as_scalar(A[j, i])) and as_scalar(A[j, i]) == 0)]
          for j in range(a.dim)]
    out: dict[int, object] = {}
    for mask, c in a._terms.items():
        for j in mask_axes(mask):
            rest = mask & ~(1 << j)
            for i, aji in nz[j]:
                if rest >> i & 1:
                    continue
                # e^j in its slot becomes e^i: reorder relative to the rest
                s = merge_sign(1 << j, rest) * merge_sign(1 << i, rest)
                m = rest | (1 << i)
                val = aji * c
                out[m] = out.get(m, 0) + (val if s == 1 else -val)
    return a._new(out)


# ---------------------------------------------------------------------------
# JSON

def form_to_json(a: _Graded) -> dict:
    return {
        "dim": a.dim,
        "degree": a.degree,
        "terms": [{"axes": list(axes), "coeff": format_scalar(c)}
                  for axes, c in a.terms().items()],
    }


def form_from_json(obj: Mapping, cls=AlternatingForm) -> _Graded:
    """Inverse of :func:`form_to_json`; validates the schema strictly."""
    try:
        dim = obj["dim"]
        degree = obj["degree"]
        raw_terms = obj["terms"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed form JSON: {exc}") from exc
    if not (isinstance(dim, int) and isinstance(degree, int)) or isinstance(dim, bool):
        raise ValueError("dim and degree must be integers")
    if not isinstance(raw_terms, list):
        raise ValueError("terms must be a list")
    terms = {}
    for t in raw_terms:
        axes = t.get("axes") if isinstance(t, dict) else None
        if (not isinstance(axes, list) or len(axes) != degree
                or any(not isinstance(i, int) or isinstance(i, bool) for i in axes)
                or any(x >= y for x, y in zip(axes, axes[1:]))
                or any(i < 0 or i >= dim for i in axes)):
            raise ValueError(f"bad axes {axes!r}")
        coeff = t.get("coeff")
        if isinstance(coeff, str):
            c = parse_scalar(coeff)
        elif isinstance(coeff, float):
            c = coeff
        else:
            raise ValueError(f"bad coefficient {coeff!r}")
        mask = axes_mask(axes)
        if mask in terms:
            raise ValueError(f"duplicate axes {axes!r}")
        terms[mask] = c
    return cls(dim, degree, terms)


def dumps(a: _Graded) -> str:
    return json.dumps(form_to_json(a), separators=(",", ":"))


def loads(text: str, cls=AlternatingForm) -> _Graded:
    return form_from_json(json.loads(text), cls)
