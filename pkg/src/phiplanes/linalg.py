"""Small dense linear algebra over exact fields and floats.

Exact matrices are numpy ``object`` arrays holding Fractions (or
QuadraticSurds); the elimination routines below never convert them to
floats.  Float matrices go through numpy/LAPACK with an explicit tolerance.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .numeric import as_scalar, is_exact, is_zero

__all__ = [
    "matrix",
    "identity",
    "is_exact_array",
    "rref",
    "rank",
    "nullspace",
    "det",
    "inverse",
    "solve",
    "span_contains",
    "expm",
    "SingularMatrixError",
]


class SingularMatrixError(ValueError):
    pass


def matrix(rows, exact: bool | None = None) -> np.ndarray:
    """Build a 2-d array.  Exact input (ints, strings, Fractions) gives an
    object array of Fractions; floats give a float64 array."""
    arr = np.asarray(rows, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    flat = [as_scalar(x) for x in arr.ravel()]
    if exact is None:
        exact = all(is_exact(x) for x in flat)
    if exact:
        out = np.empty(arr.shape, dtype=object)
        out.ravel()[:] = flat
        return out
    return np.array([float(x) for x in flat], dtype=float).reshape(arr.shape)


def identity(n: int, exact: bool = True) -> np.ndarray:
    if not exact:
        return np.eye(n)
    out = np.empty((n, n), dtype=object)
    out[...] = Fraction(0)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def is_exact_array(a) -> bool:
    a = np.asarray(a)
    return a.dtype == object and all(is_exact(x) for x in a.ravel())


def rref(a, tol: float = 1e-9):
    """Reduced row echelon form.  Returns ``(R, pivot_columns)``.

    Exact arrays are reduced exactly; float arrays use partial pivoting and
    treat entries below ``tol`` (relative to the largest entry) as zero.
    """
    a = np.asarray(a)
    exact = a.dtype == object
    m = [list(row) for row in a] if exact else a.astype(float).copy()
    nrows, ncols = a.shape
    scale = 1.0 if exact else max(1.0, float(np.abs(a).max()) if a.size else 1.0)
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        if exact:
            piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        else:
            col = np.abs(m[r:, c])
            i = int(np.argmax(col)) if col.size else 0
            piv = r + i if col.size and col[i] > tol * scale else None
        if piv is None:
            continue
        if exact:
            m[r], m[piv] = m[piv], m[r]
            p = m[r][c]
            m[r] = [x / p for x in m[r]]
            for i in range(nrows):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        else:
            m[[r, piv]] = m[[piv, r]]
            m[r] = m[r] / m[r, c]
            for i in range(nrows):
                if i != r:
                    m[i] -= m[i, c] * m[r]
        pivots.append(c)
        r += 1
    if exact:
        out = np.empty((nrows, ncols), dtype=object)
        for i in range(nrows):
            out[i, :] = m[i]
        return out, pivots
    return m, pivots


def _integer_rows(a):
    """Rows scaled to primitive integer vectors, or None for non-rational entries."""
    rows = []
    for row in a:
        if not all(isinstance(x, (int, Fraction)) for x in row):
            return None
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = den * x.denominator // math.gcd(den, x.denominator)
        rows.append([int(x * den) for x in row])
    return rows


def _integer_rank(rows: list[list[int]]) -> int:
    # forward elimination over Z, rows kept primitive to bound growth
    ncols = len(rows[0]) if rows else 0
    rows = [r for r in rows if any(r)]
    rk = 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        p = rows[rk]
        for i in range(rk + 1, len(rows)):
            q = rows[i][c]
            if q:
                g = math.gcd(p[c], q)
                a, b = p[c] // g, q // g
                r = [a * x - b * y for x, y in zip(rows[i], p)]
                g = 0
                for x in r:
                    g = math.gcd(g, x)
                rows[i] = [x // g for x in r] if g > 1 else r
        rk += 1
        if rk == len(rows):
            break
    return rk


def rank(a, tol: float = 1e-9) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    if a.dtype == object:
        rows = _integer_rows(a)
        if rows is not None:
            return _integer_rank(rows)
        return len(rref(a)[1])
    return int(np.linalg.matrix_rank(a.astype(float), tol=tol * max(1.0, np.abs(a).max())))


def nullspace(a, tol: float = 1e-9) -> list[np.ndarray]:
    """Basis of ``{x : a @ x = 0}`` as a list of column vectors (1-d arrays).

    Exact input gives the canonical RREF basis (one free variable set to 1);
    float input gives an orthonormal basis from the SVD.
    """
    a = np.asarray(a)
    nrows, ncols = a.shape
    if a.dtype != object:
        if nrows == 0:
            return list(np.eye(ncols))
        u, s, vt = np.linalg.svd(a.astype(float))
        thresh = tol * max(1.0, s.max() if s.size else 1.0)
        r = int((s > thresh).sum())
        return [vt[i].copy() for i in range(r, ncols)]
    if nrows == 0:
        return list(identity(ncols))
    R, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = np.empty(ncols, dtype=object)
        v[...] = Fraction(0)
        v[f] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -R[row, f]
        basis.append(v)
    return basis


def det(a):
    a = np.asarray(a)
    n, m = a.shape
    if n != m:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    if a.dtype != object:
        return float(np.linalg.det(a.astype(float)))
    rows = [list(r) for r in a]
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            d = -d
        p = rows[c][c]
        d = d * p
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] / p
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return d


def inverse(a, tol: float = 1e-9):
    a = np.asarray(a)
    n = a.shape[0]
    if a.dtype != object:
        if abs(np.linalg.det(a)) <= tol:
            raise SingularMatrixError("matrix is singular")
        return np.linalg.inv(a)
    aug = np.concatenate([a, identity(n)], axis=1)
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return R[:, n:]


def solve(a, b, tol: float = 1e-9):
    """Solve ``a @ x = b`` for square nonsingular ``a``."""
    return inverse(a, tol) @ b


def span_contains(basis, vectors, tol: float = 1e-9) -> bool:
    """True when every vector lies in the span of ``basis``."""
    basis = list(basis)
    vectors = list(vectors)
    if not vectors:
        return True
    if not basis:
        return all(all(is_zero(x, tol) for x in np.ravel(v)) for v in vectors)
    b = np.array([np.ravel(v) for v in basis]).T
    both = np.array([np.ravel(v) for v in basis + vectors]).T
    return rank(b, tol) == rank(both, tol)


def expm(a: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring of a truncated Taylor series.

    Intended for the moderately sized skew-symmetric generators used in
    orbit sampling; the series is summed until terms fall below machine
    precision.
    """
    a = np.asarray(a, dtype=float)
    norm = np.abs(a).sum(axis=1).max() if a.size else 0.0
    squarings = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0.5 else 0
    b = a / (2.0 ** squarings)
    term = np.eye(a.shape[0])
    out = term.copy()
    for k in range(1, 40):
        term = term @ b / k
        out = out + term
        if np.abs(term).max() < 1e-18:
            break
    for _ in range(squarings):
        out = out @ out
    return out
