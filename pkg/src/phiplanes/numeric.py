"""Scalar handling shared by every module.

Coefficients are either exact (``int``, :class:`fractions.Fraction`,
:class:`QuadraticSurd`) or ``float``.  Exact values compare with ``==``;
floats compare within the tolerance of a :class:`NumericContext`.
"""

from __future__ import annotations

import math
import numbers
import os
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "NumericContext",
    "EXACT",
    "QuadraticSurd",
    "is_exact",
    "is_zero",
    "isclose",
    "as_scalar",
    "parse_scalar",
    "format_scalar",
    "exact_sqrt",
    "sqrt",
    "sign",
    "default_tol",
]


def default_tol() -> float:
    """Float tolerance, overridable through the ``G2_TOL`` environment variable."""
    raw = os.environ.get("G2_TOL")
    if raw is None:
        return 1e-9
    tol = float(raw)
    if not tol > 0:
        raise ValueError(f"G2_TOL must be positive, got {raw!r}")
    return tol


@dataclass(frozen=True)
class NumericContext:
    """Tolerance carrier.  ``tol`` only matters for float coefficients."""

    tol: float = 1e-9

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    def is_zero(self, x) -> bool:
        return is_zero(x, self.tol)

    def isclose(self, a, b) -> bool:
        return isclose(a, b, self.tol)


EXACT = NumericContext()


def _squarefree_split(n: int, bound: int = 1 << 20):
    """Write n = m**2 * d with d squarefree.  Returns None if n has a prime
    factor above ``bound`` that could not be resolved."""
    if n == 0:
        return 0, 1
    m, d = 1, 1
    p = 2
    while p * p <= n and p <= bound:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        m *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    if n > 1:
        r = math.isqrt(n)
        if r * r == n:
            m *= r
        elif p * p <= n:
            return None
        else:
            d *= n
    return m, d


class QuadraticSurd:
    """Exact element ``a + b*sqrt(d)`` of a real quadratic field.

    ``d`` is a squarefree integer > 1.  Results with ``b == 0`` collapse to
    :class:`Fraction` so rational arithmetic stays rational.
    """

    __slots__ = ("a", "b", "d")

    def __new__(cls, a, b, d: int):
        b = Fraction(b)
        if b == 0:
            return Fraction(a)
        self = object.__new__(cls)
        self.a = Fraction(a)
        self.b = b
        self.d = int(d)
        return self

    @classmethod
    def sqrt_of(cls, d: int):
        return cls(0, 1, d)

    def _coerce(self, other):
        if isinstance(other, QuadraticSurd):
            if other.d != self.d:
                raise ValueError(
                    f"cannot mix sqrt({self.d}) and sqrt({other.d}) surds")
            return other.a, other.b
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        if isinstance(other, float):
            return float(self) + other
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return QuadraticSurd(self.a + c[0], self.b + c[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, float):
            return float(self) * other
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        a, b = c
        return QuadraticSurd(self.a * a + self.b * b * self.d,
                             self.a * b + self.b * a, self.d)

    __rmul__ = __mul__

    def conjugate(self):
        return QuadraticSurd(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def __truediv__(self, other):
        if isinstance(other, float):
            return float(self) / other
        if isinstance(other, (int, Fraction)):
            return QuadraticSurd(self.a / other, self.b / other, self.d)
        if isinstance(other, QuadraticSurd):
            return (self * other.conjugate()) / other.norm()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, float):
            return other / float(self)
        if isinstance(other, (int, Fraction)):
            return self.conjugate() * Fraction(other) / self.norm()
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return float(self) ** n
        if n < 0:
            return 1 / (self ** (-n))
        out = Fraction(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, QuadraticSurd):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, (int, Fraction)):
            return False  # b != 0 by construction
        if isinstance(other, float):
            return float(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a**2 with b**2 d
        return sa if self.a * self.a > self.b * self.b * self.d else sb

    def __lt__(self, other):
        return sign(self - other) < 0

    def __le__(self, other):
        return sign(self - other) <= 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __ge__(self, other):
        return sign(self - other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"QuadraticSurd({self.a}, {self.b}, {self.d})"

    def __str__(self):
        if self.a == 0:
            return f"{self.b}*sqrt({self.d})"
        return f"{self.a}+{self.b}*sqrt({self.d})"


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, QuadraticSurd)) and not isinstance(x, bool)


def is_zero(x, tol: float = 1e-9) -> bool:
    if is_exact(x):
        return x == 0
    return abs(float(x)) <= tol


def isclose(a, b, tol: float = 1e-9) -> bool:
    return is_zero(a - b, tol)


def sign(x) -> int:
    if isinstance(x, QuadraticSurd):
        return x.sign()
    return (x > 0) - (x < 0)


def as_scalar(x):
    """Normalise a user-supplied number: ints/strings become Fractions,
    numpy floats become Python floats."""
    if isinstance(x, QuadraticSurd) or isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, numbers.Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"unsupported scalar {x!r}")


_RAT = r"[+-]?\d+(?:/\d+)?"
_SURD = re.compile(rf"^(?:({_RAT})\s*([+-]))?\s*(?:({_RAT})\s*\*\s*|([+-]))?"
                   rf"sqrt\(\s*(\d+)\s*\)(?:\s*/\s*(\d+))?$")


def _rational(s: str, text: str) -> Fraction:
    num, slash, den = s.strip().partition("/")
    try:
        return Fraction(int(num), int(den)) if slash else Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def parse_scalar(text: str):
    """Parse ``"-3/4"``, ``"2"`` or a surd such as ``"sqrt(3)/2"``,
    ``"1/2*sqrt(3)"`` or ``"1+-2*sqrt(5)"`` (the form :func:`format_scalar`
    writes).  Decimals are rejected."""
    if not isinstance(text, str):
        raise TypeError("expected a string")
    s = text.strip()
    if not s or any(ch in s for ch in ".eE"):
        raise ValueError(f"not a rational literal: {text!r}")
    if "sqrt" not in s:
        return _rational(s, text)
    m = _SURD.match(s)
    if m is None:
        raise ValueError(f"not a surd literal: {text!r}")
    a, op, coef, lone_sign, d, den = m.groups()
    b = _rational(coef, text) if coef else Fraction(-1 if lone_sign == "-" else 1)
    if op == "-":
        b = -b
    if den is not None:
        if int(den) == 0:
            raise ValueError(f"division by zero in {text!r}")
        b = b / int(den)
    root = exact_sqrt(int(d))
    return (_rational(a, text) if a else Fraction(0)) + b * root


def format_scalar(x):
    """JSON-friendly rendering: ``"p/q"`` for rationals, ``"b*sqrt(d)"`` style
    strings for surds, float otherwise."""
    if isinstance(x, QuadraticSurd):
        return str(x)
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        q = Fraction(x)
        return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
    return float(x)


def exact_sqrt(q):
    """Exact square root of a non-negative rational, as a Fraction or a
    QuadraticSurd.  Returns None when no exact form is available."""
    if not isinstance(q, (int, Fraction)):
        return None
    q = Fraction(q)
    if q < 0:
        raise ValueError("square root of a negative number")
    if q == 0:
        return Fraction(0)
    # sqrt(p/r) = sqrt(p*r)/r
    n = q.numerator * q.denominator
    split = _squarefree_split(n)
    if split is None:
        return None
    m, d = split
    if d == 1:
        return Fraction(m, q.denominator)
    return QuadraticSurd(0, Fraction(m, q.denominator), d)


def sqrt(x):
    """Square root, exact whenever possible, float otherwise."""
    if is_exact(x):
        r = exact_sqrt(x)
        if r is not None:
            return r
    return math.sqrt(float(x))
