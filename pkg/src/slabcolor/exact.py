"""Exact arithmetic in Q(sqrt m) and Hermite normal form for sublattices of Z^2.

Every decision in the package (comparisons, floors, equality) goes through
the integer-only routines here. ``float(x)`` exists for display and as a
sort key; its result never decides anything.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

DEFAULT_RADICAND = 2

LatticeVector = tuple  # (a, b) integer pair; rank-1 results use 1-tuples


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def check_radicand(m: int) -> int:
    if isinstance(m, bool) or not isinstance(m, int):
        raise TypeError(f"radicand must be an int, got {type(m).__name__}")
    if m < 2 or not is_squarefree(m):
        raise ValueError(f"radicand must be a square-free integer >= 2, got {m}")
    return m


class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)) and not isinstance(x, bool):
        return Fraction(x)
    raise TypeError(f"expected an integer or rational, got {type(x).__name__}")


class QuadExt:
    """The exact real number ``p + q*sqrt(m)`` with rational ``p`` and ``q``.

    Instances are immutable and hashable. Arithmetic with ints and
    Fractions promotes them to ``q = 0``; mixing two radicands raises
    ``ValueError``.
    """

    __slots__ = ("p", "q", "m")

    def __init__(self, p=0, q=0, m: int = DEFAULT_RADICAND):
        object.__setattr__(self, "p", _frac(p))
        object.__setattr__(self, "q", _frac(q))
        object.__setattr__(self, "m", m)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    def __reduce__(self):
        return (QuadExt, (self.p, self.q, self.m))

    # -- coercion -----------------------------------------------------
    def _coerce(self, other) -> QuadExt:
        if isinstance(other, QuadExt):
            if other.m != self.m and other.q and self.q:
                raise ValueError(f"mixed radicands {self.m} and {other.m}")
            return other
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return QuadExt(other, 0, self.m)
        return NotImplemented

    def _radicand_with(self, other: QuadExt) -> int:
        if self.q or not other.q:
            return self.m
        return other.m

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.p + o.p, self.q + o.q, self._radicand_with(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.p, -self.q, self.m)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.p - o.p, self.q - o.q, self._radicand_with(o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        m = self._radicand_with(o)
        return QuadExt(self.p * o.p + self.q * o.q * m, self.p * o.q + self.q * o.p, m)

    __rmul__ = __mul__

    def conjugate(self) -> QuadExt:
        return QuadExt(self.p, -self.q, self.m)

    def norm(self) -> Fraction:
        """Field norm ``p^2 - q^2 m`` (zero only for zero)."""
        return self.p * self.p - self.q * self.q * self.m

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o:
            raise ZeroDivisionError("division by zero in Q(sqrt m)")
        m = self._radicand_with(o)
        if not o.q:
            return QuadExt(self.p / o.p, self.q / o.p, m)
        n = o.norm()
        num = self * o.conjugate()
        return QuadExt(num.p / n, num.q / n, m)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- order --------------------------------------------------------
    def sign(self) -> int:
        """Exact sign of ``p + q*sqrt(m)`` using only rational arithmetic."""
        sp = (self.p > 0) - (self.p < 0)
        sq = (self.q > 0) - (self.q < 0)
        if sq == 0:
            return sp
        if sp == 0 or sp == sq:
            return sq
        # opposite signs: |p| vs |q| sqrt(m), i.e. p^2 vs q^2 m (never equal)
        if self.p * self.p > self.q * self.q * self.m:
            return sp
        return sq

    def __bool__(self):
        return bool(self.p) or bool(self.q)

    def _cmp(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).sign()

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.p == o.p and self.q == o.q

    def __hash__(self):
        if not self.q:
            return hash(self.p)
        return hash((self.p, self.q, self.m))

    # -- conversions --------------------------------------------------
    def is_rational(self) -> bool:
        return not self.q

    def __float__(self):
        return float(self.p) + float(self.q) * math.sqrt(self.m)

    def floor(self) -> int:
        # x = (P + Q*sqrt(m)) / D with integers P, Q and D > 0
        den = math.lcm(self.p.denominator, self.q.denominator)
        big_p, big_q = int(self.p * den), int(self.q * den)
        root = math.isqrt(big_q * big_q * self.m)
        if big_q < 0:  # Q*sqrt(m) is irrational here, so its floor is -(root + 1)
            root = -root - 1
        return (big_p + root) // den

    def ceil(self) -> int:
        return -((-self).floor())

    def __repr__(self):
        return f"QuadExt({self.p!s}, {self.q!s}, m={self.m})"

    def __str__(self):
        return format_quad(self)


def format_quad(x: QuadExt) -> str:
    """Canonical text in the distance-set grammar (``s`` stands for sqrt m)."""
    p, q = x.p, x.q
    if not q:
        return str(p)
    qabs = abs(q)
    qterm = "s" if qabs == 1 else f"{qabs}s"
    if not p:
        return qterm if q > 0 else f"-{qabs}s"
    return f"{p}{'+' if q > 0 else '-'}{qterm}"


def format_quad_csv(x: QuadExt) -> str:
    """Fixed ``p/q+r/s*s`` rendering used in point dumps."""
    return (
        f"{x.p.numerator}/{x.p.denominator}+"
        f"{x.q.numerator}/{x.q.denominator}*s"
    )


def as_quad(x, m: int = DEFAULT_RADICAND) -> QuadExt:
    return x if isinstance(x, QuadExt) else QuadExt(x, 0, m)


_OPS = {
    "add": lambda x, y: x + y,
    "sub": lambda x, y: x - y,
    "mul": lambda x, y: x * y,
    "div": lambda x, y: x / y,
}


def quad_arith(x: QuadExt, y: QuadExt, op: str) -> QuadExt:
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}; expected one of {sorted(_OPS)}")
    return fn(x, y)


def quad_compare(x: QuadExt, y: QuadExt) -> Ordering:
    return Ordering((x - y).sign())


def quad_ceil_div(num: QuadExt, den: QuadExt) -> int:
    """Exact ``ceil(num / den)`` for positive arguments."""
    num, den = as_quad(num), as_quad(den)
    if num.sign() <= 0 or den.sign() <= 0:
        raise ValueError("quad_ceil_div needs positive numerator and denominator")
    return (num / den).ceil()


# -- Hermite normal form ------------------------------------------------


@dataclass(frozen=True)
class HNFResult:
    rank: int
    basis: tuple  # tuple of (a, b) pairs
    coords: tuple  # per input, a tuple of length ``rank``


def _normalize_direction(v):
    a, b = v
    if a < 0 or (a == 0 and b < 0):
        return (-a, -b)
    return (a, b)


def lattice_hnf(vectors: Iterable[Sequence[int]]) -> HNFResult:
    """Canonical basis of the integer span of ``vectors`` in Z^2.

    Rank 2 bases are the rows of a lower-triangular matrix
    ``[[h11, 0], [h21, h22]]`` with ``h11, h22 > 0`` and ``0 <= h21 < h11``.
    A rank 1 basis is the primitive generator whose first nonzero
    coordinate is positive.
    """
    vecs = [(int(v[0]), int(v[1])) for v in vectors]
    if not vecs:
        raise ValueError("lattice_hnf needs at least one vector")
    if all(v == (0, 0) for v in vecs):
        raise ValueError("lattice_hnf: all input vectors are zero")

    pivot = None
    a_gcd = 0
    for v in vecs:
        if v[1] == 0:
            a_gcd = math.gcd(a_gcd, v[0])
            continue
        if pivot is None:
            pivot = v
            continue
        u, w = pivot, v
        while w[1] != 0:
            k = u[1] // w[1]
            u, w = w, (u[0] - k * w[0], u[1] - k * w[1])
        pivot = u
        a_gcd = math.gcd(a_gcd, w[0])

    if pivot is None:
        basis = ((a_gcd, 0),)
    else:
        if pivot[1] < 0:
            pivot = (-pivot[0], -pivot[1])
        if a_gcd == 0:
            basis = (_normalize_direction(pivot),)
        else:
            basis = ((a_gcd, 0), (pivot[0] % a_gcd, pivot[1]))

    return HNFResult(len(basis), basis, tuple(_solve_coords(basis, v) for v in vecs))


def _solve_coords(basis, v):
    if len(basis) == 2:
        (h11, _), (h21, h22) = basis
        c2, r2 = divmod(v[1], h22)
        c1, r1 = divmod(v[0] - c2 * h21, h11)
        if r1 or r2:
            raise ArithmeticError(f"{v} is not in the lattice spanned by {basis}")
        return (c1, c2)
    (ga, gb), = basis
    if ga:
        c, r = divmod(v[0], ga)
    else:
        c, r = divmod(v[1], gb)
    if r or (c * ga, c * gb) != tuple(v):
        raise ArithmeticError(f"{v} is not a multiple of {basis[0]}")
    return (c,)
