"""Rational interval enclosures with outward rounding.

Every real quantity that reaches a certified decision is carried as an
:class:`Enclosure`, a closed interval ``[lo, hi]`` with exact
:class:`fractions.Fraction` endpoints. Arithmetic is exact on the endpoints,
so the result of each operation contains the exact result for every choice
of operands inside the inputs. Square and k-th roots round outward onto a
dyadic grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Optional, Union

from .errors import AmbiguousEnclosure

Number = Union[int, Fraction]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def floor_root(n: int, k: int) -> int:
    """Largest integer r with r**k <= n, for n >= 0."""
    if n < 0:
        raise ValueError("floor_root needs n >= 0")
    if k == 1 or n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def ceil_root(n: int, k: int) -> int:
    """Smallest integer r with r**k >= n, for n >= 0."""
    r = floor_root(n, k)
    return r if r ** k == n else r + 1


def bits_for_width(width: Number) -> int:
    """Smallest b >= 0 with 2**-b <= width."""
    width = _frac(width)
    if width <= 0:
        raise ValueError("width must be positive")
    q = -(-width.denominator // width.numerator)
    return max(0, (q - 1).bit_length())


def _dyadic_floor(x: Fraction, bits: int) -> Fraction:
    return Fraction((x.numerator << bits) // x.denominator, 1 << bits)


def _dyadic_ceil(x: Fraction, bits: int) -> Fraction:
    return Fraction(-((-x.numerator << bits) // x.denominator), 1 << bits)


def _root_lo(x: Fraction, k: int, bits: int) -> Fraction:
    # floor(x**(1/k) * 2**bits) == floor_root(floor(x * 2**(k*bits)), k)
    m = (x.numerator << (k * bits)) // x.denominator
    return Fraction(floor_root(m, k), 1 << bits)


def _root_hi(x: Fraction, k: int, bits: int) -> Fraction:
    m = -((-x.numerator << (k * bits)) // x.denominator)
    return Fraction(ceil_root(m, k), 1 << bits)


@dataclass(frozen=True)
class Enclosure:
    """The closed interval ``[lo, hi]`` known to contain some real number."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = _frac(self.lo), _frac(self.hi)
        if lo > hi:
            raise ValueError(f"empty enclosure [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    # construction -------------------------------------------------------
    @classmethod
    def point(cls, x: Number) -> "Enclosure":
        x = _frac(x)
        return cls(x, x)

    @classmethod
    def coerce(cls, x) -> "Enclosure":
        return x if isinstance(x, Enclosure) else cls.point(x)

    @classmethod
    def hull(cls, *items) -> "Enclosure":
        items = [cls.coerce(i) for i in items]
        return cls(min(i.lo for i in items), max(i.hi for i in items))

    # inspection ---------------------------------------------------------
    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def __float__(self) -> float:
        return float(self.mid)

    def __contains__(self, x) -> bool:
        x = _frac(x)
        return self.lo <= x <= self.hi

    def contains(self, other) -> bool:
        other = Enclosure.coerce(other)
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other) -> bool:
        other = Enclosure.coerce(other)
        return self.lo <= other.hi and other.lo <= self.hi

    def sign(self) -> Optional[int]:
        """Certified sign: 1, -1, 0 (exact zero) or None when undecided."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    # certified comparisons; False means "not certified", not "false"
    def certainly_lt(self, other) -> bool:
        return self.hi < Enclosure.coerce(other).lo

    def certainly_le(self, other) -> bool:
        return self.hi <= Enclosure.coerce(other).lo

    def certainly_gt(self, other) -> bool:
        return self.lo > Enclosure.coerce(other).hi

    def certainly_ge(self, other) -> bool:
        return self.lo >= Enclosure.coerce(other).hi

    # arithmetic ---------------------------------------------------------
    def __neg__(self):
        return Enclosure(-self.hi, -self.lo)

    def __add__(self, other):
        if isinstance(other, Enclosure):
            return Enclosure(self.lo + other.lo, self.hi + other.hi)
        o = _frac(other)
        return Enclosure(self.lo + o, self.hi + o)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Enclosure):
            return Enclosure(self.lo - other.hi, self.hi - other.lo)
        o = _frac(other)
        return Enclosure(self.lo - o, self.hi - o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Enclosure):
            o = _frac(other)
            a, b = self.lo * o, self.hi * o
            return Enclosure(a, b) if a <= b else Enclosure(b, a)
        if other.lo == other.hi:
            return self * other.lo
        if self.lo == self.hi:
            return other * self.lo
        if self.lo >= 0 and other.lo >= 0:
            return Enclosure(self.lo * other.lo, self.hi * other.hi)
        p = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Enclosure(min(p), max(p))

    __rmul__ = __mul__

    def reciprocal(self):
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("enclosure of the divisor contains 0")
        return Enclosure(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        if isinstance(other, Enclosure):
            if other.is_exact:
                return self / other.lo
            return self * other.reciprocal()
        o = _frac(other)
        if o == 0:
            raise ZeroDivisionError("division by zero")
        return self * (1 / o)

    def __rtruediv__(self, other):
        return self.reciprocal() * _frac(other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        if k == 0:
            return Enclosure.point(1)
        if k % 2 == 1 or self.lo >= 0:
            return Enclosure(self.lo ** k, self.hi ** k)
        if self.hi <= 0:
            return Enclosure(self.hi ** k, self.lo ** k)
        return Enclosure(0, max(self.lo ** k, self.hi ** k))

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Enclosure(0, max(-self.lo, self.hi))

    # rounding and roots -------------------------------------------------
    def rounded(self, bits: int) -> "Enclosure":
        """Outward rounding of both endpoints onto the grid 2**-bits."""
        return Enclosure(_dyadic_floor(self.lo, bits), _dyadic_ceil(self.hi, bits))

    def rounded_rel(self, bits: int) -> "Enclosure":
        """Outward rounding keeping about ``bits`` bits relative to the magnitude."""
        mag = max(abs(self.lo), abs(self.hi))
        if mag == 0:
            return self
        e = mag.numerator.bit_length() - mag.denominator.bit_length()
        return self.rounded(max(0, bits - e))

    def root(self, k: int, bits: int = 96) -> "Enclosure":
        """Enclosure of the real k-th root; the grid is 2**-bits."""
        if self.lo < 0:
            if k % 2 == 0:
                raise ValueError("even root of an enclosure reaching below 0")
            return -((-self).root(k, bits))
        lo = _root_lo(self.lo, k, bits) if self.lo else Fraction(0)
        if self.is_exact:
            r = Fraction(floor_root(self.lo.numerator, k), floor_root(self.lo.denominator, k))
            if r ** k == self.lo:
                return Enclosure(r, r)
        return Enclosure(lo, _root_hi(self.hi, k, bits))

    def sqrt(self, bits: int = 96) -> "Enclosure":
        return self.root(2, bits)

    def root_rel(self, k: int, bits: int = 96) -> "Enclosure":
        """k-th root keeping about ``bits`` bits relative to the result."""
        ref = abs(self.lo) if self.lo else abs(self.hi)
        if ref == 0:
            return Enclosure(0, 0)
        e = (ref.numerator.bit_length() - ref.denominator.bit_length()) // k
        return self.root(k, max(0, bits - e))

    def __repr__(self):
        if self.is_exact:
            return f"Enclosure[{self.lo}]"
        return f"Enclosure[{float(self.lo):.17g}, {float(self.hi):.17g}]"


@lru_cache(maxsize=4096)
def _isqrt_scaled(d: int, bits: int) -> int:
    return math.isqrt(d << (2 * bits))


def sqrt_enclosure(d: int, width: Number) -> Enclosure:
    """Enclosure of the square root of the non-negative integer ``d``.

    Perfect squares come back exact. Otherwise the interval sits on the
    dyadic grid 2**-b with 2**-b <= width.
    """
    if d < 0:
        raise ValueError("sqrt_enclosure needs d >= 0")
    s = math.isqrt(d)
    if s * s == d:
        return Enclosure(s, s)
    bits = bits_for_width(width)
    r = _isqrt_scaled(d, bits)
    return Enclosure(Fraction(r, 1 << bits), Fraction(r + 1, 1 << bits))


def sqrt_bits(d: int, bits: int) -> Enclosure:
    """Same as :func:`sqrt_enclosure` with the grid given in bits."""
    s = math.isqrt(d)
    if s * s == d:
        return Enclosure(s, s)
    r = _isqrt_scaled(d, bits)
    return Enclosure(Fraction(r, 1 << bits), Fraction(r + 1, 1 << bits))


def _dist_int(x: Fraction) -> Fraction:
    return abs(x - math.floor(x + Fraction(1, 2)))


def nearest_int_distance(x: Enclosure) -> Enclosure:
    """Enclosure of ||x||, the distance to the nearest integer.

    Needs ``x.width < 1/4``; wider inputs raise :class:`AmbiguousEnclosure`
    since the caller should refine before asking.
    """
    x = Enclosure.coerce(x)
    if x.width >= Fraction(1, 4):
        raise AmbiguousEnclosure("enclosure too wide to bound the distance to Z; refine first")
    a, b = _dist_int(x.lo), _dist_int(x.hi)
    lo, hi = min(a, b), max(a, b)
    if math.floor(x.hi) > math.floor(x.lo) or x.lo == math.floor(x.lo):
        lo = Fraction(0)
    if math.floor(x.hi - Fraction(1, 2)) > math.floor(x.lo - Fraction(1, 2)):
        hi = Fraction(1, 2)
    return Enclosure(lo, hi)


def nearest_int(x: Fraction) -> int:
    """Nearest integer with ties rounded up."""
    return math.floor(x + Fraction(1, 2))


@lru_cache(maxsize=1)
def e_enclosure() -> Enclosure:
    """Enclosure of Euler's number from the factorial series with a tail bound."""
    s, term = Fraction(0), Fraction(1)
    for k in range(1, 40):
        s += term
        term /= k
    # term is now 1/39!; the remaining tail is below 2/39!
    return Enclosure(s, s + 2 * term).rounded(128)
