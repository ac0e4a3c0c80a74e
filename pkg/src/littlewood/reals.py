"""Real inputs: exact quadratic surds and decimal literals.

A :class:`RealSpec` hands out enclosures on request. Surds refine without
limit; a literal is either an exact rational or a decimal with an implied
half-ulp uncertainty (written with a trailing ``~``), and cannot be refined
past what it declares.
"""

from __future__ import annotations

import math
import os
from abc import ABC, abstractmethod
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Optional, Sequence

from .enclosure import Enclosure, bits_for_width, sqrt_bits
from .errors import PrecisionExhausted

DEFAULT_PRECISION_CAP = 64


def precision_cap() -> int:
    """Maximum number of precision doublings; LF_PRECISION_CAP overrides."""
    raw = os.environ.get("LF_PRECISION_CAP")
    if raw:
        try:
            cap = int(raw)
        except ValueError:
            raise ValueError(f"LF_PRECISION_CAP must be an integer, got {raw!r}") from None
        if cap < 1:
            raise ValueError("LF_PRECISION_CAP must be positive")
        return cap
    return DEFAULT_PRECISION_CAP


class RealSpec(ABC):
    """A real number that can be enclosed to a requested precision."""

    @abstractmethod
    def enclosure(self, bits: int) -> Enclosure:
        """Enclosure of width at most 2**-bits when the number supports it."""

    @property
    def max_bits(self) -> Optional[int]:
        """Finest precision available, or None when unlimited."""
        return None

    @property
    def is_rational(self) -> bool:
        return False

    def saturated(self, bits: int) -> bool:
        """True when asking for more than ``bits`` cannot shrink the enclosure."""
        m = self.max_bits
        return m is not None and m <= bits

    def refine(self, width) -> Enclosure:
        enc = self.enclosure(bits_for_width(width))
        if enc.width > width:
            raise PrecisionExhausted(f"{self} cannot be enclosed to width {width}")
        return enc


@dataclass(frozen=True)
class QuadraticSurd(RealSpec):
    """The irrational (P + sqrt(D)) / Q, kept in canonical form Q | D - P**2."""

    P: int
    D: int
    Q: int

    def __post_init__(self):
        if self.D <= 0:
            raise ValueError("D must be positive")
        r = math.isqrt(self.D)
        if r * r == self.D:
            raise ValueError(f"D={self.D} is a perfect square; the value would be rational")
        if self.Q == 0:
            raise ValueError("Q must be non-zero")
        if (self.D - self.P * self.P) % self.Q:
            raise ValueError("not canonical: Q must divide D - P^2 (use QuadraticSurd.make)")

    @classmethod
    def make(cls, P: int, D: int, Q: int) -> "QuadraticSurd":
        """Build (P + sqrt(D))/Q, rescaling to canonical form when needed."""
        if Q == 0:
            raise ValueError("Q must be non-zero")
        if (D - P * P) % Q == 0:
            return cls(P, D, Q)
        # (P + sqrt D)/Q == (P|Q| + sqrt(D Q^2)) / (Q|Q|)
        m = abs(Q)
        return cls(P * m, D * m * m, Q * m)

    @classmethod
    def sqrt(cls, d: int) -> "QuadraticSurd":
        return cls(0, d, 1)

    @classmethod
    def metallic(cls, b: int) -> "QuadraticSurd":
        """The metallic mean [b; b, b, ...] = (b + sqrt(b^2 + 4)) / 2."""
        if b < 1:
            raise ValueError("metallic mean needs b >= 1")
        return cls(b, b * b + 4, 2)

    @classmethod
    def golden(cls) -> "QuadraticSurd":
        return cls.metallic(1)

    def enclosure(self, bits: int) -> Enclosure:
        s = sqrt_bits(self.D, bits + abs(self.Q).bit_length() + 2)
        return ((s + self.P) / self.Q).rounded(bits + 2)

    def __float__(self):
        return (self.P + math.sqrt(self.D)) / self.Q

    def __str__(self):
        return f"({self.P}+sqrt({self.D}))/{self.Q}"


@dataclass(frozen=True)
class LiteralReal(RealSpec):
    """A decimal or rational literal.

    ``exact`` literals denote precisely the rational written. Inexact ones
    denote some real within half a unit of the last written digit.
    """

    text: str
    exact: bool = True

    def __post_init__(self):
        self.value  # validate early

    @property
    def value(self) -> Fraction:
        try:
            return Fraction(self.text)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a decimal or rational literal: {self.text!r}") from None

    @property
    def halfwidth(self) -> Fraction:
        if self.exact:
            return Fraction(0)
        try:
            exp = Decimal(self.text).as_tuple().exponent
        except InvalidOperation:
            raise ValueError("inexact literals must be decimals") from None
        return Fraction(10) ** exp / 2

    @property
    def is_rational(self) -> bool:
        return self.exact

    @property
    def max_bits(self) -> Optional[int]:
        if self.exact:
            return None
        return bits_for_width(2 * self.halfwidth)

    def saturated(self, bits: int) -> bool:
        return self.exact or super().saturated(bits)

    def enclosure(self, bits: int) -> Enclosure:
        v, h = self.value, self.halfwidth
        return Enclosure(v - h, v + h)

    def __str__(self):
        return self.text + ("" if self.exact else "~")


_NAMED = {"phi": QuadraticSurd.golden, "golden": QuadraticSurd.golden}


def parse_real(text: str) -> RealSpec:
    """Parse a command-line real.

    Accepted forms: ``sqrtD``/``sqrt:D``, ``phi``, ``metallic:b``,
    ``surd:P:D:Q``, decimals and ``p/q`` fractions. A trailing ``~`` marks a
    decimal as inexact (half-ulp uncertainty).
    """
    s = text.strip().lower()
    if s in _NAMED:
        return _NAMED[s]()
    if s.startswith("sqrt"):
        d = s[4:].lstrip(":(").rstrip(")")
        return QuadraticSurd.sqrt(int(d))
    if s.startswith("metallic:"):
        return QuadraticSurd.metallic(int(s.split(":", 1)[1]))
    if s.startswith("surd:"):
        parts = s.split(":")[1:]
        if len(parts) != 3:
            raise ValueError("surd spec is surd:P:D:Q")
        return QuadraticSurd.make(*map(int, parts))
    if s.endswith("~"):
        return LiteralReal(s[:-1], exact=False)
    return LiteralReal(s, exact=True)


def form_enclosure(u: Sequence, a: Enclosure, b: Enclosure) -> Enclosure:
    """x(ax - y)(bx - z) over enclosures of alpha and beta."""
    x, y, z = u
    if x == 0:
        return Enclosure.point(0)
    return (a * x - y) * (b * x - z) * x


def _start_bits(u, width) -> int:
    mag = math.ceil(max(abs(Fraction(c)) for c in u)) + 1
    return max(64, bits_for_width(width) + 3 * mag.bit_length() + 8)


def refine_loop(compute, specs, start_bits: int, done):
    """Double precision from ``start_bits`` until ``done(result)``.

    ``compute(bits)`` returns an enclosure; stops with PrecisionExhausted at
    the doubling cap or when every spec is already at its finest level and a
    further round cannot change anything.
    """
    bits = start_bits
    cap = precision_cap()
    for _ in range(cap):
        res = compute(bits)
        if done(res):
            return res
        if all(s.saturated(bits) for s in specs):
            raise PrecisionExhausted("inexact literal precision cannot support the request")
        bits *= 2
    raise PrecisionExhausted(f"no decision after {cap} precision doublings")


def eval_form(u: Sequence[int], alpha: RealSpec, beta: RealSpec, width) -> Enclosure:
    """Enclosure of f(u) = x(alpha*x - y)(beta*x - z) of width at most ``width``."""
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if u[0] == 0:
        return Enclosure.point(0)
    return refine_loop(
        lambda bits: form_enclosure(u, alpha.enclosure(bits), beta.enclosure(bits)),
        (alpha, beta),
        _start_bits(u, width),
        lambda r: r.width <= width,
    )
