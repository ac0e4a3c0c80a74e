"""Thin bridge between :class:`Enclosure` and mpmath's interval context.

mpmath's ``iv`` arithmetic rounds outward, so converting its endpoints back
to exact rationals keeps every enclosure sound. Only ``log`` is needed on the
certified path; everything transcendental beyond that stays diagnostic.
"""

from contextlib import contextmanager
from fractions import Fraction

from mpmath import iv, mp
from mpmath.libmp import to_rational

from .enclosure import Enclosure


@contextmanager
def iv_prec(bits: int):
    old = iv.prec
    iv.prec = bits
    try:
        yield iv
    finally:
        iv.prec = old


def to_iv(x):
    x = Enclosure.coerce(x)
    lo = iv.mpf(x.lo.numerator) / x.lo.denominator
    hi = iv.mpf(x.hi.numerator) / x.hi.denominator
    return iv.mpf([lo.a, hi.b])


def from_iv(x) -> Enclosure:
    lo, hi = x._mpi_
    p, q = to_rational(lo)
    r, s = to_rational(hi)
    return Enclosure(Fraction(int(p), int(q)), Fraction(int(r), int(s)))


def log_enclosure(x, bits: int = 96) -> Enclosure:
    """Enclosure of ln(x) for a positive rational (or positive enclosure)."""
    x = Enclosure.coerce(x)
    if x.lo <= 0:
        raise ValueError("log of a non-positive quantity")
    with iv_prec(bits + 16):
        return from_iv(iv.log(to_iv(x)))


def log_ratio(num, den, bits: int = 96) -> Enclosure:
    """Enclosure of ln(num)/ln(den); den must be > 1."""
    if Enclosure.coerce(den).lo <= 1:
        raise ValueError("denominator log must be positive")
    with iv_prec(bits + 16):
        return from_iv(iv.log(to_iv(num)) / iv.log(to_iv(den)))


def power_enclosure(base, exponent, bits: int = 96) -> Enclosure:
    """Enclosure of base**exponent for positive base via exp(exponent*log(base))."""
    with iv_prec(bits + 16):
        return from_iv(iv.exp(to_iv(exponent) * iv.log(to_iv(base))))


def to_mpf(x: Fraction):
    """Approximate conversion for the heuristic (non-certified) paths."""
    return mp.mpf(x.numerator) / x.denominator


def from_mpf(x) -> Fraction:
    p, q = to_rational(mp.mpf(x)._mpf_)
    return Fraction(int(p), int(q))
