"""Continued fractions, convergents and approximation errors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .enclosure import Enclosure, nearest_int_distance
from .errors import AmbiguousEnclosure
from .reals import LiteralReal, QuadraticSurd, RealSpec, refine_loop


@dataclass(frozen=True)
class ConvergentTable:
    """Partial quotients a_k with convergents p_k/q_k.

    ``period`` is ``(preperiod, period_length)`` for surd expansions and
    None otherwise. ``complete`` marks a terminated rational expansion.
    """

    quotients: Tuple[int, ...]
    convergents: Tuple[Tuple[int, int], ...]
    period: Optional[Tuple[int, int]] = None
    complete: bool = False

    @classmethod
    def from_quotients(cls, quotients: Sequence[int], period=None, complete=False) -> "ConvergentTable":
        conv = []
        p1, p2, q1, q2 = 1, 0, 0, 1
        for a in quotients:
            p1, p2 = a * p1 + p2, p1
            q1, q2 = a * q1 + q2, q1
            conv.append((p1, q1))
        return cls(tuple(quotients), tuple(conv), period, complete)

    def __len__(self):
        return len(self.quotients)

    def p(self, k: int) -> int:
        if k == -1:
            return 1
        if k == -2:
            return 0
        return self.convergents[k][0]

    def q(self, k: int) -> int:
        if k == -1:
            return 0
        if k == -2:
            return 1
        return self.convergents[k][1]

    def convergent(self, k: int) -> Fraction:
        return Fraction(self.p(k), self.q(k))


def cf_expand_surd(s: QuadraticSurd, count: int) -> ConvergentTable:
    """Exact expansion of a quadratic surd with period detection."""
    if count < 1:
        raise ValueError("count must be >= 1")
    P, D, Q = s.P, s.D, s.Q
    r = math.isqrt(D)
    seen = {}
    quotients = []
    period = None
    while len(quotients) < count:
        if period is None:
            state = (P, Q)
            if state in seen:
                start = seen[state]
                period = (start, len(quotients) - start)
                break
            seen[state] = len(quotients)
        a = (P + r) // Q if Q > 0 else (P + r + 1) // Q
        quotients.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
    if period is not None:
        # the state repeated, so the remaining quotients cycle
        pre, plen = period
        while len(quotients) < count:
            quotients.append(quotients[pre + (len(quotients) - pre) % plen])
    else:
        # finish detecting the period cheaply when it shows up right after count
        state = (P, Q)
        if state in seen:
            start = seen[state]
            period = (start, len(quotients) - start)
    return ConvergentTable.from_quotients(quotients, period)


def surd_period(s: QuadraticSurd) -> Tuple[int, int]:
    """(preperiod, period length) of a surd expansion."""
    n = 8
    while True:
        t = cf_expand_surd(s, n)
        if t.period is not None:
            return t.period
        n *= 2


def cf_expand_literal(x: LiteralReal, count: int) -> ConvergentTable:
    """Expansion of a literal, certified quotient by quotient.

    Exact literals expand to their terminating rational expansion (which may
    be shorter than ``count``). For inexact literals both ends of the
    enclosure are expanded together; once their floors disagree the
    expansion stops with :class:`AmbiguousEnclosure`, carrying the certified
    prefix in ``.certified``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    enc = x.enclosure(0)
    lo, hi = enc.lo, enc.hi
    out = []
    while len(out) < count:
        a = math.floor(lo)
        if math.floor(hi) != a:
            raise AmbiguousEnclosure(
                f"enclosure straddles an integer after {len(out)} certified quotients", certified=out
            )
        out.append(a)
        flo, fhi = lo - a, hi - a
        if flo == 0 and fhi == 0:
            return ConvergentTable.from_quotients(out, complete=True)
        if flo == 0:
            if len(out) < count:
                raise AmbiguousEnclosure(
                    f"cannot tell whether the expansion stops after {len(out)} quotients", certified=out
                )
            break
        lo, hi = 1 / fhi, 1 / flo
    return ConvergentTable.from_quotients(out)


def convergent_table(spec: RealSpec, count: int) -> ConvergentTable:
    if isinstance(spec, QuadraticSurd):
        return cf_expand_surd(spec, count)
    if isinstance(spec, LiteralReal):
        return cf_expand_literal(spec, count)
    raise TypeError(f"no expansion for {type(spec).__name__}")


def metallic_q(b: int, n: int) -> int:
    """Denominator q_n of [b; b, b, ...] from q_0 = 1, q_1 = b."""
    if b < 1 or n < 0:
        raise ValueError("need b >= 1 and n >= 0")
    q0, q1 = 1, b
    for _ in range(n):
        q0, q1 = q1, b * q1 + q0
    return q0


def metallic_q_closed(b: int, n: int) -> int:
    """Binomial closed form: sum over k of C(n-k, k) * b**(n-2k)."""
    if b < 1 or n < 0:
        raise ValueError("need b >= 1 and n >= 0")
    return sum(math.comb(n - k, k) * b ** (n - 2 * k) for k in range(n // 2 + 1))


@dataclass(frozen=True)
class ErrorRecord:
    n: int
    e_n: Enclosure
    lower: Fraction
    upper: Fraction
    verified: bool


def error_record(alpha: RealSpec, table: ConvergentTable, n: int) -> ErrorRecord:
    """Certified enclosure of e_n = alpha - p_n/q_n against its even-index bounds.

    For even n the convergent sits below alpha and
    1/(2 q_{n+1}^2) <= e_n <= 1/q_n^2.
    """
    if n < 0 or n % 2:
        raise ValueError("n must be a non-negative even index")
    if alpha.is_rational:
        raise ValueError("the approximation error is only defined here for irrational alpha")
    if len(table) < n + 2:
        raise ValueError(f"table needs entries through index {n + 1}")
    p, q, q1 = table.p(n), table.q(n), table.q(n + 1)
    lower, upper = Fraction(1, 2 * q1 * q1), Fraction(1, q * q)
    c = Fraction(p, q)

    def decided(e):
        return (e.lo > 0 or e.hi < 0) and (e.certainly_ge(lower) or e.certainly_lt(lower)) and (
            e.certainly_le(upper) or e.certainly_gt(upper)
        )

    e = refine_loop(lambda bits: alpha.enclosure(bits) - c, (alpha,), 2 * q1.bit_length() + 64, decided)
    ok = e.lo > 0 and lower <= e.lo and e.hi <= upper
    return ErrorRecord(n, e, lower, upper, ok)


def bad_approx_estimate(alpha: RealSpec, Q: int) -> Fraction:
    """Certified lower bound of min over q <= Q of q*||q*alpha||.

    This is an empirical restriction of the badly-approximable constant, not
    a bound on the infimum over all q.
    """
    if Q < 1:
        raise ValueError("Q must be >= 1")

    def compute(bits):
        a = alpha.enclosure(bits)
        if a.width * Q >= Fraction(1, 8):
            return Enclosure(-1, 0)
        return Enclosure.point(min((nearest_int_distance(a * q) * q).lo for q in range(1, Q + 1)))

    return refine_loop(compute, (alpha,), 2 * Q.bit_length() + 64, lambda r: r.lo >= 0).lo
