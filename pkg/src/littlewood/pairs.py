"""Screening of metallic-mean pairs.

For alpha = [a; a, ...] and beta = [b; b, ...] with a < b the ratio
hypothesis holds from some index on as soon as b^mu < a with
mu = 11/12 + eta/4, which needs b above the threshold b_c(eta) solving
psi(b) = log(b - 1)/log(b) = mu. The lcm hypothesis is examined through the
prime factorizations of the convergent denominators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from ._mp import log_enclosure, log_ratio
from .contfrac import metallic_q
from .enclosure import Enclosure
from .errors import FactorizationTimeout
from .factor import RHO_BUDGET, factorize
from .pipeline import mu, pow_sign
from .reals import QuadraticSurd


def _check_eta(eta) -> Fraction:
    eta = Fraction(eta)
    if not 0 <= eta < Fraction(1, 3):
        raise ValueError("eta must lie in [0, 1/3)")
    return eta


def psi(x, width=Fraction(1, 10**12)) -> Enclosure:
    """Enclosure of log(x - 1)/log(x) for rational x > 1, of width <= ``width``."""
    x = Fraction(x)
    if x <= 1:
        raise ValueError("psi needs x > 1")
    if x == 2:
        return Enclosure.point(0)
    bits = 64
    while True:
        r = log_ratio(x - 1, x, bits)
        if r.width <= width:
            return r
        bits *= 2


def critical_b(eta, tol=Fraction(1, 10**6)) -> Enclosure:
    """Enclosure, of width <= tol, of the b > 2 with psi(b) = 11/12 + eta/4."""
    eta = _check_eta(eta)
    tol = Fraction(tol)
    target = mu(eta)
    lo, hi = Fraction(2), Fraction(4)
    while not psi(hi).certainly_gt(target):
        lo, hi = hi, hi * 2
    bits = 96
    while hi - lo > tol:
        m = (lo + hi) / 2
        # keep the bisection points on a coarse dyadic grid
        m = Fraction(math.floor(m * (1 << 64)), 1 << 64) if m.denominator > (1 << 64) else m
        v = log_enclosure(m - 1, bits) / log_enclosure(m, bits)
        if v.certainly_lt(target):
            lo = m
        elif v.certainly_gt(target):
            hi = m
        else:
            if bits > 4096:
                break
            bits *= 2
    return Enclosure(lo, hi)


def window_has_integer(b: int, eta) -> bool:
    """Whether some integer a satisfies b^(11/12 + eta/4) <= a < b.

    b itself always lies in the closed window, so the question is whether
    b - 1 already clears the lower end, decided by an exact power comparison.
    """
    if b < 2:
        raise ValueError("b must be >= 2")
    return pow_sign(b, mu(eta), b - 1) <= 0


@dataclass(frozen=True)
class MetallicPair:
    a: int
    b: int
    independent: bool

    @property
    def alpha(self) -> QuadraticSurd:
        return QuadraticSurd.metallic(self.a)

    @property
    def beta(self) -> QuadraticSurd:
        return QuadraticSurd.metallic(self.b)


def make_pair(a: int, b: int) -> MetallicPair:
    if not 1 <= a < b:
        raise ValueError("need 1 <= a < b")
    return MetallicPair(a, b, b % a != 0)


def enumerate_pairs(eta, b_max: int) -> List[MetallicPair]:
    """All (a, b) with b_c(eta) < b <= b_max and b^(11/12 + eta/4) < a < b."""
    eta = _check_eta(eta)
    m = mu(eta)
    bc = critical_b(eta, Fraction(1, 10**9))
    out = []
    for b in range(max(2, math.floor(bc.lo)), b_max + 1):
        if b <= bc.hi:
            continue
        a_min = b - 1
        while a_min >= 1 and pow_sign(b, m, a_min) < 0:
            a_min -= 1
        for a in range(a_min + 1, b):
            out.append(make_pair(a, b))
    return out


def ratio_check(pair: MetallicPair, eta, n_range: Iterable[int]) -> Dict[int, bool]:
    """Per n: q_{2n}(beta)^(11/12+eta/4) <= q_{2n}(alpha) <= q_{2n}(beta), exactly."""
    m = mu(_check_eta(eta))
    out = {}
    for n in n_range:
        qa, qb = metallic_q(pair.a, 2 * n), metallic_q(pair.b, 2 * n)
        out[n] = qa <= qb and pow_sign(qb, m, qa) <= 0
    return out


@dataclass(frozen=True)
class FactorizationReport:
    """Prime-level view of the lcm hypothesis at one index.

    ``primes`` is the sorted union of primes of both denominators and
    ``exps_a``/``exps_b`` the matching exponents. ``I_n`` holds 1-based
    indices into ``primes`` where the alpha exponent is larger. ``cond2``
    is the exact verdict on l <= q_b^(1 + eta); ``ineq1`` the sufficient
    prime-exponent condition (None when factoring did not finish).
    """

    a: int
    b: int
    n: int
    eta: Fraction
    q_a: int
    q_b: int
    l: int
    factors_a: Tuple[Tuple[int, int], ...]
    factors_b: Tuple[Tuple[int, int], ...]
    primes: Tuple[int, ...]
    exps_a: Tuple[int, ...]
    exps_b: Tuple[int, ...]
    I_n: Tuple[int, ...]
    r_n: int
    gpf_a: Optional[int]
    gpf_b: Optional[int]
    cond1: bool
    cond2: bool
    ineq1: Optional[bool]
    eta_min: Enclosure
    complete: bool
    uncertified: Tuple[int, ...] = ()


def _ineq1(primes, ea, eb, I, eta: Fraction) -> bool:
    # |I| max(a_i - b_i) log p_r <= eta r log p_1 min b_i, multiplied through by log p_r
    if not I:
        return True
    lhs_int = len(I) * max(ea[i - 1] - eb[i - 1] for i in I)
    rhs_int = len(primes) * min(eb)
    if rhs_int == 0 or eta == 0:
        return False
    if primes[0] == primes[-1]:
        return lhs_int <= eta * rhs_int
    bits = 96
    while True:
        lhs = log_enclosure(primes[-1], bits) * lhs_int
        rhs = log_enclosure(primes[0], bits) * (eta * rhs_int)
        if lhs.certainly_le(rhs):
            return True
        if lhs.certainly_gt(rhs):
            return False
        bits *= 2


def lcm_condition(pair: MetallicPair, n: int, eta, budget: int = RHO_BUDGET) -> FactorizationReport:
    eta = _check_eta(eta)
    qa, qb = metallic_q(pair.a, 2 * n), metallic_q(pair.b, 2 * n)
    l = math.lcm(qa, qb)
    cond1 = qa <= qb and pow_sign(qb, mu(eta), qa) <= 0
    cond2 = pow_sign(qb, 1 + eta, l) >= 0
    eta_min = log_ratio(l, qb) - 1 if qb > 1 else Enclosure.point(0)
    complete = True
    uncertified = ()
    fa = fb = ()
    try:
        ra = factorize(qa, budget=budget)
        fa, uncertified = ra.factors, ra.uncertified
    except FactorizationTimeout as exc:
        fa, complete = exc.partial, False
    try:
        rb = factorize(qb, budget=budget)
        fb, uncertified = rb.factors, uncertified + rb.uncertified
    except FactorizationTimeout as exc:
        fb, complete = exc.partial, False
    da, db = dict(fa), dict(fb)
    primes = tuple(sorted(set(da) | set(db)))
    ea = tuple(da.get(p, 0) for p in primes)
    eb = tuple(db.get(p, 0) for p in primes)
    I = tuple(i + 1 for i in range(len(primes)) if ea[i] > eb[i])
    ineq = _ineq1(primes, ea, eb, I, eta) if complete and primes else (True if complete else None)
    gpf_a = max(da) if complete and da else (1 if complete else None)
    gpf_b = max(db) if complete and db else (1 if complete else None)
    return FactorizationReport(
        pair.a, pair.b, n, eta, qa, qb, l, tuple(fa), tuple(fb), primes, ea, eb, I, len(primes),
        gpf_a, gpf_b, cond1, cond2, ineq, eta_min, complete, tuple(sorted(set(uncertified))),
    )


def gpf_trace(b: int, n_range: Iterable[int], budget: int = RHO_BUDGET) -> List[Tuple[int, Optional[int]]]:
    """Greatest prime factor of q_{2n} of [b; b, ...] per n (None when factoring stalls)."""
    out = []
    for n in n_range:
        q = metallic_q(b, 2 * n)
        try:
            f = factorize(q, budget=budget)
            out.append((n, max((p for p, _ in f.factors), default=1)))
        except FactorizationTimeout:
            out.append((n, None))
    return out
