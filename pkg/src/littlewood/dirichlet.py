"""Simultaneous Dirichlet points and their classification.

A Dirichlet point for (alpha, beta) and bound N is the smallest x in [1, N]
with ||x alpha|| <= N^(-1/2) and ||x beta|| <= N^(-1/2). Comparisons with
N^(-1/2) never take a square root: they are done on fixed-point integers
scaled by 2**K against the integer threshold isqrt(4**K // N).

Two search strategies exist. ``scan`` tries every x in order. ``walk`` only
visits the x where the alpha condition holds: consecutive such x differ by
one of three gaps (a, b or a + b) which are read off the continued fraction
of alpha, so the cost is proportional to the number of alpha-hits instead
of N.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .contfrac import convergent_table
from .enclosure import Enclosure
from .errors import AmbiguousEnclosure, LittlewoodError, PrecisionExhausted, Undecidable
from .reals import RealSpec, form_enclosure, precision_cap, refine_loop

SCAN_LIMIT = 10**5


@dataclass(frozen=True)
class DirichletPoint:
    N: int
    x: int
    y: int
    z: int
    res_alpha: Enclosure
    res_beta: Enclosure

    @property
    def M(self):
        return (self.x, self.y, self.z)

    @property
    def f_value(self) -> Enclosure:
        return self.res_alpha * self.res_beta * self.x


class _Fixed:
    """alpha enclosed as [lo, hi] / 2**K with integer lo, hi."""

    def __init__(self, spec: RealSpec, K: int):
        enc = spec.enclosure(K + 2)
        self.K = K
        self.half = 1 << (K - 1)
        self.lo = (enc.lo.numerator << K) // enc.lo.denominator
        self.hi = -((-enc.hi.numerator << K) // enc.hi.denominator)

    def residual(self, g: int, h: Optional[int] = None):
        Xl = g * self.lo
        if h is None:
            h = (Xl + self.half) >> self.K
        return h, Xl - (h << self.K), g * self.hi - (h << self.K)


def _threshold(c: int, N: int, K: int) -> int:
    # |R| <= T certifies R^2 N <= c^2 4^K; |R| >= T + 1 certifies the opposite
    return math.isqrt((c * c << (2 * K)) // N)


def _classify(Rl: int, Rh: int, T: int) -> Optional[bool]:
    if Rl > T or Rh < -T:
        return False
    if Rl >= -T and Rh <= T:
        return True
    return None


def _start_K(N: int) -> int:
    return (3 * N.bit_length()) // 2 + 48


def _member(spec: RealSpec, x: int, N: int, K: int):
    """Exact path: decide ||x spec|| <= N^(-1/2), refining as needed. Returns (bool, y)."""
    for _ in range(precision_cap()):
        fx = _Fixed(spec, K)
        y, Rl, Rh = fx.residual(x)
        verdict = _classify(Rl, Rh, _threshold(1, N, K))
        if verdict is not None:
            return verdict, y
        if spec.saturated(K + 2):
            break
        K *= 2
    raise PrecisionExhausted(f"cannot decide the Dirichlet condition at x={x}")


# scan ---------------------------------------------------------------------

def _scan_range(args):
    """Worker: first x in [start, stop) satisfying both conditions, or None.

    Returns ("hit", x), ("ambiguous", x) or ("none", None).
    """
    Al, Ah, Bl, Bh, K, N, start, stop = args
    T = _threshold(1, N, K)
    half = 1 << (K - 1)
    Xl, Xh = (start - 1) * Al, (start - 1) * Ah
    Yl, Yh = (start - 1) * Bl, (start - 1) * Bh
    for x in range(start, stop):
        Xl += Al
        Xh += Ah
        Yl += Bl
        Yh += Bh
        y = (Xl + half) >> K
        Rl = Xl - (y << K)
        Rh = Xh - (y << K)
        if Rl > T or Rh < -T:
            continue
        if not (Rl >= -T and Rh <= T):
            return ("ambiguous", x)
        z = (Yl + half) >> K
        Sl = Yl - (z << K)
        Sh = Yh - (z << K)
        if Sl > T or Sh < -T:
            continue
        if not (Sl >= -T and Sh <= T):
            return ("ambiguous", x)
        return ("hit", x)
    return ("none", None)


def _scan(alpha, beta, N, K, start=1, n_jobs=1, chunk=1 << 16):
    while start <= N:
        fa, fb = _Fixed(alpha, K), _Fixed(beta, K)
        base = (fa.lo, fa.hi, fb.lo, fb.hi, K, N)
        bounds = list(range(start, N + 1, chunk)) + [N + 1]
        jobs = [base + (lo, hi) for lo, hi in zip(bounds, bounds[1:])]
        if n_jobs > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(n_jobs) as ex:
                results = list(ex.map(_scan_range, jobs))
        else:
            results = []
            for j in jobs:
                results.append(_scan_range(j))
                if results[-1][0] != "none":
                    break
        found = next((r for r in results if r[0] != "none"), None)
        if found is None:
            return None
        kind, x = found
        if kind == "hit":
            return x
        ok_a, _ = _member(alpha, x, N, K)
        ok_b, _ = _member(beta, x, N, K) if ok_a else (False, 0)
        if ok_a and ok_b:
            return x
        start = x + 1
    return None


# walk ---------------------------------------------------------------------

class _Refine(Exception):
    pass


class _Table:
    def __init__(self, spec):
        self.spec = spec
        self.count = 32
        self.tbl = convergent_table(spec, self.count)

    def ensure(self, k):
        while len(self.tbl) <= k:
            if self.tbl.complete:
                raise LittlewoodError("rational input: continued fraction terminated")
            self.count *= 2
            try:
                self.tbl = convergent_table(self.spec, self.count)
            except AmbiguousEnclosure as exc:
                raise PrecisionExhausted("literal too short for the walk strategy") from exc
        return self.tbl


def _one_sided(fx: _Fixed, table: _Table, T: int, positive: bool):
    """Smallest g >= 1 with residual in (0, L] (positive) or [-L, 0).

    L is encoded by the threshold T. Candidates are the intermediate
    fractions q_k + j q_{k+1}, which carry the one-sided records.
    Returns (g, h) where h is the matching nearest integer.
    """
    k = 0 if positive else -1
    first = True
    while True:
        tbl = table.ensure(k + 2)
        a_next = tbl.quotients[k + 2]
        pk, qk, pk1, qk1 = tbl.p(k), tbl.q(k), tbl.p(k + 1), tbl.q(k + 1)

        def ok(j):
            g, h = qk + j * qk1, pk + j * pk1
            _, Rl, Rh = fx.residual(g, h)
            v = _classify(Rl, Rh, T)
            if v is None:
                raise _Refine()
            return v

        lo = 0 if (first and positive) else 1
        first = False
        if ok(a_next):
            hi = a_next
            while lo < hi:
                m = (lo + hi) // 2
                if ok(m):
                    hi = m
                else:
                    lo = m + 1
            return qk + lo * qk1, pk + lo * pk1
        k += 2


def _walk(alpha, beta, N, K):
    ta = _Table(alpha)
    while True:
        try:
            return _walk_once(alpha, beta, N, K, ta)
        except _Refine:
            if alpha.saturated(K + 2) or beta.saturated(K + 2):
                raise PrecisionExhausted("walk needs more precision than the literal provides")
            K = K * 2


def _walk_once(alpha, beta, N, K, ta):
    fa, fb = _Fixed(alpha, K), _Fixed(beta, K)
    T1, T2 = _threshold(1, N, K), _threshold(2, N, K)
    half = 1 << (K - 1)

    g_pos = _one_sided(fa, ta, T1, True)
    g_neg = _one_sided(fa, ta, T1, False)
    x, y = min(g_pos, g_neg)
    if x > N:
        return None
    _, Rl, Rh = fa.residual(x, y)

    a, ha = _one_sided(fa, ta, T2, True)
    b, hb = _one_sided(fa, ta, T2, False)
    steps = []
    for g, h in sorted([(a, ha), (b, hb)]) + [(a + b, ha + hb)]:
        _, gl, gh = fa.residual(g, h)
        steps.append((g, gl, gh, g * fb.lo, g * fb.hi))

    Yl, Yh = x * fb.lo, x * fb.hi
    Kb = fb.K
    while x <= N:
        z = (Yl + half) >> Kb
        Sl = Yl - (z << Kb)
        Sh = Yh - (z << Kb)
        if not (Sl > T1 or Sh < -T1):
            if Sl >= -T1 and Sh <= T1:
                return x
            ok, _ = _member(beta, x, N, K)
            if ok:
                return x
        for g, gl, gh, bl, bh in steps:
            nl, nh = Rl + gl, Rh + gh
            v = _classify(nl, nh, T1)
            if v is None:
                raise _Refine()
            if v:
                x += g
                Rl, Rh = nl, nh
                Yl += bl
                Yh += bh
                break
        else:
            raise LittlewoodError("gap walk lost the return set; this is a bug")
    return None


def find_dirichlet_point(alpha: RealSpec, beta: RealSpec, N: int, strategy: str = "auto", n_jobs: int = 1) -> DirichletPoint:
    """Smallest x in [1, N] with ||x alpha||, ||x beta|| <= N^(-1/2).

    ``strategy`` is ``"scan"``, ``"walk"`` or ``"auto"`` (scan up to
    ``SCAN_LIMIT``, walk beyond). Both return the same x.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if strategy == "auto":
        irrational = not (alpha.is_rational or beta.is_rational)
        strategy = "walk" if (N > SCAN_LIMIT and irrational) else "scan"
    if strategy not in ("scan", "walk"):
        raise ValueError(f"unknown strategy {strategy!r}")
    K = _start_K(N)
    if strategy == "scan":
        x = _scan(alpha, beta, N, K, n_jobs=n_jobs)
    else:
        x = _walk(alpha, beta, N, K)
    if x is None:
        raise LittlewoodError(f"no Dirichlet point in [1, {N}]")
    # confirm on the exact path and pin down y, z
    ok_a, y = _member(alpha, x, N, K)
    ok_b, z = _member(beta, x, N, K)
    if not (ok_a and ok_b):
        raise LittlewoodError("search result failed exact confirmation; this is a bug")
    bits = K + 2 * x.bit_length() + 64
    res_a = (alpha.enclosure(bits) * x - y)
    res_b = (beta.enclosure(bits) * x - z)
    return DirichletPoint(N, x, y, z, res_a, res_b)


@dataclass(frozen=True)
class Classification:
    kind: str  # "ImmediateWitness" or "Outside"
    f_value: Enclosure
    bound_ok: Optional[bool] = None


def classify_point(pt: DirichletPoint, epsilon, alpha: RealSpec = None, beta: RealSpec = None) -> Classification:
    """Immediate witness when |f(M)| <= epsilon, Outside when it exceeds it.

    For Outside points the bound epsilon*N <= x <= N is checked and
    reported. Passing alpha and beta lets a straddling enclosure be refined.
    """
    eps = Fraction(epsilon)
    f = pt.f_value

    def decided(v):
        return abs(v).certainly_le(eps) or abs(v).certainly_gt(eps)

    if not decided(f) and alpha is not None and beta is not None:
        bits = 2 * pt.x.bit_length() + 128
        try:
            f = refine_loop(
                lambda b: form_enclosure(pt.M, alpha.enclosure(b), beta.enclosure(b)), (alpha, beta), bits, decided
            )
        except PrecisionExhausted as exc:
            raise Undecidable(f"|f(M)| straddles epsilon={eps}") from exc
    if abs(f).certainly_le(eps):
        return Classification("ImmediateWitness", f)
    if abs(f).certainly_gt(eps):
        return Classification("Outside", f, eps * pt.N <= pt.x <= pt.N)
    raise Undecidable(f"|f(M)| straddles epsilon={eps}")


def badness_check(pt: DirichletPoint, C) -> bool:
    """True iff C/x < |res_alpha| and C/x < |res_beta| (certified)."""
    bound = Fraction(C) / pt.x
    verdicts = []
    for r in (abs(pt.res_alpha), abs(pt.res_beta)):
        if r.lo > bound:
            verdicts.append(True)
        elif r.hi <= bound:
            verdicts.append(False)
        else:
            raise Undecidable("residual enclosure straddles C/x")
    return all(verdicts)
