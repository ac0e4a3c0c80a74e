"""Stage-by-stage witness search.

One stage (index n) runs: hypotheses on the convergent denominators q_a =
q_{2n}(alpha), q_b = q_{2n}(beta); the exponent delta inside
(4/3, (3 + 4 gamma - eta)/5]; the Dirichlet point for N = floor(q_b^delta);
the cubic along the approximation line; its epsilon-level set; and finally
the multiples of l = lcm(q_a, q_b) inside a level-set interval that avoids
x_n. Every candidate goes through :func:`verify_witness` and only certified
witnesses are reported.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

from mpmath import mp

from ._mp import log_enclosure, log_ratio, power_enclosure, to_mpf
from .contfrac import ConvergentTable, convergent_table
from .cubic import (
    CriticalPoints,
    CubicModel,
    SublevelSet,
    _p_of,
    build_cubic,
    build_line,
    critical_points,
    reduce_cubic,
    solve_levelset,
)
from .dirichlet import DirichletPoint, classify_point, find_dirichlet_point
from .enclosure import Enclosure, floor_root, nearest_int_distance
from .errors import (
    EmptyWindow,
    HypothesisViolation,
    LittlewoodError,
    NotAWitness,
    PrecisionExhausted,
    Undecidable,
    ZeroFirstCoordinate,
)
from .reals import RealSpec, form_enclosure, refine_loop

FOUR_THIRDS = Fraction(4, 3)
# exact power comparisons are skipped beyond this many bits
EXACT_POWER_BITS = 1 << 22


def mu(eta) -> Fraction:
    """Lower exponent 11/12 + eta/4 of the ratio hypothesis."""
    return Fraction(11, 12) + Fraction(eta) / 4


def pow_sign(base: int, x: Fraction, target: int) -> int:
    """Sign of base**x - target for integers base, target >= 1 and rational x >= 0.

    Uses the cleared integer comparison of base**p with target**q when that
    is of reasonable size and log enclosures otherwise.
    """
    x = Fraction(x)
    p, q = x.numerator, x.denominator
    if p * base.bit_length() + q * target.bit_length() <= EXACT_POWER_BITS:
        lhs, rhs = base ** p, target ** q
        return (lhs > rhs) - (lhs < rhs)
    bits = 96
    while bits <= 4096:
        lhs = log_enclosure(base, bits) * x
        rhs = log_enclosure(target, bits)
        if lhs.certainly_lt(rhs):
            return -1
        if lhs.certainly_gt(rhs):
            return 1
        bits *= 2
    lhs, rhs = base ** p, target ** q
    return (lhs > rhs) - (lhs < rhs)


@dataclass(frozen=True)
class HypothesisReport:
    n: int
    q_a: int
    q_b: int
    gamma: Enclosure
    l: int
    eta_min: Enclosure
    eta: Fraction
    cond1: bool
    cond2: bool
    lcm_bounds_ok: bool


def check_hypotheses(tbl_alpha: ConvergentTable, tbl_beta: ConvergentTable, n: int, eta) -> HypothesisReport:
    """Ratio condition q_b^(11/12+eta/4) <= q_a <= q_b and lcm condition l <= q_b^(1+eta)."""
    eta = Fraction(eta)
    if not 0 <= eta < Fraction(1, 3):
        raise ValueError("eta must lie in [0, 1/3)")
    k = 2 * n
    if len(tbl_alpha) <= k or len(tbl_beta) <= k:
        raise ValueError(f"tables must contain index {k}")
    return hypotheses_for(tbl_alpha.q(k), tbl_beta.q(k), eta, n)


def hypotheses_for(q_a: int, q_b: int, eta, n: int = 0) -> HypothesisReport:
    eta = Fraction(eta)
    if q_a < 1 or q_b < 2:
        raise ValueError("need q_a >= 1 and q_b >= 2 for the logarithmic ratio")
    l = math.lcm(q_a, q_b)
    gamma = log_ratio(q_a, q_b)
    eta_min = log_ratio(l, q_b) - 1
    cond1 = q_a <= q_b and pow_sign(q_b, mu(eta), q_a) <= 0
    cond2 = pow_sign(q_b, 1 + eta, l) >= 0
    return HypothesisReport(n, q_a, q_b, gamma, l, eta_min, eta, cond1, cond2, q_b <= l <= q_a * q_b)


@dataclass(frozen=True)
class DeltaWindow:
    lo: Fraction
    hi: Enclosure
    chosen: Fraction


def _simplest_between(a: Fraction, b: Fraction) -> Fraction:
    """Fraction with the smallest denominator in [a, b] (0 < a < b)."""
    fl = math.floor(a)
    if fl + 1 <= b or a == fl:
        return Fraction(fl if a == fl else fl + 1)
    # a and b share the integer part; recurse on reciprocals of the fractional parts
    return fl + 1 / _simplest_between(1 / (b - fl), 1 / (a - fl))


def delta_window(gamma, eta, delta=None) -> DeltaWindow:
    """Window (4/3, (3 + 4 gamma - eta)/5] for the exponent delta.

    The window is non-empty exactly when gamma > 11/12 + eta/4. ``chosen``
    is the midpoint when that is a modest fraction, otherwise the simplest
    fraction near it. An explicit ``delta`` is validated instead.
    """
    gamma = Enclosure.coerce(gamma)
    eta = Fraction(eta)
    m = mu(eta)
    if gamma.hi <= m:
        raise EmptyWindow(f"gamma <= 11/12 + eta/4 = {m}")
    if not gamma.lo > m:
        raise Undecidable("gamma enclosure straddles 11/12 + eta/4")
    hi = (gamma * 4 + 3 - eta) / 5
    if delta is not None:
        d = Fraction(delta)
        if not (FOUR_THIRDS < d and d <= hi.lo):
            raise ValueError(f"delta={d} is not certified inside the window")
        return DeltaWindow(FOUR_THIRDS, hi, d)
    mid = (FOUR_THIRDS + hi.lo) / 2
    if mid.denominator > 10**6:
        w = (hi.lo - FOUR_THIRDS) / 4
        mid = _simplest_between(mid - w, mid + w)
    return DeltaWindow(FOUR_THIRDS, hi, mid)


def n_bound(q_b: int, delta: Fraction) -> int:
    """floor(q_b ** delta) by integer root extraction."""
    delta = Fraction(delta)
    return floor_root(q_b ** delta.numerator, delta.denominator)


@dataclass(frozen=True)
class WitnessCertificate:
    u: Tuple[int, int, int]
    f_value: Enclosure
    epsilon: Fraction
    t: Optional[int] = None
    provenance: Optional[Tuple[int, int, int]] = None  # (n, l_n, k_n)
    bits: int = 0


def _witness_state(f: Enclosure, eps: Fraction):
    if (f.lo > 0 and f.hi <= eps) or (f.hi < 0 and f.lo >= -eps):
        return True
    if f.lo > eps or f.hi < -eps or (f.lo == f.hi == 0):
        return False
    return None


def verify_witness(u, alpha: RealSpec, beta: RealSpec, epsilon, *, t=None, provenance=None) -> WitnessCertificate:
    """Certify 0 < |f(u)| <= epsilon or raise NotAWitness / Undecidable."""
    u = tuple(int(c) for c in u)
    if u[0] == 0:
        raise ZeroFirstCoordinate("u[0] must be non-zero")
    eps = Fraction(epsilon)
    start = max(64, 3 * max(abs(c) for c in u).bit_length() + 64)
    used = [start]

    def compute(bits):
        used[0] = bits
        return form_enclosure(u, alpha.enclosure(bits), beta.enclosure(bits))

    try:
        f = refine_loop(compute, (alpha, beta), start, lambda r: _witness_state(r, eps) is not None)
    except PrecisionExhausted as exc:
        raise Undecidable(f"|f({u})| vs epsilon undecided") from exc
    if not _witness_state(f, eps):
        raise NotAWitness(f"|f({u})| > {eps}" if f.lo != 0 or f.hi != 0 else f"f({u}) = 0")
    return WitnessCertificate(u, f, eps, t, provenance, used[0])


def reverify(cert: WitnessCertificate, alpha: RealSpec, beta: RealSpec) -> bool:
    """Re-check a certificate at doubled precision."""
    if cert.u[0] == 0:
        return False
    f = form_enclosure(cert.u, alpha.enclosure(2 * max(cert.bits, 64)), beta.enclosure(2 * max(cert.bits, 64)))
    return bool(_witness_state(f, cert.epsilon))


@dataclass(frozen=True)
class SigmaDiagnostics:
    """Growth ratios for one stage; reported, never asserted."""

    delta: Fraction
    gamma: Enclosure
    sigma1_ratio: Enclosure
    sigma2_ratio: Enclosure
    sigma3_ratio: Enclosure
    negP_ratio: Enclosure
    length_ratio: Optional[Enclosure]
    chain_lower: Optional[Enclosure] = None
    chain_lower_ok: Optional[bool] = None
    chain_middle: Optional[float] = None
    chain_middle_ok: Optional[bool] = None


def c_gap(model: CubicModel, epsilon) -> Tuple[Enclosure, Enclosure]:
    """C(eps) - C(-eps) from the reduced data and from 3 sqrt(3) eps / ((-P)^(3/2) A)."""
    red = reduce_cubic(model, epsilon)
    direct = red.Cplus - red.Cminus
    negP = -red.P
    closed = Enclosure.point(27).root_rel(2, 256) * Fraction(epsilon) / (negP * negP.root_rel(2, 256) * model.A)
    return direct, closed


def arccos_lemma(x, y) -> Tuple[float, float, bool]:
    """Diagnostic check of |acos(x)^2 - acos(y)^2| >= |x - y|^2 on [-1, 1]."""
    with mp.workprec(128):
        x, y = mp.mpf(x), mp.mpf(y)
        lhs = abs(mp.acos(x) ** 2 - mp.acos(y) ** 2)
        rhs = (x - y) ** 2
        return float(lhs), float(rhs), bool(lhs >= rhs)


def sigma_diagnostics(model: CubicModel, delta, gamma, levelset: SublevelSet, l_n: int, q_b: int) -> SigmaDiagnostics:
    delta = Fraction(delta)
    gamma = Enclosure.coerce(gamma)
    qd = power_enclosure(q_b, delta)
    s2_scale = power_enclosure(q_b, gamma * 2 + 2 - delta) + power_enclosure(q_b, 2 + delta / 2)
    s3_scale = power_enclosure(q_b, gamma * 2 + 2)
    negP = -_p_of(model)
    diag = dict(
        delta=delta,
        gamma=gamma,
        sigma1_ratio=model.sigma1 / qd,
        sigma2_ratio=model.sigma2 / s2_scale,
        sigma3_ratio=model.sigma3 / s3_scale,
        negP_ratio=negP / power_enclosure(q_b, 2 * delta),
        length_ratio=None,
    )
    plus, minus = levelset.plus_crossings, levelset.minus_crossings
    if len(plus) == 3 and len(minus) == 3 and negP.lo > 0:
        # I_1 joins the largest crossing of each level
        a, b = max(plus, key=lambda e: e.lo), max(minus, key=lambda e: e.lo)
        length = abs(a - b)
        diag["length_ratio"] = length / l_n
        eps = levelset.epsilon
        red = reduce_cubic(model, eps)
        k = 1 / (Enclosure.point(3).root_rel(2, 128) * 36)
        sq = negP.root_rel(2, 128)
        lower = k * sq * (red.Cplus - red.Cminus) ** 2
        diag["chain_lower"] = lower
        diag["chain_lower_ok"] = length.lo >= lower.hi
        with mp.workprec(256):
            cp, cm = to_mpf(red.Cplus.mid), to_mpf(red.Cminus.mid)
            if abs(cp) <= 1 and abs(cm) <= 1:
                mid = float(to_mpf(k.mid) * to_mpf(sq.mid) * abs(mp.acos(cp) ** 2 - mp.acos(cm) ** 2))
                diag["chain_middle"] = mid
                diag["chain_middle_ok"] = float(length.mid) >= mid >= float(lower.mid)
    return SigmaDiagnostics(**diag)


@dataclass(frozen=True)
class StageReport:
    n: int
    hypotheses: HypothesisReport
    delta: Fraction
    N: int
    point: DirichletPoint
    classification: str
    outcome: str
    model: Optional[CubicModel] = None
    levelset: Optional[SublevelSet] = None
    critical: Optional[CriticalPoints] = None
    selected_interval: Optional[int] = None
    multiples_found: Tuple[int, ...] = ()
    multiples_truncated: bool = False
    witness: Optional[WitnessCertificate] = None
    diagnostics: Optional[SigmaDiagnostics] = None
    notes: Tuple[str, ...] = ()


def _x_interval(levelset: SublevelSet, x: int) -> Optional[int]:
    for i, (lo, hi) in enumerate(levelset.intervals):
        if lo.lo <= x <= hi.hi:
            return i
    return None


def run_stage(
    alpha: RealSpec,
    beta: RealSpec,
    tbl_alpha: ConvergentTable,
    tbl_beta: ConvergentTable,
    n: int,
    eta,
    epsilon,
    *,
    delta=None,
    max_multiples: int = 10**6,
    strategy: str = "auto",
    n_jobs: int = 1,
) -> StageReport:
    """Run one stage and return its report.

    The outcome is one of ``immediate`` (the Dirichlet point itself is a
    witness), ``witness``, ``no-free-interval`` (every interval contains
    x_n), ``no-multiple`` (no multiple of l in the selected interval) or
    ``no-certified-multiple``.
    """
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    hyp = check_hypotheses(tbl_alpha, tbl_beta, n, eta)
    if not hyp.cond1:
        raise HypothesisViolation(f"n={n}: ratio condition fails for q_a={hyp.q_a}, q_b={hyp.q_b}")
    window = delta_window(hyp.gamma, eta, delta)
    N = n_bound(hyp.q_b, window.chosen)
    pt = find_dirichlet_point(alpha, beta, N, strategy=strategy, n_jobs=n_jobs)
    cls = classify_point(pt, eps, alpha, beta)
    base = dict(n=n, hypotheses=hyp, delta=window.chosen, N=N, point=pt, classification=cls.kind)
    notes = []
    if cls.kind == "ImmediateWitness":
        try:
            w = verify_witness(pt.M, alpha, beta, eps, t=0, provenance=(n, hyp.l, 0))
            return StageReport(outcome="immediate", witness=w, **base)
        except NotAWitness:
            notes.append("Dirichlet point has f(M) = 0")
    if cls.bound_ok is False:
        notes.append("eps*N <= x_n <= N fails")

    line = build_line(pt, tbl_alpha, tbl_beta, n)
    model = build_cubic(line, alpha, beta)
    levelset = solve_levelset(model, eps)
    try:
        crit = critical_points(model, eps)
    except Undecidable as exc:
        crit = None
        notes.append(f"critical points: {exc}")
    diag = sigma_diagnostics(model, window.chosen, hyp.gamma, levelset, hyp.l, hyp.q_b)
    base.update(model=model, levelset=levelset, critical=crit, diagnostics=diag)

    home = _x_interval(levelset, pt.x)
    free = [i for i in range(len(levelset)) if i != home]
    if not free:
        return StageReport(outcome="no-free-interval", notes=tuple(notes), **base)
    sel = free[0]
    lo, hi = levelset.intervals[sel]
    l = hyp.l
    k_lo, k_hi = -((-lo.lo.numerator) // (lo.lo.denominator * l)), (hi.hi.numerator // hi.hi.denominator) // l
    ks = range(k_lo, k_hi + 1)
    truncated = len(ks) > max_multiples
    ks = ks[:max_multiples]
    multiples = tuple(k * l for k in ks)
    base.update(selected_interval=sel, multiples_found=multiples, multiples_truncated=truncated)
    if not multiples:
        return StageReport(outcome="no-multiple", notes=tuple(notes), **base)
    for k in ks:
        t = k * l
        u = line.integer_point(t)
        if u[0] == 0:
            continue
        try:
            w = verify_witness(u, alpha, beta, eps, t=t, provenance=(n, l, k))
        except (NotAWitness, Undecidable):
            continue
        return StageReport(outcome="witness", witness=w, notes=tuple(notes), **base)
    return StageReport(outcome="no-certified-multiple", notes=tuple(notes), **base)


@dataclass(frozen=True)
class StageError:
    n: int
    error: str
    message: str


def _stage_job(args):
    alpha, beta, n, eta, eps, kw = args
    count = 2 * n + 4
    try:
        ta, tb = convergent_table(alpha, count), convergent_table(beta, count)
        return run_stage(alpha, beta, ta, tb, n, eta, eps, **kw)
    except LittlewoodError as exc:
        return StageError(n, type(exc).__name__, str(exc))


def run_stages(alpha, beta, n_values: Iterable[int], eta, epsilon, jobs: int = 1, **kw):
    """Run independent stages, yielding reports (or StageError) in n order."""
    args = [(alpha, beta, n, Fraction(eta), Fraction(epsilon), kw) for n in n_values]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(jobs) as ex:
            yield from ex.map(_stage_job, args)
    else:
        for a in args:
            yield _stage_job(a)


@dataclass(frozen=True)
class LiminfRow:
    n: int
    term: Enclosure
    prefix_min: Fraction


def littlewood_min(alpha: RealSpec, beta: RealSpec, Q: int) -> List[LiminfRow]:
    """Rows (n, n ||n alpha|| ||n beta||, running minimum of upper bounds) for n <= Q."""
    if Q < 1:
        raise ValueError("Q must be >= 1")
    bits = 2 * Q.bit_length() + 64
    a, b = alpha.enclosure(bits), beta.enclosure(bits)
    if (a.width + b.width) * Q >= Fraction(1, 8):
        raise PrecisionExhausted("enclosures too wide for the requested Q")
    rows = []
    best = None
    for n in range(1, Q + 1):
        term = nearest_int_distance(a * n) * nearest_int_distance(b * n) * n
        best = term.hi if best is None else min(best, term.hi)
        rows.append(LiminfRow(n, term, best))
    return rows
