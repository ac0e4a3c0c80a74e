"""The cubic F(t) along the approximation line and its epsilon-level sets.

Along v(t) = M - t(1, p_a/q_a, p_b/q_b) the cubic form restricts to

    F(t) = -A (t - x)(t - t_alpha)(t - t_beta),   A = e_a * e_b,

where e_a = alpha - p_a/q_a and t_alpha = (alpha x - y) / e_a (likewise for
beta). Residual signs are kept as they are; the identity above holds for
either sign.

Level sets {|F| <= eps} are located with the trigonometric (Vieta) solution
of the depressed cubic evaluated in high-precision floating point, then every
endpoint is certified by an exact sign change of F(t) -/+ eps. Only the
certified brackets are returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from mpmath import mp

from ._mp import from_mpf, to_mpf
from .contfrac import ConvergentTable
from .dirichlet import DirichletPoint
from .enclosure import Enclosure, e_enclosure
from .errors import BranchUndecidable, LittlewoodError, Undecidable
from .reals import RealSpec, form_enclosure

REL_BITS = 256
CERT_BITS = 80


@dataclass(frozen=True)
class ApproxLine:
    base: DirichletPoint
    pa: int
    qa: int
    pb: int
    qb: int
    n: int

    def point(self, t) -> Tuple[Fraction, Fraction, Fraction]:
        """v(t) = M - t(1, p_a/q_a, p_b/q_b)."""
        t = Fraction(t)
        b = self.base
        return (b.x - t, b.y - t * Fraction(self.pa, self.qa), b.z - t * Fraction(self.pb, self.qb))

    def integer_point(self, t: int) -> Tuple[int, int, int]:
        v = self.point(t)
        if any(c.denominator != 1 for c in v):
            raise ValueError(f"v({t}) is not integral")
        return tuple(int(c) for c in v)


def build_line(pt: DirichletPoint, tbl_alpha: ConvergentTable, tbl_beta: ConvergentTable, n: int) -> ApproxLine:
    k = 2 * n
    if len(tbl_alpha) <= k or len(tbl_beta) <= k:
        raise ValueError(f"tables must contain index {k}")
    return ApproxLine(pt, tbl_alpha.p(k), tbl_alpha.q(k), tbl_beta.p(k), tbl_beta.q(k), n)


@dataclass(frozen=True)
class CubicModel:
    """F(t) = -A (t - r1)(t - r2)(t - r3) with enclosed coefficients."""

    A: Enclosure
    roots: Tuple[Enclosure, Enclosure, Enclosure]
    sigma1: Enclosure
    sigma2: Enclosure
    sigma3: Enclosure
    n: int = 0

    @classmethod
    def from_roots(cls, roots: Sequence, A=1, n: int = 0) -> "CubicModel":
        r = tuple(Enclosure.coerce(x) for x in roots)
        s1 = r[0] + r[1] + r[2]
        s2 = r[0] * r[1] + r[0] * r[2] + r[1] * r[2]
        s3 = r[0] * r[1] * r[2]
        return cls(Enclosure.coerce(A), r, s1, s2, s3, n)

    @property
    def x_n(self) -> Enclosure:
        return self.roots[0]

    def evaluate(self, t) -> Enclosure:
        r1, r2, r3 = self.roots
        return -(self.A * ((t - r1) * (t - r2) * (t - r3)))

    def derivative(self, t) -> Enclosure:
        t = Enclosure.coerce(t)
        return -(self.A * (t * t * 3 - self.sigma1 * t * 2 + self.sigma2))


def _rnd(e: Enclosure) -> Enclosure:
    return e.rounded_rel(REL_BITS)


def build_cubic(line: ApproxLine, alpha: RealSpec, beta: RealSpec, bits: Optional[int] = None) -> CubicModel:
    """Cubic model of f along ``line`` with certified enclosures.

    Raises LittlewoodError if F(t) and a direct evaluation of f(v(t)) fail to
    overlap at three integral sample points.
    """
    pt = line.base
    if bits is None:
        bits = REL_BITS + 4 * max(line.qa, line.qb).bit_length() + 2 * pt.x.bit_length()
    a, b = alpha.enclosure(bits), beta.enclosure(bits)
    e_a = a - Fraction(line.pa, line.qa)
    e_b = b - Fraction(line.pb, line.qb)
    if e_a.sign() in (0, None) or e_b.sign() in (0, None):
        raise LittlewoodError("convergent error is zero or undecided; alpha and beta must be irrational")
    res_a = a * pt.x - pt.y
    res_b = b * pt.x - pt.z
    t_a, t_b = _rnd(res_a / e_a), _rnd(res_b / e_b)
    A = _rnd(e_a * e_b)
    model = CubicModel.from_roots((pt.x, t_a, t_b), A, line.n)
    model = CubicModel(A, model.roots, _rnd(model.sigma1), _rnd(model.sigma2), _rnd(model.sigma3), line.n)
    step = line.qa * line.qb
    for t in (step, -step, 2 * step):
        direct = form_enclosure(line.integer_point(t), a, b)
        if not direct.overlaps(model.evaluate(t)):
            raise LittlewoodError(f"cubic model disagrees with f(v(t)) at t={t}")
    return model


@dataclass(frozen=True)
class ReducedCubic:
    """Depressed form y^3 + P y = Q(c) of F(t) = c with t = y + sigma1/3.

    ``Qplus`` carries the +eps/A term and therefore belongs to F = -eps;
    ``Qminus`` belongs to F = +eps. ``Dplus``/``Dminus`` are the
    discriminants -4P^3 - 27Q^2 whose sign picks the branch.
    """

    P: Enclosure
    Qplus: Enclosure
    Qminus: Enclosure
    Cplus: Optional[Enclosure]
    Cminus: Optional[Enclosure]
    Dplus: Enclosure
    Dminus: Enclosure
    branch_plus: str
    branch_minus: str


def _q_at(model: CubicModel, c) -> Enclosure:
    s1, s2, s3 = model.sigma1, model.sigma2, model.sigma3
    return (s1 * s1 * s1 * 2 - s1 * s2 * 9) / 27 + s3 - Enclosure.coerce(c) / model.A


def _p_of(model: CubicModel) -> Enclosure:
    s1, s2 = model.sigma1, model.sigma2
    return (s2 * 3 - s1 * s1) / 3


def _branch(P: Enclosure, D: Enclosure) -> str:
    sp = P.sign()
    if sp is None:
        raise BranchUndecidable("sign of P is not certified")
    if sp > 0:
        return "sinh"
    if sp == 0:
        return "cbrt"
    sd = D.sign()
    if sd is None:
        raise BranchUndecidable("discriminant straddles 0: cos/cosh branch undecided")
    return "cos" if sd > 0 else "cosh"


def _c_of(P: Enclosure, Q: Enclosure) -> Enclosure:
    negP = abs(P)
    r3 = Enclosure.point(3).root_rel(2, REL_BITS)
    return Q * r3 * 3 / (negP * negP.root_rel(2, REL_BITS) * 2)


def reduce_cubic(model: CubicModel, epsilon) -> ReducedCubic:
    """Reduced data P, Q(+-eps), C(+-eps) and the branch for each level.

    With P < 0 the branch is ``cos`` when |C| < 1 and ``cosh`` when |C| >= 1;
    both are decided from the discriminant so no square root enters the
    decision. P >= 0 (a single real root) gives ``sinh`` or ``cbrt``.
    """
    eps = Fraction(epsilon)
    if eps < 0:
        raise ValueError("epsilon must be >= 0")
    P = _p_of(model)
    Qp, Qm = _q_at(model, -eps), _q_at(model, eps)
    Dp = -(P * P * P) * 4 - Qp * Qp * 27
    Dm = -(P * P * P) * 4 - Qm * Qm * 27
    bp, bm = _branch(P, Dp), _branch(P, Dm)
    Cp = _c_of(P, Qp) if P.sign() else None
    Cm = _c_of(P, Qm) if P.sign() else None
    return ReducedCubic(P, Qp, Qm, Cp, Cm, Dp, Dm, bp, bm)


def _trig_roots(P: Enclosure, Q: Enclosure, s1: Enclosure, branch: str, prec: int):
    """Approximate real roots t of y^3 + P y = Q, t = y + s1/3 (heuristic)."""
    with mp.workprec(prec):
        p, q, shift = to_mpf(P.mid), to_mpf(Q.mid), to_mpf(s1.mid) / 3
        if branch == "cbrt":
            ys = [mp.sign(q) * mp.cbrt(abs(q))]
        else:
            h = 2 * mp.sqrt(abs(p) / 3)
            C = q / (2 * (abs(p) / 3) ** mp.mpf(1.5))
            if branch == "cos":
                C = max(min(C, mp.mpf(1)), mp.mpf(-1))
                phi = mp.acos(C)
                ys = [h * mp.cos(phi / 3 - 2 * mp.pi * k / 3) for k in range(3)]
            elif branch == "cosh":
                ys = [h * mp.sign(C) * mp.cosh(mp.acosh(abs(C)) / 3)]
            else:
                ys = [h * mp.sinh(mp.asinh(C) / 3)]
        return [from_mpf(y + shift) for y in ys]


def _scale(t: Fraction) -> Fraction:
    a = abs(t)
    if a <= 1:
        return Fraction(1)
    return Fraction(1 << (a.numerator // a.denominator).bit_length())


def _certify(model: CubicModel, c: Fraction, s: Fraction) -> Optional[Enclosure]:
    """Bracket [s-h, s+h] on which F - c changes sign, or None."""
    sc = _scale(s)
    h = sc / (1 << CERT_BITS)
    limit = sc / (1 << 20)
    while h <= limit:
        lo, hi = s - h, s + h
        g1 = (model.evaluate(lo) - c).sign()
        g2 = (model.evaluate(hi) - c).sign()
        if g1 == 0 and g2 == 0:
            return None
        if g1 == 0:
            return Enclosure(lo, lo)
        if g2 == 0:
            return Enclosure(hi, hi)
        if g1 is not None and g2 is not None:
            return Enclosure(lo, hi) if g1 != g2 else None
        h *= 16
    raise BranchUndecidable(f"could not certify a crossing of F = {c} near {float(s)}")


def _prec_for(model: CubicModel) -> int:
    mags = [abs(x.mid) for x in (model.sigma1, model.sigma2, model.sigma3, model.A) if x.mid]
    size = max((m.numerator.bit_length() + m.denominator.bit_length() for m in mags), default=0)
    return 160 + size


def _crossings(model: CubicModel, c: Fraction, prec: int):
    P = _p_of(model)
    Q = _q_at(model, c)
    D = -(P * P * P) * 4 - Q * Q * 27
    branch = _branch(P, D)
    found = []
    for s in _trig_roots(P, Q, model.sigma1, branch, prec):
        br = _certify(model, c, s)
        if br is not None:
            found.append(br)
    found.sort(key=lambda e: e.lo)
    for u, v in zip(found, found[1:]):
        if not u.certainly_lt(v):
            if u.overlaps(v) and branch == "cos":
                raise BranchUndecidable(f"crossings of F = {c} are not separated")
    return found


@dataclass(frozen=True)
class SublevelSet:
    """{t : |F(t)| <= eps} as sorted disjoint intervals with certified endpoints.

    Each endpoint is an Enclosure bracketing a crossing of F = +eps or -eps.
    """

    intervals: Tuple[Tuple[Enclosure, Enclosure], ...]
    epsilon: Fraction
    total_length: Enclosure
    plus_crossings: Tuple[Enclosure, ...] = ()
    minus_crossings: Tuple[Enclosure, ...] = ()

    def __len__(self):
        return len(self.intervals)

    def endpoints(self):
        return [e for iv in self.intervals for e in iv]

    def index_containing(self, t) -> Optional[int]:
        """Index of the interval certainly containing t, None if t is certainly outside."""
        t = Enclosure.coerce(t)
        for i, (lo, hi) in enumerate(self.intervals):
            if lo.hi <= t.lo and t.hi <= hi.lo:
                return i
            if t.overlaps(lo) or t.overlaps(hi):
                raise Undecidable("point sits on a certified endpoint bracket")
        return None


def _inside(model: CubicModel, t: Fraction, eps: Fraction) -> bool:
    v = abs(model.evaluate(t))
    if v.certainly_le(eps):
        return True
    if v.certainly_gt(eps):
        return False
    raise BranchUndecidable(f"membership undecided at t={float(t)}")


def _length(intervals) -> Enclosure:
    lo = sum((max(Fraction(0), b.lo - a.hi) for a, b in intervals), Fraction(0))
    hi = sum((b.hi - a.lo for a, b in intervals), Fraction(0))
    return Enclosure(lo, hi)


def solve_levelset(model: CubicModel, epsilon, reduced: ReducedCubic = None) -> SublevelSet:
    """Certified intervals of {t : |F(t)| <= epsilon}.

    epsilon = 0 returns degenerate intervals at the certified roots.
    """
    eps = Fraction(epsilon)
    if eps < 0:
        raise ValueError("epsilon must be >= 0")
    if model.A.sign() in (0, None):
        raise BranchUndecidable("leading factor A must be certified non-zero")
    prec = _prec_for(model)
    if eps == 0:
        roots = _crossings(model, Fraction(0), prec)
        ivs = tuple((r, r) for r in roots)
        return SublevelSet(ivs, eps, _length(ivs), tuple(roots), tuple(roots))

    plus = _crossings(model, eps, prec)
    minus = _crossings(model, -eps, prec)
    pts = sorted(plus + minus, key=lambda e: e.lo)
    for u, v in zip(pts, pts[1:]):
        if not u.certainly_lt(v):
            raise BranchUndecidable("crossing brackets of the two levels overlap")
    if not pts:
        raise BranchUndecidable("no crossings found")
    # test points: left of everything, every gap, right of everything
    probes = [pts[0].lo - _scale(pts[0].lo)]
    probes += [(u.hi + v.lo) / 2 for u, v in zip(pts, pts[1:])]
    probes.append(pts[-1].hi + _scale(pts[-1].hi))
    flags = [_inside(model, t, eps) for t in probes]
    if flags[0] or flags[-1]:
        raise BranchUndecidable("level set unbounded; a crossing was missed")
    intervals = []
    start = None
    for i, inside in enumerate(flags[1:], start=1):
        # gap i lies between pts[i-1] and pts[i]
        if inside and start is None:
            start = i - 1
        if not inside and start is not None:
            intervals.append((pts[start], pts[i - 1]))
            start = None
    # consistency: every crossing must bound an interval
    used = sum(2 for _ in intervals)
    if used != len(pts):
        raise BranchUndecidable("crossings do not pair up into intervals")
    ivs = tuple(intervals)
    return SublevelSet(ivs, eps, _length(ivs), tuple(plus), tuple(minus))


@dataclass(frozen=True)
class CriticalPoints:
    tau_minus: Enclosure
    tau_plus: Enclosure
    values: Tuple[Enclosure, Enclosure]
    derivatives: Tuple[Enclosure, Enclosure]
    scenario: int
    ordered: bool
    middle_third: Tuple[bool, bool]

    @property
    def interval_count(self) -> int:
        return {1: 1, 2: 2, 3: 2, 4: 3}[self.scenario]


def sorted_roots(model: CubicModel) -> Tuple[Enclosure, Enclosure, Enclosure]:
    r = sorted(model.roots, key=lambda e: e.lo)
    if not (r[0].certainly_lt(r[1]) and r[1].certainly_lt(r[2])):
        raise BranchUndecidable("roots are not certifiably distinct")
    return tuple(r)


def _merged(v: Enclosure, eps: Fraction) -> bool:
    a = abs(v)
    if a.certainly_le(eps):
        return True
    if a.certainly_gt(eps):
        return False
    raise Undecidable("|F(tau)| straddles epsilon")


def critical_points(model: CubicModel, epsilon) -> CriticalPoints:
    """Critical points (s1 +- sqrt(s1^2 - 3 s2)) / 3 with the merge scenario.

    Scenario 1: both |F(tau)| <= eps (one interval). 2: only tau_plus
    merges. 3: only tau_minus merges. 4: neither (three intervals). A
    critical value exactly at eps counts as merged.
    """
    eps = Fraction(epsilon)
    r1, r2, r3 = sorted_roots(model)
    s1, s2 = model.sigma1, model.sigma2
    disc = s1 * s1 - s2 * 3
    if disc.sign() != 1:
        raise BranchUndecidable("discriminant of F' is not certified positive")
    sq = disc.root_rel(2, REL_BITS)
    tm, tp = (s1 - sq) / 3, (s1 + sq) / 3
    vals = (model.evaluate(tm), model.evaluate(tp))
    ders = (model.derivative(tm), model.derivative(tp))
    ordered = r1.certainly_lt(tm) and tm.certainly_lt(r2) and r2.certainly_lt(tp) and tp.certainly_lt(r3)

    def third(tau, a, b):
        lo, hi = (a * 2 + b) / 3, (a + b * 2) / 3
        return tau.lo >= lo.hi and tau.hi <= hi.lo

    mids = (third(tm, r1, r2), third(tp, r2, r3))
    m_minus, m_plus = _merged(vals[0], eps), _merged(vals[1], eps)
    scenario = {(True, True): 1, (False, True): 2, (True, False): 3, (False, False): 4}[(m_minus, m_plus)]
    return CriticalPoints(tm, tp, vals, ders, scenario, ordered, mids)


@dataclass(frozen=True)
class CartanResult:
    bound: Enclosure
    measured: Enclosure
    holds: bool


def cartan_bound(model: CubicModel, epsilon, levelset: SublevelSet = None) -> CartanResult:
    """Compare the level-set length with 6e (eps/|A|)^(1/3)."""
    eps = Fraction(epsilon)
    if levelset is None:
        levelset = solve_levelset(model, eps)
    absA = abs(model.A)
    if absA.lo <= 0:
        raise BranchUndecidable("|A| must be certified positive")
    bound = e_enclosure() * 6 * (Enclosure.point(eps) / absA).root_rel(3, 128)
    measured = levelset.total_length
    if measured.hi <= bound.lo:
        holds = True
    elif measured.lo > bound.hi:
        holds = False
    else:
        # exact cube comparison with the outer measure
        m = measured.hi
        e_lo = e_enclosure().lo
        holds = m ** 3 * absA.hi <= 216 * e_lo ** 3 * eps
    return CartanResult(bound, measured, holds)
