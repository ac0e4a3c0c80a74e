"""One test per acceptance criterion; the summary prints a PASS/FAIL line each."""

import math
import random
import time
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from littlewood.contfrac import cf_expand_surd, convergent_table, error_record, metallic_q, metallic_q_closed
from littlewood.cubic import CubicModel, cartan_bound, critical_points, solve_levelset
from littlewood.enclosure import Enclosure, e_enclosure
from littlewood.errors import EmptyWindow, LittlewoodError
from littlewood.pairs import critical_b, enumerate_pairs, window_has_integer
from littlewood.pipeline import StageReport, delta_window, littlewood_min, mu, reverify, run_stages
from littlewood.reals import QuadraticSurd
from oracles import cubic_levelset_oracle

EPS_SET = (Fraction(1, 1000), Fraction(1, 10), Fraction(1))


def _corpus(count=1000, seed=2024):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        roots = {Fraction(rng.randint(-10**9, 10**9), 10**6) for _ in range(3)}
        if len(roots) == 3:
            out.append(sorted(roots))
    return out


@pytest.fixture(scope="module")
def solved_corpus():
    """Solve every (cubic, eps) pair once; timing is for the solver alone."""
    t0 = time.perf_counter()
    rows = []
    for roots in _corpus():
        m = CubicModel.from_roots(roots)
        for eps in EPS_SET:
            try:
                rows.append((roots, eps, m, solve_levelset(m, eps), None))
            except LittlewoodError as exc:
                rows.append((roots, eps, m, None, exc))
    return rows, time.perf_counter() - t0


def test_criterion_01_bc_table():
    t0 = time.perf_counter()
    expected = {Fraction(0): 6.78199, Fraction(1, 100): 6.912, Fraction(1, 10): 8.514, Fraction(1, 4): 17.332}
    got = {eta: float(critical_b(eta).mid) for eta in expected}
    elapsed = time.perf_counter() - t0
    assert all(abs(got[e] - v) < 1e-3 for e, v in expected.items()), got
    assert elapsed < 1, elapsed


def test_criterion_02_integer_window():
    t0 = time.perf_counter()
    verdicts = [window_has_integer(7, 0), window_has_integer(7, Fraction(2, 125)), window_has_integer(7, Fraction(1, 50))]
    assert verdicts == [True, True, False]
    assert time.perf_counter() - t0 < 1


def test_criterion_03_metallic_denominators():
    t0 = time.perf_counter()
    mismatches = [(b, n) for b in range(1, 11) for n in range(51) if metallic_q(b, n) != metallic_q_closed(b, n)]
    assert mismatches == []
    for b in range(1, 51):
        assert list(cf_expand_surd(QuadraticSurd.metallic(b), 100).quotients) == [b] * 100
    assert time.perf_counter() - t0 < 10


def test_criterion_04_error_inequalities():
    t0 = time.perf_counter()
    specs = [QuadraticSurd.metallic(b) for b in range(1, 11)] + [QuadraticSurd.sqrt(2), QuadraticSurd.sqrt(3)]
    bad = []
    for s in specs:
        tbl = convergent_table(s, 42)
        for n in range(0, 41, 2):
            r = error_record(s, tbl, n)
            if not (r.verified and r.e_n.lo > 0 and r.lower <= r.e_n.lo and r.e_n.hi <= r.upper):
                bad.append((str(s), n))
    assert bad == []
    assert time.perf_counter() - t0 < 30


def test_criterion_05_trig_vs_bisection(solved_corpus):
    rows, elapsed = solved_corpus
    bad = []
    for roots, eps, _, ls, exc in rows:
        if ls is None:
            bad.append((roots, eps, repr(exc)))
            continue
        ours = sorted(float(e.mid) for e in ls.endpoints())
        ref = cubic_levelset_oracle(roots, eps)
        if len(ours) != len(ref) or any(abs(a - b) > 1e-12 * max(abs(b), 1) for a, b in zip(ours, ref)):
            bad.append((roots, eps, ours, ref))
    assert bad == []
    assert elapsed < 60, elapsed


def test_criterion_06_cartan(solved_corpus):
    rows, _ = solved_corpus
    t0 = time.perf_counter()
    violations = [(roots, eps) for roots, eps, m, ls, _ in rows if ls is None or not cartan_bound(m, eps, ls).holds]
    assert violations == []
    cube = CubicModel.from_roots([0, 0, 0])
    res = cartan_bound(cube, 1)
    assert res.measured == Enclosure.point(2) or res.measured.contains(2)
    assert res.measured.hi <= (e_enclosure() * 6).lo
    assert time.perf_counter() - t0 < 60


def test_criterion_07_critical_points(solved_corpus):
    rows, _ = solved_corpus
    bad = []
    for roots, eps, m, ls, _ in rows:
        cp = critical_points(m, eps)
        ok = cp.ordered and all(cp.middle_third) and all(d.contains(0) for d in cp.derivatives)
        if not ok or ls is None or cp.interval_count != len(ls):
            bad.append((roots, eps))
    assert bad == []


def _mp_form(u, alpha, beta):
    x, y, z = u
    return x * (alpha * x - y) * (beta * x - z)


def _mp_value(s: QuadraticSurd):
    return (s.P + mp.sqrt(s.D)) / s.Q


def test_criterion_08_witness_soundness():
    rng = random.Random(11)
    pairs = enumerate_pairs(0, 30)
    stages = []
    while len(stages) < 50:
        p = rng.choice(pairs)
        n = rng.randint(1, 4)
        eps = rng.choice([Fraction(1, 100), Fraction(1, 10), Fraction(1, 2), Fraction(2)])
        stages.append((p, n, eps))
    certs = unsound = 0
    for p, n, eps in stages:
        rep = next(run_stages(p.alpha, p.beta, [n], 0, eps))
        if not isinstance(rep, StageReport) or rep.witness is None:
            continue
        w = rep.witness
        certs += 1
        with mp.workdps(120):
            f = _mp_form(w.u, _mp_value(p.alpha), _mp_value(p.beta))
            exact_ok = 0 < abs(f) <= mpf(eps.numerator) / eps.denominator
        if not (reverify(w, p.alpha, p.beta) and exact_ok and w.u[0] != 0 and all(isinstance(c, int) for c in w.u)):
            unsound += 1
    print(f"fuzz: {len(stages)} stages, {certs} certificates, {unsound} unsound")
    assert unsound == 0

    m6, m7 = QuadraticSurd.metallic(6), QuadraticSurd.metallic(7)
    reports = list(run_stages(m6, m7, range(1, 7), 0, Fraction(1, 10)))
    assert all(isinstance(r, StageReport) for r in reports)
    for r in reports:
        h = r.hypotheses
        assert h.cond1
        assert h.cond2 == (math.lcm(h.q_a, h.q_b) <= h.q_b)
    print("(6,7) eps=0.1:", ", ".join(f"n={r.n}:{r.outcome}" for r in reports))


def test_criterion_09_delta_window_identity():
    etas = [Fraction(k, 30) for k in range(10)]
    mis = 0
    points = 0
    for eta in etas:
        m = mu(eta)
        gammas = {m} | {m + Fraction(k, 400) for k in range(-50, 49) if k} | {m + Fraction(1, 10**12)}
        for g in sorted(gammas)[:100]:
            points += 1
            length = Fraction(4, 5) * g - eta / 5 - Fraction(11, 15)
            try:
                w = delta_window(g, eta)
                nonempty = True
                assert w.hi.lo - w.lo == length
                assert w.lo < w.chosen <= w.hi.lo
            except EmptyWindow:
                nonempty = False
            if nonempty != (g > m) or nonempty != (length > 0):
                mis += 1
    assert points == 1000
    assert mis == 0


def test_criterion_10_littlewood_metric():
    t0 = time.perf_counter()
    rows = littlewood_min(QuadraticSurd.sqrt(2), QuadraticSurd.sqrt(3), 10**4)
    mins = [r.prefix_min for r in rows]
    assert all(a >= b for a, b in zip(mins, mins[1:]))
    assert abs(float(mins[2]) - 0.1110) < 1e-3
    assert time.perf_counter() - t0 < 30
