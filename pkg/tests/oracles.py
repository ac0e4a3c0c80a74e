"""Independent reference computations used by the tests.

Nothing here imports the package: every oracle is a separate route to the
same number (mpmath at high precision, brute force, exact integer bisection).
"""

import math
from fractions import Fraction

from mpmath import mp, sqrt


def dist(x):
    return abs(x - mp.nint(x))


def mp_real(kind, *args):
    """High-precision value for ('sqrt', d), ('metallic', b), ('surd', P, D, Q)."""
    if kind == "sqrt":
        return sqrt(args[0])
    if kind == "metallic":
        b = args[0]
        return (b + sqrt(b * b + 4)) / 2
    P, D, Q = args
    return (P + sqrt(D)) / Q


def euclid_cf(x: Fraction):
    out = []
    p, q = x.numerator, x.denominator
    while q:
        a = p // q
        out.append(a)
        p, q = q, p - a * q
    return out


def mp_cf(x, count):
    out = []
    for _ in range(count):
        a = int(mp.floor(x))
        out.append(a)
        x = 1 / (x - a)
    return out


def brute_dirichlet(alpha, beta, N):
    bound = 1 / sqrt(N)
    for x in range(1, N + 1):
        if dist(x * alpha) <= bound and dist(x * beta) <= bound:
            return x, int(mp.nint(x * alpha)), int(mp.nint(x * beta))
    return None


def brute_bad_approx(alpha, Q):
    return min(q * dist(q * alpha) for q in range(1, Q + 1))


def _cubic_sign(R, D, k, s, c_num, c_den):
    # sign of (t - r1)(t - r2)(t - r3) - c at t = k / 2^s, roots r_i = R_i / D
    t = 1 << s
    prod = (k * D - R[0] * t) * (k * D - R[1] * t) * (k * D - R[2] * t)
    lhs = prod * c_den
    rhs = c_num * D ** 3 * t ** 3
    return (lhs > rhs) - (lhs < rhs)


def cubic_levelset_oracle(roots, eps, bits=96):
    """Sorted endpoints of {t : |(t - r1)(t - r2)(t - r3)| <= eps} by exact bisection.

    Monotone pieces are split at dyadic approximations of the critical points;
    on each piece a sign change of g - c (c = +-eps) is bisected on the
    integer grid 2^-s. Returns floats accurate to about 2^-bits relative.
    """
    roots = [Fraction(r) for r in roots]
    eps = Fraction(eps)
    D = math.lcm(*(r.denominator for r in roots))
    R = [int(r * D) for r in roots]
    span = max(abs(r) for r in roots) + 2 + eps
    s = bits + max(int(span).bit_length(), 1)
    scale = 1 << s
    s1 = sum(roots)
    s2 = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2]
    disc = s1 * s1 - 3 * s2
    cuts = [-int(span * 4) * scale, int(span * 4) * scale]
    if disc > 0:
        sq = Fraction(math.isqrt(int(disc * scale * scale)), scale)
        cuts += [math.floor((s1 - sq) / 3 * scale), math.floor((s1 + sq) / 3 * scale)]
    cuts.sort()
    out = []
    for c in (eps, -eps):
        cn, cd = c.numerator, c.denominator
        for lo, hi in zip(cuts, cuts[1:]):
            slo = _cubic_sign(R, D, lo, s, cn, cd)
            shi = _cubic_sign(R, D, hi, s, cn, cd)
            if slo == 0:
                out.append(lo)
                continue
            if slo * shi >= 0:
                continue
            while hi - lo > 1:
                m = (lo + hi) // 2
                sm = _cubic_sign(R, D, m, s, cn, cd)
                if sm == 0:
                    lo = hi = m
                    break
                if sm == slo:
                    lo = m
                else:
                    hi = m
            out.append(lo)
    return sorted(float(Fraction(k, scale)) for k in set(out))


def cubic_measure_oracle(roots, eps, bits=96):
    pts = cubic_levelset_oracle(roots, eps, bits)
    return sum(b - a for a, b in zip(pts[::2], pts[1::2]))
