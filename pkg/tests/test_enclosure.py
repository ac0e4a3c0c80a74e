from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf, sqrt

from littlewood.enclosure import (
    Enclosure,
    ceil_root,
    e_enclosure,
    floor_root,
    nearest_int_distance,
    sqrt_enclosure,
)
from littlewood.errors import AmbiguousEnclosure

fracs = st.fractions(min_value=-1000, max_value=1000, max_denominator=10**6)


@st.composite
def enclosures(draw):
    a, b = draw(fracs), draw(fracs)
    return Enclosure(min(a, b), max(a, b))


def test_floor_ceil_root_small():
    assert floor_root(26, 3) == 2
    assert ceil_root(26, 3) == 3
    assert floor_root(27, 3) == ceil_root(27, 3) == 3
    assert floor_root(0, 5) == 0


@given(st.integers(0, 10**40), st.integers(1, 7))
def test_floor_root_brackets(n, k):
    r = floor_root(n, k)
    assert r**k <= n < (r + 1) ** k


@given(enclosures(), enclosures(), fracs, fracs)
def test_arithmetic_contains_pointwise(x, y, s, t):
    # pick points inside x and y and check every operation encloses the exact result
    a = x.lo + (x.hi - x.lo) * (s % 1)
    b = y.lo + (y.hi - y.lo) * (t % 1)
    assert (x + y).contains(a + b)
    assert (x - y).contains(a - b)
    assert (x * y).contains(a * b)
    if y.lo > 0 or y.hi < 0:
        assert (x / y).contains(a / b)


@given(enclosures())
def test_rounding_is_outward(x):
    for bits in (8, 32, 64):
        r = x.rounded(bits)
        assert r.lo <= x.lo and x.hi <= r.hi
        assert r.width <= x.width + Fraction(2, 1 << bits)


def test_sqrt_examples():
    assert sqrt_enclosure(4, Fraction(1, 10)).contains(2)
    assert sqrt_enclosure(0, Fraction(1, 10)) == Enclosure(0, 0)
    e = sqrt_enclosure(2, Fraction(1, 10**9))
    assert e.width <= Fraction(1, 10**9)
    with mp.workdps(40):
        s = sqrt(2)
        assert mpf(e.lo.numerator) / e.lo.denominator <= s <= mpf(e.hi.numerator) / e.hi.denominator


@given(st.integers(1, 10**12), st.integers(10, 200))
@settings(max_examples=60)
def test_sqrt_enclosure_width_and_truth(d, bits):
    w = Fraction(1, 1 << bits)
    e = sqrt_enclosure(d, w)
    assert e.width <= w
    assert e.lo * e.lo <= d <= e.hi * e.hi


def test_nearest_int_distance_examples():
    assert nearest_int_distance(Enclosure.point(Fraction(5, 2))) == Enclosure(Fraction(1, 2), Fraction(1, 2))
    assert nearest_int_distance(Enclosure.point(3)) == Enclosure(0, 0)
    three_root2 = sqrt_enclosure(18, Fraction(1, 10**20))
    d = nearest_int_distance(three_root2)
    assert abs(float(d.mid) - 0.242640687119285) < 1e-12


def test_nearest_int_distance_wide_is_ambiguous():
    with pytest.raises(AmbiguousEnclosure):
        nearest_int_distance(Enclosure(0, Fraction(1, 2)))


def test_e_enclosure():
    e = e_enclosure()
    with mp.workdps(60):
        v = mp.e
        assert mpf(e.lo.numerator) / e.lo.denominator <= v <= mpf(e.hi.numerator) / e.hi.denominator
    assert e.width < Fraction(1, 10**30)


def test_root_rel():
    e = Enclosure.point(Fraction(1, 10)).root_rel(3, 100)
    assert e.lo**3 <= Fraction(1, 10) <= e.hi**3
    assert e.width / e.lo < Fraction(1, 2**90)


def test_sign_and_comparisons():
    assert Enclosure(1, 2).sign() == 1
    assert Enclosure(-2, -1).sign() == -1
    assert Enclosure(0, 0).sign() == 0
    assert Enclosure(-1, 1).sign() is None
    assert Enclosure(1, 2).certainly_lt(3)
    assert not Enclosure(1, 3).certainly_lt(3)
    assert Enclosure(1, 3).certainly_le(3)
