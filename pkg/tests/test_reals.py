from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from littlewood.enclosure import Enclosure
from littlewood.errors import PrecisionExhausted
from littlewood.reals import LiteralReal, QuadraticSurd, eval_form, parse_real, refine_loop
from oracles import mp_real


def _inside(e: Enclosure, x) -> bool:
    return mpf(e.lo.numerator) / e.lo.denominator <= x <= mpf(e.hi.numerator) / e.hi.denominator


@given(st.integers(-50, 50), st.integers(2, 10**6), st.integers(1, 50).map(lambda q: q) | st.integers(-50, -1))
@settings(max_examples=80)
def test_surd_enclosure_contains_value(P, D, Q):
    try:
        s = QuadraticSurd.make(P, D, Q)
    except ValueError:
        return
    with mp.workdps(80):
        v = mp_real("surd", s.P, s.D, s.Q)
        for bits in (20, 80, 200):
            e = s.enclosure(bits)
            assert e.width <= Fraction(1, 1 << bits)
            assert _inside(e, v)


def test_metallic_and_golden():
    assert QuadraticSurd.golden() == QuadraticSurd.metallic(1)
    with mp.workdps(40):
        assert _inside(QuadraticSurd.metallic(7).enclosure(100), mp_real("metallic", 7))


def test_parse_real_forms():
    assert parse_real("sqrt2") == QuadraticSurd.sqrt(2)
    assert parse_real("sqrt:3") == QuadraticSurd.sqrt(3)
    assert parse_real("phi") == QuadraticSurd.golden()
    assert parse_real("metallic:6") == QuadraticSurd.metallic(6)
    assert parse_real("1/2").value == Fraction(1, 2)
    lit = parse_real("3.14159~")
    assert isinstance(lit, LiteralReal) and not lit.exact
    assert lit.enclosure(64).contains(Fraction(314159, 100000) + Fraction(4, 10**6))
    with pytest.raises(ValueError):
        parse_real("nonsense")


def test_eval_form_examples():
    r2, r3 = QuadraticSurd.sqrt(2), QuadraticSurd.sqrt(3)
    assert eval_form((0, 1, 1), r2, r3, Fraction(1, 10**6)) == Enclosure(0, 0)
    one = LiteralReal("1")
    assert eval_form((1, 1, 1), one, one, Fraction(1, 10**6)) == Enclosure(0, 0)
    f = eval_form((3, 4, 5), r2, r3, Fraction(1, 10**30))
    with mp.workdps(50):
        exact = 3 * (3 * mp.sqrt(2) - 4) * (3 * mp.sqrt(3) - 5)
        assert _inside(f, exact)
    assert abs(float(f.mid) - 0.14280) < 1e-4


def test_refine_loop_exhausts(monkeypatch):
    monkeypatch.setenv("LF_PRECISION_CAP", "3")
    s = QuadraticSurd.sqrt(2)
    with pytest.raises(PrecisionExhausted):
        refine_loop(lambda b: s.enclosure(b), (s,), 16, lambda e: False)


def test_refine_loop_saturated_literal():
    lit = LiteralReal("0.5", exact=False)
    with pytest.raises(PrecisionExhausted):
        refine_loop(lambda b: lit.enclosure(b), (lit,), 16, lambda e: e.width == 0)
