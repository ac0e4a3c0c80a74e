import json
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from littlewood import serialize
from littlewood.contfrac import ConvergentTable, convergent_table
from littlewood.enclosure import Enclosure
from littlewood.pairs import FactorizationReport, lcm_condition, make_pair
from littlewood.pipeline import StageReport, WitnessCertificate, run_stages
from littlewood.reals import QuadraticSurd


def test_big_ints_are_strings():
    data = json.loads(serialize.dumps({"q": 10**40, "r": Fraction(1, 3), "e": Enclosure(0, Fraction(1, 2))}))
    assert data == {"q": str(10**40), "r": "1/3", "e": {"lo": "0", "hi": "1/2"}}


@given(st.lists(st.integers(1, 10**30), min_size=1, max_size=30))
def test_convergent_table_roundtrip(qs):
    t = ConvergentTable.from_quotients(qs)
    assert serialize.loads(ConvergentTable, serialize.dumps(t)) == t


def test_surd_table_roundtrip():
    t = convergent_table(QuadraticSurd.sqrt(7), 20)
    assert serialize.loads(ConvergentTable, serialize.dumps(t)) == t


def test_factorization_report_roundtrip():
    r = lcm_condition(make_pair(6, 7), 3, Fraction(1, 10))
    assert serialize.loads(FactorizationReport, serialize.dumps(r)) == r


def test_stage_report_roundtrip():
    reports = list(run_stages(QuadraticSurd.metallic(6), QuadraticSurd.metallic(7), [1, 3], 0, Fraction(1, 10)))
    for r in reports:
        text = serialize.dumps(r)
        back = serialize.loads(StageReport, text)
        assert back == r
        assert serialize.dumps(back) == text


def test_certificate_roundtrip():
    c = WitnessCertificate((3, 4, 5), Enclosure(Fraction(1, 7), Fraction(1, 6)), Fraction(1, 5), 0, (1, 2, 0), 64)
    assert serialize.loads(WitnessCertificate, serialize.dumps(c)) == c
