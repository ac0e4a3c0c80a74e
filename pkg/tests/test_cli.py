import csv
import json

from littlewood.cli import main, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_range():
    assert parse_range("1..4") == [1, 2, 3, 4]
    assert parse_range("3") == [3]
    assert parse_range("1,3,5") == [1, 3, 5]


def test_cf_metallic(capsys):
    code, out, _ = run(capsys, "cf", "--metallic", "7", "--count", "10")
    assert code == 0
    assert json.loads(out)["quotients"] == ["7"] * 10


def test_cf_sqrt_and_literal(capsys):
    assert json.loads(run(capsys, "cf", "--sqrt", "2", "--count", "5")[1])["quotients"] == ["1", "2", "2", "2", "2"]
    assert json.loads(run(capsys, "cf", "--literal", "0.5")[1])["quotients"] == ["0", "2"]


def test_cf_errors_and_table(capsys):
    code, out, _ = run(capsys, "cf", "--sqrt", "3", "--count", "8", "--errors")
    data = json.loads(out)
    assert code == 0 and all(r["verified"] for r in data["errors"])
    code, out, _ = run(capsys, "cf", "--real", "phi", "--count", "3", "--format", "table", "--bad-approx", "100")
    assert "empirical" in out and out.splitlines()[1] == "0\t1\t1\t1"


def test_cf_usage_errors(capsys):
    assert run(capsys, "cf")[0] == 1
    assert run(capsys, "cf", "--sqrt", "2", "--metallic", "3")[0] == 1
    assert run(capsys, "cf", "--count", "x", "--sqrt", "2")[0] == 1
    assert run(capsys, "cf", "--literal", "3.14159265358979~", "--count", "30")[0] == 1


def test_witness_ratio_failure_is_error(capsys):
    # q_2 is 5 for sqrt2 and 3 for sqrt3, so the ratio condition fails at n = 1
    code, out, _ = run(capsys, "witness", "--alpha", "sqrt2", "--beta", "sqrt3", "--eps", "0.2", "--n", "1..1")
    assert json.loads(out) == {"n": "1", "error": "HypothesisViolation", "message": "n=1: ratio condition fails for q_a=5, q_b=3"}
    assert code == 1


def test_witness_immediate(capsys):
    code, out, _ = run(capsys, "witness", "--metallic-pair", "6", "7", "--eps", "1000", "--n", "1")
    assert code == 0
    assert json.loads(out)["outcome"] == "immediate"


def test_witness_metallic(capsys, tmp_path):
    log = tmp_path / "w.jsonl"
    code, out, err = run(capsys, "witness", "--metallic-pair", "6", "7", "--eps", "0.1", "--n", "1..2", "--log", str(log))
    rows = [json.loads(line) for line in out.splitlines()]
    assert [r["n"] for r in rows] == ["1", "2"]
    assert code == 0
    assert len(log.read_text().splitlines()) >= 1


def test_witness_none_exit_2(capsys):
    code, out, _ = run(capsys, "witness", "--metallic-pair", "6", "7", "--eps", "0.1", "--n", "3")
    assert code == 2
    assert json.loads(out)["outcome"] == "no-multiple"


def test_witness_missing_flag(capsys):
    assert run(capsys, "witness", "--metallic-pair", "6", "7", "--n", "1")[0] == 1
    assert run(capsys, "witness", "--eps", "0.1", "--n", "1")[0] == 1


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# stage run\nmetallic_pair = 6 7\neps = 0.1\nn = 3\n")
    assert run(capsys, "witness", "--config", str(cfg))[0] == 2
    assert run(capsys, "witness", "--config", str(cfg), "--n", "1")[0] == 0
    bad = tmp_path / "bad.cfg"
    bad.write_text("no equals sign here\n")
    assert run(capsys, "witness", "--config", str(bad))[0] == 1


def test_bc_table(capsys):
    code, out, _ = run(capsys, "bc-table", "--eta", "0,0.01,0.25")
    rows = list(csv.DictReader(out.splitlines()))
    assert code == 0
    assert [round(float(r["b_c"]), 3) for r in rows] == [6.782, 6.912, 17.332]


def test_pair_scan(capsys, tmp_path):
    summary = tmp_path / "s.csv"
    code, out, _ = run(capsys, "pair-scan", "--eta", "0", "--bmax", "20", "--n", "1..2", "--csv", str(summary))
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert any(r["a"] == "6" and r["b"] == "7" for r in rows)
    head = summary.read_text().splitlines()[0]
    assert head == "a,b,n,cond1,cond2,eta_min,gpf_a,gpf_b"
    code, out, _ = run(capsys, "pair-scan", "--eta", "0", "--bmax", "6")
    assert code == 0 and out == ""
    assert run(capsys, "pair-scan", "--eta", "1/3", "--bmax", "20")[0] == 1


def test_liminf(capsys, tmp_path):
    plot = tmp_path / "p.dat"
    code, out, _ = run(capsys, "liminf", "--alpha", "sqrt2", "--beta", "sqrt3", "--Q", "3", "--plot", str(plot))
    rows = list(csv.DictReader(out.splitlines()))
    assert code == 0 and abs(float(rows[2]["prefix_min"]) - 0.1110) < 1e-3
    data = [line.split() for line in plot.read_text().splitlines() if not line.startswith("#")]
    assert [len(d) for d in data] == [2, 2, 2]
    code, out, _ = run(capsys, "liminf", "--alpha", "1/2", "--beta", "sqrt3", "--Q", "4")
    assert any(float(r["term_hi"]) == 0 for r in csv.DictReader(out.splitlines()))
    assert run(capsys, "liminf", "--alpha", "sqrt2", "--beta", "sqrt3", "--Q", "0")[0] == 1


def test_cartan_check(capsys):
    code, out, _ = run(capsys, "cartan-check", "--count", "20", "--oracle")
    assert code == 0
    assert json.loads(out) == {"checked": 60, "violations": 0, "failures": []}


def test_no_subcommand(capsys):
    assert run(capsys)[0] == 1


def test_precision_cap_env(capsys, monkeypatch):
    monkeypatch.delenv("LF_PRECISION_CAP", raising=False)
    code, _, _ = run(capsys, "--precision-cap", "40", "cf", "--sqrt", "2")
    assert code == 0
    monkeypatch.delenv("LF_PRECISION_CAP", raising=False)
