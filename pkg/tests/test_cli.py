import json
import subprocess
import sys

import pytest

from hasse_census import cli
from hasse_census.census import CSV_HEADER, CensusInterrupted, count


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_decide_counterexample(capsys):
    code, out, _ = run(["decide", "13", "17", "5"], capsys)
    assert code == cli.EXIT_COUNTEREXAMPLE == 10
    assert "contributing  {5: -1}" in out
    assert "counterexample" in out


def test_decide_json(capsys):
    code, out, _ = run(["decide", "13", "17", "5", "--out", "json"], capsys)
    d = json.loads(out)
    assert code == 10
    assert d["has_rational_points"] is False
    assert d["contributing_primes"] == {"5": -1}
    assert d["f"] == 1 and d["h"] == -1


def test_decide_has_points(capsys):
    code, out, _ = run(["decide", "1", "2", "3"], capsys)
    assert code == 0
    assert "has a rational point" in out
    code, _, _ = run(["decide", "3", "5", "7"], capsys)
    assert code == 0


@pytest.mark.parametrize("args,msg", [
    (["4", "3", "5"], "a not squarefree (4 = 2²)"),
    (["3", "-18", "5"], "b not squarefree (-18 = -2·3²)"),
    (["3", "2", "0"], "c must be nonzero"),
    (["3", "2", "-5"], "c must be positive"),
])
def test_decide_invalid(capsys, args, msg):
    code, _, err = run(["decide", *args], capsys)
    assert code == cli.EXIT_INVALID
    assert msg in err


def test_count_csv_matches_library(capsys):
    code, out, _ = run(["count", "--pmax", "50"], capsys)
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == CSV_HEADER
    assert lines[1].split(",")[:7] == [str(x) for x in count(50).counters()]


def test_count_is_deterministic(capsys):
    outs = []
    for shards in ("1", "8", "16"):
        _, out, _ = run(["count", "--pmax", "60", "--shards", shards], capsys)
        outs.append([row.rsplit(",", 1)[0] for row in out.splitlines()])
    assert outs[0] == outs[1] == outs[2]


def test_count_compare_columns(capsys):
    code, out, _ = run(["count", "--pmax", "100", "--compare"], capsys)
    header, row = out.strip().splitlines()
    names = header.split(",")
    vals = dict(zip(names, row.split(",")))
    assert code == 0
    assert header.startswith(CSV_HEADER)
    assert 0.6 < float(vals["NBr_ratio"]) < 1.5


def test_count_range_and_json(capsys):
    code, out, _ = run(["count", "--pmin", "10", "--pmax", "30", "--step", "10", "--out", "json"], capsys)
    rows = [json.loads(x) for x in out.strip().splitlines()]
    assert code == 0
    assert [r["P"] for r in rows] == [10, 20, 30]
    assert rows[1]["NBr"] == 220


def test_count_resume_from_checkpoint(tmp_path, capsys):
    ck = tmp_path / "ck.json"
    with pytest.raises(CensusInterrupted):
        count(200, shards=16, checkpoint=ck, stop_after=4)
    code, resumed, _ = run(["count", "--pmax", "200", "--shards", "16", "--checkpoint", str(ck)], capsys)
    _, fresh, _ = run(["count", "--pmax", "200", "--shards", "16"], capsys)
    assert code == 0
    strip = lambda s: [r.rsplit(",", 1)[0] for r in s.splitlines()]
    assert strip(resumed) == strip(fresh)


def test_count_checkpoint_mismatch(tmp_path, capsys):
    ck = tmp_path / "ck.json"
    run(["count", "--pmax", "30", "--shards", "4", "--checkpoint", str(ck)], capsys)
    code, _, err = run(["count", "--pmax", "30", "--shards", "5", "--checkpoint", str(ck)], capsys)
    assert code == cli.EXIT_CHECKPOINT
    assert "checkpoint" in err


def test_count_bad_config(capsys):
    assert run(["count", "--pmax", "0"], capsys)[0] == cli.EXIT_INVALID
    assert run(["count", "--pmax", "10", "--shards", "0"], capsys)[0] == cli.EXIT_INVALID
    assert run(["count", "--pmax", "10", "--pmin", "20"], capsys)[0] == cli.EXIT_INVALID


def test_constants_command(capsys):
    code, out, _ = run(["constants", "--prime-bound", "100000", "--out", "json"], capsys)
    rows = {d["name"]: d for d in json.loads(out)}
    assert code == 0
    assert rows["tau1"]["width"] < 1e-8 and rows["tau2"]["width"] < 1e-8
    assert round(rows["tau1"]["value"], 3) == 0.207
    assert run(["constants", "--prime-bound", "10"], capsys)[0] == cli.EXIT_INVALID


def test_predict_command(capsys):
    code, out, _ = run(["predict", "--pmax", "1000", "--out", "json"], capsys)
    d = json.loads(out)
    assert code == 0
    assert d["S"] == pytest.approx(864 / 3.141592653589793**6 * 1e9)
    assert d["two_term_total"] == pytest.approx(d["main_term"] - d["second_term"])
    assert run(["predict", "--pmax", "2"], capsys)[0] == cli.EXIT_INVALID


def test_verify_identities(capsys):
    code, out, _ = run(["verify", "--suite", "identities"], capsys)
    assert code == 0
    assert "nu2(+1) = 68" in out and "FAIL" not in out


def test_verify_reports_failure(monkeypatch, capsys):
    from hasse_census import identities

    def broken(bound):
        c = identities.Check("always fails")
        c.expect(False, "x")
        return [c]

    monkeypatch.setitem(identities.SUITES, "identities", broken)
    code, out, _ = run(["verify", "--suite", "identities", "--out", "json"], capsys)
    assert code == cli.EXIT_FAILED
    assert json.loads(out)[0]["status"] == "FAIL"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "hasse_census", "decide", "13", "17", "5"],
                         capture_output=True, text=True)
    assert res.returncode == 10
    assert "{5: -1}" in res.stdout
