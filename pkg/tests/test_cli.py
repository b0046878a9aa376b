import json
import random

import pytest

import ultrachase.chase as C
from ultrachase import cli, selftest
from ultrachase.randgen import rand_operator
from ultrachase.specfile import Spec, SpecError, canonical, dump_spec, parse_spec
from ultrachase.valuation import NormValue

UNIT = {"index": "omega", "tail": {"exp": "0/1"}}


def write_spec(tmp_path, operator, **extra):
    doc = {"base": 2, "domain": UNIT, "codomain": UNIT, "operator": operator, **extra}
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(doc, indent=2))
    return str(path)


def entry(j, i, e):
    return {"j": j, "i": i, "a": [[e, "1/1"]]}


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_norm_single_entry(tmp_path, capsys):
    path = write_spec(tmp_path, {"sparse": [entry(0, 0, "-3/1")]})
    code, rep = run(["norm", path], capsys)
    assert code == 0
    assert rep["results"]["norm"] == {"exp": "3/1"}
    assert rep["checks"][0]["passed"]


def test_reduce_two_entries(tmp_path, capsys):
    path = write_spec(tmp_path, {"sparse": [entry(0, 0, "-2/1"), entry(1, 1, "0/1")]})
    code, rep = run(["reduce", path], capsys)
    assert code == 0
    res = rep["results"]
    assert res["J0"] == [0]
    assert res["norm_before"] == {"exp": "2/1"}
    assert res["norm_after"] == {"exp": "0/1"}


def test_chase_zero_spec_rejected(tmp_path, capsys):
    path = write_spec(tmp_path, {})
    code, rep = run(["chase", path, "--r", "1/1"], capsys)
    assert code != 0
    assert rep["error"]["violations"] == ["f must be non-zero"]


def test_validation_passed_through(tmp_path, capsys):
    path = write_spec(tmp_path, {"row_tails": [{"j": 0, "i_start": 0, "lead": [["0/1", "1/1"]], "ratio": "0/1"}]})
    code, rep = run(["norm", path], capsys)
    assert code == 2
    assert any("non-decaying tail" in v for v in rep["error"]["violations"])


def test_chase_ultra_adversary(tmp_path, capsys):
    ops = {"sparse": [entry(j, j, "-3/1") for j in range(3)]}
    path = write_spec(tmp_path, ops, params={"max_steps": 10})
    code, rep = run(["chase", path, "--r", "0/1"], capsys)
    assert code == 0 and rep["results"]["witness"]["certified"]
    code, rep = run(["ultra", path, "--r", "0/1"], capsys)
    assert code == 0 and rep["results"]["U0"] == []
    code, rep = run(["adversary", path, "--r", "0/1"], capsys)
    assert code == 0
    assert rep["results"]["transcript"]["outcome"]["n"] == 3
    code, rep = run(["adversary", path, "--r", "0/1", "--max-steps", "1"], capsys)
    assert code == 1
    assert rep["results"]["transcript"]["outcome"]["kind"] == "exhausted"


def test_r_from_params_and_missing(tmp_path, capsys):
    path = write_spec(tmp_path, {"sparse": [entry(0, 0, "0/1")]}, params={"r": {"exp": "1/2"}})
    code, rep = run(["chase", path], capsys)
    assert code == 0 and rep["results"]["r"] == {"exp": "1/2"}
    bare = write_spec(tmp_path, {"sparse": [entry(0, 0, "0/1")]})
    code, rep = run(["chase", bare], capsys)
    assert code == 2 and "r missing" in rep["error"]["message"]


def test_parse_error_reports_line(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"base": 2,\n  "domain": }')
    code, rep = run(["norm", str(path)], capsys)
    assert code == 2
    assert rep["error"]["kind"] == "parse"
    assert rep["error"]["where"].startswith("line 2")


def test_parse_error_reports_field():
    doc = {"base": 2, "domain": UNIT, "codomain": UNIT, "operator": {"sparse": [{"j": 0, "i": "x", "a": []}]}}
    with pytest.raises(SpecError) as exc:
        parse_spec(json.dumps(doc))
    assert exc.value.where == "operator.sparse[0].i"
    with pytest.raises(SpecError, match="prime"):
        parse_spec(json.dumps({**doc, "base": 9}))


def test_ideals_demo(capsys):
    code, rep = run(["ideals", "--demo", "pair"], capsys)
    assert code == 0
    assert rep["results"]["prime"] == [2]
    assert rep["results"]["ultrafilter"]["generator"] == 2


def test_ideals_from_file(tmp_path, capsys):
    path = tmp_path / "ideal.json"
    path.write_text(json.dumps({"ideal": {"n": 2, "generators": []}}))
    code, rep = run(["ideals", str(path)], capsys)
    assert code == 0
    assert rep["results"]["disjoint_system"]["U0"] == [[0], [1]]


def test_out_file(tmp_path, capsys):
    out = tmp_path / "rep.json"
    code = cli.main(["ideals", "--demo", "point", "--out", str(out)])
    assert code == 0
    assert json.loads(out.read_text()) == json.loads(capsys.readouterr().out)


def test_base_flag(tmp_path, capsys):
    path = write_spec(tmp_path, {"sparse": [entry(0, 0, "-1/1")]})
    code, rep = run(["norm", path, "--base", "3"], capsys)
    assert code == 0 and rep["base"] == 3
    code, rep = run(["norm", path, "--base", "6"], capsys)
    assert code == 2


def test_selftest_filter(capsys):
    code, rep = run(["selftest", "--filter", "ideals"], capsys)
    assert code == 0
    assert rep["filter"] == ["ideals"]
    assert [c["name"] for c in rep["criteria"]] == [selftest.crit_ideals(7).name]


def test_selftest_surfaces_radius_fault(monkeypatch):
    monkeypatch.setitem(C.RADIUS_RULES, "strict", lambda rp, floor, hit: max(rp, hit) * NormValue(1))
    out = selftest.crit_adversary(7, count=5)
    assert not out.passed
    assert any("(2)" in str(f) for f in out.failures)


@pytest.mark.parametrize("seed", range(20))
def test_spec_roundtrip_idempotent(seed):
    f = rand_operator(random.Random(seed))
    spec = Spec(2, f, {"r": NormValue(1), "max_steps": 9})
    once = canonical(dump_spec(spec))
    again = canonical(dump_spec(parse_spec(once)))
    assert once == again
