import json

import pytest

import oracles
from fixtures import DATA, MALFORMED
from gaft.cli import main


def run(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_construct_pointed(capsys):
    code, out, _ = run(["construct", "--kind", "builtin:Pointed", "--generators", "1"], capsys)
    assert code == 0
    cert = json.loads(out)
    assert cert["object"]["carrier"] == 2
    assert cert["verification_report"]["passed"]


def test_construct_with_labels_and_files(tmp_path, capsys):
    out, dot = tmp_path / "c.json", tmp_path / "c.dot"
    code, stdout, _ = run(["construct", "--kind", "builtin:Semilattice", "--generators", "a,b",
                           "--out", str(out), "--dot", str(dot)], capsys)
    assert code == 0 and stdout == ""
    cert = json.loads(out.read_text())
    assert cert["source"]["labels"] == ["a", "b"] and cert["object"]["carrier"] == 3
    assert "ψ′" in dot.read_text()


def test_construct_group_refused(capsys):
    code, out, err = run(["construct", "--kind", "builtin:Group", "--generators", "1"], capsys)
    assert code == 2 and out == ""
    assert "no finite solution set" in err


def test_missing_kind_file(capsys):
    code, out, err = run(["construct", "--kind", "no/such.kind", "--generators", "1"], capsys)
    assert code == 1 and out == "" and "cannot read" in err


@pytest.mark.parametrize("path", MALFORMED, ids=lambda p: p.stem)
def test_parse_errors_are_positioned(path, capsys):
    code, out, err = run(["enumerate", "--kind", str(path)], capsys)
    assert code == 1 and out == ""
    assert f"{path}:" in err and f"{path.stem} error" in err


def test_usage_error_exit_1(capsys):
    with pytest.raises(SystemExit) as info:
        main(["construct", "--kind", "builtin:Pointed"])
    assert info.value.code == 1


def test_solset_strategy_abelianization(tmp_path, capsys):
    x = oracles.s3_monoid()
    gens = tmp_path / "s3.json"
    gens.write_text(json.dumps(x.to_json()))
    _, quotient = oracles.abelianization(x)
    lam = tmp_path / "lam.json"
    lam.write_text(json.dumps({"description": "commutative quotients of S3",
                               "members": [oracles.cyclic_commmonoid(1).to_json(), quotient.to_json()]}))
    code, out, err = run(["construct", "--functor", "commmonoid-in-monoid", "--generators", str(gens),
                          "--strategy", "solset", str(lam), "--verify-margin", "3"], capsys)
    assert code == 0, err
    cert = json.loads(out)
    assert cert["object"]["carrier"] == 2
    assert cert["strategy"]["strategy"] == "user"


def test_construct_kappa_strategy_on_monoid_inclusion(tmp_path, capsys):
    gens = tmp_path / "s3.json"
    gens.write_text(json.dumps(oracles.s3_monoid().to_json()))
    code, out, _ = run(["construct", "--functor", "commmonoid-in-monoid", "--generators", str(gens)], capsys)
    assert code == 2 and out == ""


def test_budget_exit_4(capsys):
    code, out, err = run(["enumerate", "--kind", "builtin:Semilattice", "--max-card", "9"], capsys)
    assert code == 4 and out == "" and "budget" in err
    code, _, _ = run(["construct", "--kind", "builtin:Semilattice", "--generators", "3",
                      "--budget-sat", "3"], capsys)
    assert code == 4


def test_env_saturation_budget(monkeypatch, capsys):
    monkeypatch.setenv("GAFT_BUDGET_SAT", "2")
    code, _, _ = run(["construct", "--kind", "builtin:Semilattice", "--generators", "2"], capsys)
    assert code == 4


def test_enumerate_examples(tmp_path, capsys):
    code, out, _ = run(["enumerate", "--kind", "builtin:Pointed", "--max-card", "2"], capsys)
    assert code == 0 and json.loads(out)["count"] == 2
    code, out, _ = run(["enumerate", "--kind", "builtin:Pointed", "--max-card", "0"], capsys)
    assert json.loads(out)["count"] == 0
    chain = {"kind": "Semilattice", "carrier": 2, "tables": {"join": [[0, 1], [1, 1]]}}
    p = tmp_path / "chain.json"
    p.write_text(json.dumps(chain))
    code, out, _ = run(["enumerate", "--hom-source", str(p), "--hom-target", str(p)], capsys)
    assert code == 0 and json.loads(out)["homs"] == [[0, 0], [0, 1], [1, 1]]


def test_check_examples(capsys):
    code, out, _ = run(["check", "--kind", "builtin:Pointed", "--max-card", "3"], capsys)
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = run(["check", "--kind", str(DATA / "broken.kind"), "--max-card", "4"], capsys)
    assert code == 3
    report = json.loads(out)
    s3 = report["reports"][0]["axioms"]["S3"]
    assert s3["violations"] > 0 and s3["witnesses"]
    code, out, _ = run(["check"], capsys)
    assert code == 1 and out == ""


def test_bad_budget_values(capsys):
    code, _, err = run(["construct", "--kind", "builtin:Pointed", "--generators", "1", "--budget-enum", "0"], capsys)
    assert code == 1 and "positive" in err
    code, _, _ = run(["construct", "--kind", "builtin:Pointed", "--generators", "1",
                      "--out", "same", "--dot", "same"], capsys)
    assert code == 1
