import pytest

from fixtures import broken_kind
from gaft import builtins
from gaft.axioms import check_kind_axioms

AXIOMS = ("A1", "A2", "A3", "I1", "I2", "S1", "S2", "S3", "P1", "P2")


@pytest.mark.parametrize("name", ["Semilattice", "Pointed", "MSet2"])
def test_builtin_kinds_pass_small(name):
    rep = check_kind_axioms(builtins.kind(name), max_card=3, sample_budget=20)
    assert rep.passed, rep.summary()
    data = rep.to_json()
    assert set(data["axioms"]) == set(AXIOMS)
    assert all(data["axioms"][a]["checked"] > 0 for a in AXIOMS)


def test_broken_kind_has_s3_witness():
    rep = check_kind_axioms(broken_kind(), max_card=4, sample_budget=20)
    assert not rep.passed
    assert rep.violations("S3") > 0
    w = rep.witnesses("S3")[0]
    assert len(w["closure"]) > w["kappa"]
    for axiom in ("A1", "A2", "I1", "S1", "S2", "P1", "P2"):
        assert rep.violations(axiom) == 0


def test_seed_reproducible():
    k = builtins.kind("Semilattice")
    a = check_kind_axioms(k, max_card=3, sample_budget=10, seed=7).to_json()
    b = check_kind_axioms(k, max_card=3, sample_budget=10, seed=7).to_json()
    assert a == b


def test_kind_without_kappa_notes_s3():
    from gaft.dsl import parse_kind
    rep = check_kind_axioms(parse_kind("kind M { op f/1; vars x; }"), max_card=2)
    assert rep.passed
    assert "note" in rep.to_json()["axioms"]["S3"]
