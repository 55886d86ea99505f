"""Acceptance suite: one test and one PASS/FAIL line per criterion.

Run with pytest (the lines are repeated in the terminal summary) or
directly as ``python3 tests/test_acceptance.py``.
"""
import functools
import os
import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

import oracles
from conftest import ACCEPTANCE
from fixtures import DATA, MALFORMED, InjectiveOnlyMSet, broken_kind, constant_unit
from gaft import builtins
from gaft.adjoint import Adjunction, check_adjunction_laws
from gaft.axioms import check_kind_axioms
from gaft.dsl import parse_kind, parse_kinds, print_kind
from gaft.errors import KindSyntaxError, NoFiniteSolutionSet
from gaft.finset import all_subsets
from gaft.functor import (
    builtin_functors,
    check_limit_preservation,
    check_st_axioms,
    commmonoid_in_monoid,
    forgetful,
)
from gaft.search import enumerate_structures, is_isomorphic
from gaft.structures import Structure, closure, kappa
from gaft.universal import check_solset, construct_universal, solution_set, verify_universality

SET = builtins.kind("Set")
FREE_CASES = [(name, n) for name in ("Pointed", "Semilattice", "GF2Vector", "MSet2") for n in range(4)]


def bare(n):
    return Structure(SET, n, ())


def _record(num, title, ok, started, detail=""):
    line = f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {title} ({time.perf_counter() - started:.1f}s{detail})"
    ACCEPTANCE.append(line)
    print(line)


@contextmanager
def criterion(num, title):
    started = time.perf_counter()
    info = {}
    try:
        yield info
    except BaseException:
        _record(num, title, False, started)
        raise
    _record(num, title, True, started, info.get("detail", ""))


@functools.lru_cache(maxsize=None)
def free_construction(name, n):
    e = forgetful(builtins.kind(name))
    t = time.perf_counter()
    result = construct_universal(e, bare(n))
    return result, time.perf_counter() - t


@functools.lru_cache(maxsize=None)
def small_structures(name, max_card):
    return tuple(enumerate_structures(builtins.kind(name), max_card))


def test_criterion_01_free_object_cardinalities():
    with criterion(1, "free-object cardinalities match oracles") as info:
        slowest = 0.0
        for name, n in FREE_CASES:
            result, took = free_construction(name, n)
            build, size = oracles.FREE[name]
            oracle = build(n)
            assert result.object.size == size(n) == oracle.size, (name, n)
            assert is_isomorphic(result.object.kind, result.object, oracle) is not None, (name, n)
            assert took < 60, (name, n, took)
            slowest = max(slowest, took)
        info["detail"] = f", slowest run {slowest:.1f}s"


def test_criterion_02_universality_certified():
    with criterion(2, "universality certified over lambda and all targets <= 5") as info:
        checked = 0
        for name, n in FREE_CASES:
            result, _ = free_construction(name, n)
            e = result.functor
            targets = list(result.solution_set.members) + list(small_structures(name, 5))
            ver = verify_universality(e, result, targets)
            rep = ver.report
            assert rep.violations("exists") == 0 and rep.violations("unique") == 0, (name, n)
            assert ver.passed, (name, n, rep.summary())
            checked += len(ver.entries)
        info["detail"] = f", {checked} mixed maps factored"


def test_criterion_03_abelianization():
    with criterion(3, "abelianization of S3 through the commutative-monoid inclusion"):
        e = commmonoid_in_monoid()
        x = oracles.s3_monoid()
        classes, quotient = oracles.abelianization(x)
        assert quotient.size == 2 and len(set(classes)) == 2
        lam = [oracles.cyclic_commmonoid(1), oracles.cyclic_commmonoid(2)]
        result = construct_universal(e, x, lam, "trivial and cyclic of order 2")
        assert result.object.size == 2
        assert is_isomorphic(e.source, result.object, quotient) is not None
        # psi identifies exactly the elements the oracle identifies
        psi = result.psi.map.table
        assert all((psi[a] == psi[b]) == (classes[a] == classes[b]) for a in range(6) for b in range(6))
        targets = lam + list(small_structures("CommMonoid", 5))
        ver = verify_universality(e, result, targets)
        assert ver.passed, ver.report.summary()


def test_criterion_04_axiom_suite():
    with criterion(4, "axiom suite on built-ins at carriers <= 4, broken fixtures caught") as info:
        started = time.perf_counter()
        reports = [check_kind_axioms(builtins.kind(k), max_card=4) for k in sorted(builtins.SOURCES)]
        for e in builtin_functors():
            reports.append(check_st_axioms(e, max_card_x=4, max_card_y=4))
            reports.append(check_limit_preservation(e, max_card=4))
        failed = [r.summary() for r in reports if not r.passed]
        assert not failed, failed
        broken = check_kind_axioms(broken_kind(), max_card=4)
        assert broken.violations("S3") > 0 and broken.witnesses("S3")
        restricted = check_st_axioms(InjectiveOnlyMSet(), max_card_y=4)
        assert restricted.violations("ST1") > 0 and restricted.witnesses("ST1")
        assert time.perf_counter() - started < 300
        info["detail"] = f", {len(reports)} reports"


def test_criterion_05_closure_bound():
    with criterion(5, "closure(Z) <= kappa(|Z|) for finite-kappa kinds at carriers <= 5") as info:
        subsets = 0
        for name in builtins.FINITE_KAPPA:
            kind = builtins.kind(name)
            for s in small_structures(name, 5):
                for z in all_subsets(s.carrier):
                    c = closure(kind, s, z)
                    assert set(c.members) == oracles.brute_closure(s, z.members)
                    assert len(c) <= kappa(kind, len(z)), (name, s.to_json(), z.members)
                    subsets += 1
        info["detail"] = f", {subsets} subsets"


def test_criterion_06_solution_set_condition():
    with criterion(6, "every mixed map factors through a lambda member") as info:
        maps = 0
        for name in builtins.FINITE_KAPPA:
            e = forgetful(builtins.kind(name))
            targets = small_structures(name, 5)
            for n in range(3):
                x = bare(n)
                rep = check_solset(e, x, solution_set(e, x), targets)
                assert rep.passed, (name, n, rep.summary())
                maps += rep.to_json()["axioms"]["SolSet"]["checked"]
        info["detail"] = f", {maps} maps"


def test_criterion_07_adjunction_laws():
    with criterion(7, "adjunction laws hold, tampered unit rejected"):
        for name in builtins.FINITE_KAPPA:
            if name == "Set":
                continue
            rep = check_adjunction_laws(Adjunction(forgetful(builtins.kind(name))), max_card_x=2, max_card_y=4)
            assert rep.passed, (name, rep.summary())
            for law in ("hom-cardinality", "bijection", "naturality-x", "naturality-y", "triangle-unit"):
                assert rep.to_json()["axioms"][law]["checked"] > 0, (name, law)
        adj = Adjunction(forgetful(builtins.kind("Semilattice")))
        adj.install(bare(2), constant_unit(adj.universal(bare(2))))
        tampered = check_adjunction_laws(adj, xs=[bare(2)], max_card_y=3)
        assert not tampered.passed and tampered.violations("triangle-unit") > 0


def _cli(*args, env=None, cwd=None):
    full = dict(os.environ, **(env or {}))
    return subprocess.run([sys.executable, "-m", "gaft", *args], capture_output=True, env=full,
                          cwd=cwd, timeout=120)


def test_criterion_08_infinite_kappa_refusal():
    with criterion(8, "infinite kappa refused with exit 2"):
        for name in ("Group", "Monoid", "CommMonoid"):
            with pytest.raises(NoFiniteSolutionSet):
                construct_universal(forgetful(builtins.kind(name)), bare(1))
            proc = _cli("construct", "--kind", f"builtin:{name}", "--generators", "1")
            assert proc.returncode == 2 and proc.stdout == b"", (name, proc.stderr)
            assert b"no finite solution set" in proc.stderr
        with pytest.raises(NoFiniteSolutionSet):
            construct_universal(commmonoid_in_monoid(), oracles.s3_monoid())


def test_criterion_09_determinism(tmp_path):
    with criterion(9, "byte-identical construct and check output across runs"):
        runs = [
            ("construct", "--kind", "builtin:Semilattice", "--generators", "2", "--seed", "0"),
            ("construct", "--kind", "builtin:MSet2", "--generators", "a,b", "--seed", "0"),
            ("check", "--kind", "builtin:Semilattice", "--max-card", "3", "--seed", "0"),
            ("check", "--kind", str(DATA / "broken.kind"), "--max-card", "3", "--seed", "0"),
        ]
        for args in runs:
            outputs = []
            for hashseed in ("0", "12345"):
                out = tmp_path / f"{args[0]}-{hashseed}.json"
                proc = _cli(*args, "--out", str(out), env={"PYTHONHASHSEED": hashseed})
                assert proc.returncode in (0, 3), proc.stderr
                outputs.append(out.read_bytes())
            assert outputs[0] == outputs[1], args


def test_criterion_10_dsl():
    with criterion(10, "kind DSL round-trips, malformed inputs get positioned diagnostics"):
        for name, src in sorted(builtins.SOURCES.items()):
            k = parse_kind(src)
            text = print_kind(k)
            assert parse_kind(text) == k and print_kind(parse_kind(text)) == text, name
        assert len(MALFORMED) == 5
        for path in MALFORMED:
            src = path.read_text()
            with pytest.raises(KindSyntaxError) as info:
                parse_kinds(src)
            err = info.value
            assert err.code == path.stem
            lines = src.split("\n")
            assert 1 <= err.line <= len(lines) and 1 <= err.column <= len(lines[err.line - 1]) + 1


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
