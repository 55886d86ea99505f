"""Command-line front end: ``gaft construct``, ``gaft check``, ``gaft enumerate``.

Exit codes: 0 success, 1 bad input, 2 no finite solution set, 3 failed
verification or axiom violations, 4 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import builtins
from .adjoint import Adjunction, check_adjunction_laws
from .axioms import check_kind_axioms
from .dsl import KindSpec, parse_kinds
from .errors import (
    CertificationError,
    GaftError,
    IllDefinedFunctor,
    KappaUnavailable,
    KindSyntaxError,
    NoFactorization,
    NoFiniteSolutionSet,
    PreconditionError,
    ResourceError,
)
from .functor import INCLUSIONS, builtin_functor, check_limit_preservation, check_st_axioms, forgetful
from .report import dumps
from .search import DEFAULT_ENUMERATION_BUDGET, enumerate_homs, enumerate_structures
from .structures import INFINITE, DEFAULT_SATURATION_BUDGET, Structure, kappa
from .universal import certificate, check_solset, construct_universal, solution_set, to_dot

EXIT_OK, EXIT_INPUT, EXIT_NO_SOLSET, EXIT_VERIFY, EXIT_BUDGET = range(5)
DEFAULT_SEED = 0
DEFAULT_MARGIN = 2
DEFAULT_CHECK_CARD = 4


class InputError(GaftError):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not argparse's default exit status 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    kind_sources: list = field(default_factory=list)
    functor: Optional[str] = None
    generators: Optional[str] = None
    strategy: str = "kappa"
    solset_file: Optional[str] = None
    budget_enum: int = DEFAULT_ENUMERATION_BUDGET
    budget_sat: int = DEFAULT_SATURATION_BUDGET
    verify_margin: int = DEFAULT_MARGIN
    seed: int = DEFAULT_SEED
    out: Optional[str] = None
    dot: Optional[str] = None
    max_card: int = DEFAULT_CHECK_CARD
    builtins: bool = False
    hom_source: Optional[str] = None
    hom_target: Optional[str] = None

    def validate(self):
        for name in ("budget_enum", "budget_sat"):
            if getattr(self, name) <= 0:
                raise InputError(f"--{name.replace('_', '-')} must be positive")
        if self.verify_margin < 0 or self.max_card < 0:
            raise InputError("--verify-margin and --max-card must be non-negative")
        outs = [p for p in (self.out, self.dot) if p]
        if len(set(outs)) != len(outs):
            raise InputError("--out and --dot must name different files")


# -- input loading ---------------------------------------------------------

def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _read_json(path):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None


def load_kinds(sources) -> dict:
    """Kinds from DSL files or ``builtin:Name`` references, in order."""
    kinds = {}
    for src in sources:
        if src.startswith("builtin:"):
            name = src.split(":", 1)[1]
            if name not in builtins.SOURCES:
                raise InputError(f"no built-in kind {name!r}")
            found = [builtins.kind(name)]
        else:
            try:
                found = parse_kinds(_read(src))
            except KindSyntaxError as exc:
                raise InputError(f"{src}:{exc}") from None
        for k in found:
            kinds[k.name] = k
    return kinds


def _lookup_kind(name, kinds):
    if name in kinds:
        return kinds[name]
    if name in builtins.SOURCES:
        return builtins.kind(name)
    raise InputError(f"unknown kind {name!r}")


def structure_from_json(data, kinds, expected: Optional[KindSpec] = None) -> Structure:
    if not isinstance(data, dict) or "carrier" not in data:
        raise InputError("a structure needs at least a 'carrier' field")
    kind = _lookup_kind(data["kind"], kinds) if "kind" in data else expected
    if kind is None:
        raise InputError("structure JSON does not name its kind")
    if expected is not None and kind != expected:
        raise InputError(f"expected a {expected.name} structure, got {kind.name}")
    try:
        return Structure.from_json(kind, data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed {kind.name} structure: {exc}") from None


def resolve_functor(name, kinds):
    if name is None or name == "forgetful":
        if len(kinds) != 1:
            raise InputError("name the functor (e.g. forgetful:Kind) when several kinds are loaded"
                             if kinds else "no kind given; use --kind FILE or --kind builtin:Name")
        return forgetful(next(iter(kinds.values())))
    if name.startswith("forgetful:"):
        return forgetful(_lookup_kind(name.split(":", 1)[1], kinds))
    if name in INCLUSIONS:
        return builtin_functor(name)
    raise InputError(f"unknown functor {name!r}; known: forgetful, forgetful:Kind, {', '.join(INCLUSIONS)}")


def parse_generators(spec, target: KindSpec, kinds) -> Structure:
    """``N``, a comma-separated label list, or a JSON structure file."""
    if spec is None:
        raise InputError("--generators is required")
    if spec.isdigit():
        n, labels = int(spec), None
    elif os.path.exists(spec) or spec.endswith(".json"):
        return structure_from_json(_read_json(spec), kinds, expected=target)
    else:
        labels = tuple(s.strip() for s in spec.split(",") if s.strip())
        if len(set(labels)) != len(labels):
            raise InputError("generator labels must be distinct")
        n = len(labels)
    if target.ops:
        raise InputError(f"{target.name} generators need a JSON structure file, not a bare size")
    return Structure(target, n, tuple(() for _ in target.ops), labels)


def _solset_members(path, source: KindSpec, kinds):
    data = _read_json(path)
    description = ""
    if isinstance(data, dict):
        description = data.get("description", "")
        data = data.get("members")
    if not isinstance(data, list):
        raise InputError(f"{path}: expected a list of structures or {{'members': [...]}}")
    return [structure_from_json(d, kinds, expected=source) for d in data], description or f"from {path}"


# -- commands --------------------------------------------------------------

def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_construct(cfg: RunConfig) -> int:
    cfg.validate()
    kinds = load_kinds(cfg.kind_sources)
    e = resolve_functor(cfg.functor, kinds)
    x = parse_generators(cfg.generators, e.target, kinds)
    members, description = None, ""
    if cfg.strategy == "solset":
        if not cfg.solset_file:
            raise InputError("--strategy solset needs a file")
        members, description = _solset_members(cfg.solset_file, e.source, kinds)
    elif cfg.strategy != "kappa":
        raise InputError(f"unknown strategy {cfg.strategy!r}")
    margin = enumerate_structures(e.source, cfg.verify_margin, cfg.budget_enum)
    result = construct_universal(e, x, members, description, enum_budget=cfg.budget_enum,
                                 sat_budget=cfg.budget_sat, extra_targets=margin)
    cert = certificate(result)
    cert["verification_scope"] = {
        "lambda_members": len(result.solution_set.members),
        "margin_max_card": cfg.verify_margin,
        "margin_targets": len(margin),
        "note": "bounded evidence: universality is checked against the listed targets only",
    }
    text = dumps(cert, compact=True)
    dot = to_dot(result) if cfg.dot else None
    _emit(text, cfg.out)
    if dot is not None:
        _emit(dot, cfg.dot)
    return EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    cfg.validate()
    kinds = load_kinds(cfg.kind_sources)
    if cfg.builtins:
        for name in builtins.SOURCES:
            kinds.setdefault(name, builtins.kind(name))
    if not kinds and not cfg.functor:
        raise InputError("nothing to check; give --kind FILE, --builtins or --functor")
    functors = []
    if cfg.functor:
        functors.append(resolve_functor(cfg.functor, kinds))
    else:
        functors += [forgetful(k) for k in kinds.values() if k.ops]
        if cfg.builtins:
            functors += [f() for f in INCLUSIONS.values()]
    reports = []
    for k in kinds.values():
        reports.append(check_kind_axioms(k, cfg.max_card, seed=cfg.seed))
    for e in functors:
        reports.append(check_st_axioms(e, max_card_y=cfg.max_card, seed=cfg.seed))
        reports.append(check_limit_preservation(e, max_card=cfg.max_card, seed=cfg.seed))
        if _finite_kappa(e.source, 2) and e.target.name == "Set" and not e.target.ops:
            for n in range(3):
                x = Structure(e.target, n, ())
                lam = solution_set(e, x, budget=cfg.budget_enum)
                targets = enumerate_structures(e.source, cfg.max_card, cfg.budget_enum)
                reports.append(check_solset(e, x, lam, targets))
            adj = Adjunction(e, enum_budget=cfg.budget_enum, sat_budget=cfg.budget_sat)
            reports.append(check_adjunction_laws(adj, max_card_y=cfg.max_card, seed=cfg.seed))
    out = {
        "passed": all(r.passed for r in reports),
        "seed": cfg.seed,
        "max_card": cfg.max_card,
        "reports": [r.to_json() for r in reports],
    }
    _emit(dumps(out), cfg.out)
    return EXIT_OK if out["passed"] else EXIT_VERIFY


def _finite_kappa(kind, n):
    try:
        return kappa(kind, n) is not INFINITE
    except KappaUnavailable:
        return False


def cmd_enumerate(cfg: RunConfig) -> int:
    cfg.validate()
    kinds = load_kinds(cfg.kind_sources)
    if cfg.hom_source or cfg.hom_target:
        if not (cfg.hom_source and cfg.hom_target):
            raise InputError("--hom-source and --hom-target go together")
        a = structure_from_json(_read_json(cfg.hom_source), kinds)
        b = structure_from_json(_read_json(cfg.hom_target), kinds, expected=a.kind)
        homs = enumerate_homs(a.kind, a, b)
        out = {"kind": a.kind.name, "count": len(homs), "homs": [list(h.map.table) for h in homs]}
    else:
        if len(kinds) != 1:
            raise InputError("enumerate needs exactly one --kind")
        kind = next(iter(kinds.values()))
        found = enumerate_structures(kind, cfg.max_card, cfg.budget_enum)
        out = {"kind": kind.name, "max_card": cfg.max_card, "count": len(found),
               "structures": [s.to_json() for s in found]}
    _emit(dumps(out), cfg.out)
    return EXIT_OK


COMMANDS = {"construct": cmd_construct, "check": cmd_check, "enumerate": cmd_enumerate}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gaft", description="Universal arrows over finite structure kinds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--kind", action="append", default=[], metavar="FILE",
                        help="kind DSL file or builtin:Name (repeatable)")
        sp.add_argument("--budget-enum", type=int, default=DEFAULT_ENUMERATION_BUDGET, metavar="N",
                        help="largest carrier size enumerated up to isomorphism")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED, metavar="N")
        sp.add_argument("--out", metavar="FILE", help="write JSON here instead of stdout")

    c = sub.add_parser("construct", help="build and certify a universal arrow")
    common(c)
    c.add_argument("--functor", metavar="NAME")
    c.add_argument("--generators", metavar="N|LIST|FILE", required=True)
    c.add_argument("--strategy", nargs="+", default=["kappa"], metavar="kappa|solset FILE")
    c.add_argument("--budget-sat", type=int, default=None, metavar="N",
                   help="saturation element budget (env GAFT_BUDGET_SAT overrides the default)")
    c.add_argument("--verify-margin", type=int, default=DEFAULT_MARGIN, metavar="N",
                   help="also certify against every structure with at most N elements")
    c.add_argument("--dot", metavar="FILE")

    k = sub.add_parser("check", help="run the axiom, limit, solution-set and adjunction checkers")
    common(k)
    k.add_argument("--functor", metavar="NAME")
    k.add_argument("--builtins", action="store_true", help="check every built-in kind and functor")
    k.add_argument("--max-card", type=int, default=DEFAULT_CHECK_CARD, metavar="N")
    k.add_argument("--budget-sat", type=int, default=None, metavar="N")

    n = sub.add_parser("enumerate", help="list structures up to isomorphism, or homomorphisms")
    common(n)
    n.add_argument("--max-card", type=int, default=2, metavar="N")
    n.add_argument("--hom-source", metavar="FILE")
    n.add_argument("--hom-target", metavar="FILE")
    return p


def config_from_args(ns) -> RunConfig:
    cfg = RunConfig(kind_sources=ns.kind, budget_enum=ns.budget_enum, seed=ns.seed, out=ns.out)
    for name in ("functor", "generators", "verify_margin", "dot", "max_card", "builtins",
                 "hom_source", "hom_target"):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    budget_sat = getattr(ns, "budget_sat", None)
    if budget_sat is None:
        env = os.environ.get("GAFT_BUDGET_SAT")
        budget_sat = int(env) if env and env.lstrip("-").isdigit() else DEFAULT_SATURATION_BUDGET
    cfg.budget_sat = budget_sat
    strategy = getattr(ns, "strategy", ["kappa"])
    cfg.strategy = strategy[0]
    if cfg.strategy == "solset":
        if len(strategy) != 2:
            raise InputError("--strategy solset takes exactly one FILE")
        cfg.solset_file = strategy[1]
    elif len(strategy) != 1:
        raise InputError("--strategy kappa takes no argument")
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return COMMANDS[ns.command](cfg)
    except (InputError, KindSyntaxError, PreconditionError) as exc:
        code, msg = EXIT_INPUT, str(exc)
    except (NoFiniteSolutionSet, KappaUnavailable) as exc:
        code, msg = EXIT_NO_SOLSET, str(exc)
    except (CertificationError, NoFactorization, IllDefinedFunctor) as exc:
        code, msg = EXIT_VERIFY, str(exc)
        transcript = getattr(exc, "transcript", None)
        if transcript is not None:
            msg += "\n" + transcript.summary()
    except ResourceError as exc:
        code, msg = EXIT_BUDGET, str(exc)
    print(f"gaft {ns.command}: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
