"""Universal arrows by solution-set enumeration and closure of the image.

For a concrete functor ``E`` and a target-kind object ``X``:

1. take a solution set: every source-kind object up to iso of size at most
   ``kappa(|X|)``, or a user-supplied list;
2. list every mixed map ``phi: X -> E(Z)`` into every member (the index set
   of the big product);
3. send each ``a`` in ``X`` to the tuple ``(phi(a))_phi``;
4. close those tuples under the operations, evaluated coordinatewise.

The closed tuple set is the universal object ``Y0`` and ``psi`` sends ``a``
to its tuple.  The product itself is never built; tuples are numpy rows.
"""
from __future__ import annotations

import hashlib
import itertools
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    CertificationError,
    NoFactorization,
    NoFiniteSolutionSet,
    PreconditionError,
)
from .finset import FinMap, FinSet, Subset, factor_through
from .functor import ConcreteFunctor
from .report import Report
from .search import (
    DEFAULT_ENUMERATION_BUDGET,
    enumerate_homs,
    enumerate_structures,
    is_isomorphic,
)
from .structures import (
    DEFAULT_SATURATION_BUDGET,
    INFINITE,
    Hom,
    Structure,
    closure,
    hom_violation,
    induced_substructure,
    kappa,
    make_hom,
    saturate,
    validate,
)

TUPLE_INLINE_LIMIT = 64


def saturation_budget(default=DEFAULT_SATURATION_BUDGET):
    env = os.environ.get("GAFT_BUDGET_SAT")
    return int(env) if env else default


@dataclass(frozen=True)
class SolutionSet:
    for_object: Structure
    members: tuple
    strategy: str  # "kappa" or "user"
    kappa_value: Optional[int] = None
    description: str = ""

    def to_json(self):
        return {
            "strategy": self.strategy,
            "kappa": self.kappa_value,
            "description": self.description,
            "members": [m.to_json() for m in self.members],
        }


@dataclass(frozen=True)
class DeltaFamily:
    entries: tuple  # ((member_index, FinMap), ...) in canonical order

    def __len__(self):
        return len(self.entries)

    def member_indices(self):
        return np.array([m for m, _ in self.entries], dtype=np.int64)


@dataclass
class UniversalArrowResult:
    functor: ConcreteFunctor
    source: Structure  # X, a target-kind object
    object: Structure  # Y0, a source-kind object
    psi: Hom  # X -> E(Y0)
    embedding: np.ndarray  # row i = coordinates of element i of Y0
    derivation: tuple  # per element: ("gen", a) or (op, arg indices)
    solution_set: SolutionSet
    delta: DeltaFamily
    verification: Optional["Verification"] = field(default=None, repr=False)

    @property
    def generators(self):
        return sorted(set(self.psi.map.table))


# -- stages ----------------------------------------------------------------

def solution_set(e: ConcreteFunctor, x: Structure, members: Optional[Sequence[Structure]] = None,
                 description: str = "", budget: int = DEFAULT_ENUMERATION_BUDGET) -> SolutionSet:
    if x.kind != e.target:
        raise PreconditionError(f"{e.name} constructs arrows out of {e.target.name} objects")
    if members is not None:
        checked = []
        for m in members:
            if m.kind != e.source:
                raise PreconditionError(f"solution set member is not a {e.source.name} structure")
            checked.append(validate(m))
        return SolutionSet(x, tuple(checked), "user", None, description or "user supplied")
    bound = kappa(e.source, x.size)
    if bound is INFINITE:
        raise NoFiniteSolutionSet(e.source.name)
    found = enumerate_structures(e.source, bound, budget)
    return SolutionSet(x, tuple(found), "kappa", bound,
                       f"all {e.source.name} structures up to iso with at most {bound} elements")


def build_delta(e: ConcreteFunctor, x: Structure, lam: SolutionSet) -> DeltaFamily:
    entries = []
    for i, member in enumerate(lam.members):
        for phi in e.st_morphisms(x, member):
            entries.append((i, phi.map))
    return DeltaFamily(tuple(entries))


def induced_into_product(e: ConcreteFunctor, x: Structure, delta: DeltaFamily) -> np.ndarray:
    """``psi'`` as an ``|X| x |Delta|`` array: row ``a`` is the tuple of ``a``."""
    out = np.zeros((x.size, len(delta)), dtype=np.int64)
    for j, (_, phi) in enumerate(delta.entries):
        out[:, j] = phi.table
    return out


class _Coordinates:
    """Coordinatewise evaluation of source operations on implicit-product tuples."""

    def __init__(self, kind, members, delta: DeltaFamily):
        self.kind = kind
        idx = delta.member_indices()
        sizes = np.array([m.size for m in members], dtype=np.int64)
        self.size = sizes[idx] if len(idx) else np.zeros(0, dtype=np.int64)
        self.tables, self.offsets = [], []
        for i, (op, k) in enumerate(kind.ops):
            flat = np.concatenate([np.asarray(m.tables[i], dtype=np.int64) for m in members]) \
                if members else np.zeros(0, dtype=np.int64)
            starts = np.cumsum([0] + [m.size**k for m in members])[:-1].astype(np.int64)
            self.tables.append(flat)
            self.offsets.append(starts[idx] if len(idx) else np.zeros(0, dtype=np.int64))

    def apply(self, op, args):
        i = self.kind.op_index(op)
        pos = np.zeros_like(self.offsets[i])
        for a in args:
            pos = pos * self.size + a
        return self.tables[i][self.offsets[i] + pos]


def closure_of_image(e: ConcreteFunctor, x: Structure, lam: SolutionSet, delta: DeltaFamily,
                     psi_prime: np.ndarray, budget: Optional[int] = None):
    """Saturate ``im psi'`` under coordinatewise operations.

    Returns ``(object, psi, embedding, derivation)``.
    """
    if budget is None:
        budget = saturation_budget()
    kind = e.source
    coords = _Coordinates(kind, lam.members, delta)
    gens = [psi_prime[a] for a in range(x.size)]
    elems, derivation, index = saturate(gens, kind.ops, coords.apply,
                                        key=lambda t: t.tobytes(), budget=budget)
    n = len(elems)
    tables = []
    for op, k in kind.ops:
        tables.append(tuple(
            index[coords.apply(op, tuple(elems[i] for i in args)).tobytes()]
            for args in itertools.product(range(n), repeat=k)
        ))
    y0 = Structure(kind, n, tuple(tables))
    psi_table = [index[psi_prime[a].tobytes()] for a in range(x.size)]
    psi = make_hom(x, e.apply(y0), psi_table)
    embedding = np.stack(elems) if elems else np.zeros((0, len(delta)), dtype=np.int64)
    return y0, psi, embedding, tuple(derivation)


def factorize(e: ConcreteFunctor, result: UniversalArrowResult, y: Structure, phi) -> Hom:
    """The morphism ``f: Y0 -> y`` with ``E(f) o psi = phi``.

    ``f`` is computed along the closure derivation and then checked: it must
    reproduce ``phi`` on every generator and commute with every operation.
    """
    table = tuple(phi.map.table if isinstance(phi, Hom) else getattr(phi, "table", phi))
    if len(table) != result.source.size:
        raise PreconditionError("phi does not start at the generating object")
    return make_hom(result.object, y, _extend(result, y, table))


def _extend(result, y, table):
    y0 = result.object
    f = [-1] * y0.size
    for i, how in enumerate(result.derivation):
        if how[0] == "gen":
            f[i] = table[how[1]]
        else:
            op, args = how
            if any(f[a] < 0 for a in args):
                raise NoFactorization("derivation refers to an undefined element", {"element": i})
            f[i] = y.apply(op, tuple(f[a] for a in args))
    psi = result.psi.map.table
    for a, p in enumerate(psi):
        if f[p] != table[a]:
            raise NoFactorization(
                "phi does not factor through psi",
                {"generator": a, "psi": p, "phi": table[a], "f": f[p]},
            )
    bad = hom_violation(y0, y, f)
    if bad is not None:
        op, args = bad
        raise NoFactorization(
            "extension along the derivation is not a morphism",
            {"op": op, "args": list(args), "f": f},
        )
    return tuple(f)


# -- certification ---------------------------------------------------------

@dataclass
class Verification:
    report: Report
    entries: list  # (target index, phi table, f table or None, unique)
    targets: list

    @property
    def passed(self):
        return self.report.passed

    def to_json(self):
        return [
            {"target": t, "phi": list(phi), "f": None if f is None else list(f), "unique": u}
            for t, phi, f, u in self.entries
        ]


def verify_universality(e: ConcreteFunctor, result: UniversalArrowResult,
                        test_family: Sequence[Structure]) -> Verification:
    """Existence and uniqueness of factorizations through every test target.

    ``exists``: factorize succeeds for every mixed map.  ``unique``: the only
    morphism ``h: Y0 -> Y`` with ``E(h) o psi = phi`` is the factorization.
    ``generated``: ``Y0`` is the closure of ``im psi``, so morphisms agreeing
    on ``im psi`` agree everywhere, which is checked on the enumerated
    morphisms as well.
    """
    rep = Report(f"universality of {e.name} arrow on {result.source.size} generators")
    for name in ("exists", "unique", "generated"):
        rep.declare(name)
    y0, x = result.object, result.source
    gens = result.generators
    full = closure(e.source, y0, Subset.of(y0.carrier, gens))
    rep.record("generated", len(full) == y0.size,
               {"closure_of_image": list(full.members), "size": y0.size})
    entries = []
    psi = result.psi.map.table
    for ti, y in enumerate(test_family):
        homs = enumerate_homs(e.source, y0, y)
        by_phi, by_gens = {}, {}
        for h in homs:
            by_phi.setdefault(tuple(h(p) for p in psi), []).append(h.map.table)
            by_gens.setdefault(tuple(h(g) for g in gens), []).append(h.map.table)
        for key, group in by_gens.items():
            ok = len(group) == 1
            rep.record("generated", ok, None if ok else
                       {"target": ti, "agree_on_generators": list(key), "homs": [list(g) for g in group]})
        for phi in e.st_morphisms(x, y):
            t = phi.map.table
            try:
                f = _extend(result, y, t)
            except NoFactorization as exc:
                rep.record("exists", False, {"target": ti, "phi": list(t), "reason": str(exc),
                                             "detail": exc.witness})
                entries.append((ti, t, None, False))
                continue
            rep.record("exists", True)
            matching = by_phi.get(t, [])
            unique = matching == [f]
            rep.record("unique", unique, None if unique else
                       {"target": ti, "phi": list(t), "f": list(f), "matching_homs": [list(g) for g in matching]})
            entries.append((ti, t, f, unique))
    return Verification(rep, entries, list(test_family))


def construct_universal(e: ConcreteFunctor, x: Structure, members: Optional[Sequence[Structure]] = None,
                        description: str = "", enum_budget: int = DEFAULT_ENUMERATION_BUDGET,
                        sat_budget: Optional[int] = None, verify: bool = True,
                        extra_targets: Sequence[Structure] = ()) -> UniversalArrowResult:
    """Build and certify the universal arrow out of ``x``.

    Certification runs over the solution set plus ``extra_targets``; a
    failure raises :class:`CertificationError` carrying the report.
    """
    validate(x)
    lam = solution_set(e, x, members, description, enum_budget)
    delta = build_delta(e, x, lam)
    psi_prime = induced_into_product(e, x, delta)
    y0, psi, embedding, derivation = closure_of_image(e, x, lam, delta, psi_prime, sat_budget)
    result = UniversalArrowResult(e, x, y0, psi, embedding, derivation, lam, delta)
    if verify:
        ver = verify_universality(e, result, list(lam.members) + list(extra_targets))
        result.verification = ver
        if not ver.passed:
            raise CertificationError("constructed arrow failed its universality certificate", ver.report)
    return result


def check_solset(e: ConcreteFunctor, x: Structure, lam: SolutionSet, targets: Sequence[Structure]) -> Report:
    """Every mixed map ``phi: X -> E(Y)`` factors through a member of ``lam``
    via the closure of its image."""
    rep = Report(f"solution-set condition for {e.name} on {x.size} generators")
    rep.declare("SolSet")
    rep.declare("corestriction")
    for ti, y in enumerate(targets):
        for phi in e.st_morphisms(x, y):
            t = phi.map.table
            img = closure(e.source, y, Subset.of(y.carrier, t))
            sub = induced_substructure(e.source, y, img)
            co = factor_through(phi.map, img)
            co_ok = sub is not None and e.is_st_morphism(x, sub, co.table)
            rep.record("corestriction", co_ok, {"target": y.to_json(), "phi": list(t)})
            found = None
            if co_ok:
                for mi, member in enumerate(lam.members):
                    iso = is_isomorphic(e.source, member, sub)
                    if iso is None:
                        continue
                    inv = iso.map.inverse()
                    psi = [inv(v) for v in co.table]
                    f = [img.members[iso(z)] for z in range(member.size)]
                    if (e.is_st_morphism(x, member, psi)
                            and hom_violation(member, y, f) is None
                            and all(f[psi[a]] == t[a] for a in range(x.size))):
                        found = (mi, psi, f)
                        break
            rep.record("SolSet", found is not None,
                       {"target": y.to_json(), "phi": list(t), "closure": list(img.members)})
    return rep


# -- serialization ---------------------------------------------------------

def _tuple_json(row):
    if len(row) <= TUPLE_INLINE_LIMIT:
        return [int(v) for v in row]
    return {"length": int(len(row)), "sha256": hashlib.sha256(np.asarray(row, dtype="<i8").tobytes()).hexdigest()}


def certificate(result: UniversalArrowResult) -> dict:
    derivation = []
    for i, how in enumerate(result.derivation):
        entry = {"element": i, "tuple": _tuple_json(result.embedding[i])}
        if how[0] == "gen":
            entry.update(op=None, args=[], generator=int(how[1]))
        else:
            entry.update(op=how[0], args=[int(a) for a in how[1]])
        derivation.append(entry)
    out = {
        "functor": result.functor.name,
        "source": result.source.to_json(),
        "strategy": {k: v for k, v in result.solution_set.to_json().items() if k != "members"},
        "lambda": [m.to_json() for m in result.solution_set.members],
        "delta": [{"member": int(m), "phi": list(phi.table)} for m, phi in result.delta.entries],
        "object": result.object.to_json(),
        "psi": result.psi.map.to_json(),
        "derivation": derivation,
    }
    if result.verification is not None:
        out["verification"] = result.verification.to_json()
        out["verification_report"] = result.verification.report.to_json()
    return out


def to_dot(result: UniversalArrowResult, component: int = 0) -> str:
    """DOT text of the factorization diagram through one product component."""
    n, m, d = result.source.size, result.object.size, len(result.delta)
    lines = [
        "digraph universal_arrow {",
        "  rankdir=LR;",
        f'  X [label="X\\n|X| = {n}"];',
        f'  EY0 [label="E(Y0)\\n|Y0| = {m}"];',
        f'  P [label="prod over Delta of E(Z_phi)\\n{d} factors"];',
        '  X -> EY0 [label="ψ"];',
        '  EY0 -> P [label="E(i)"];',
        '  X -> P [label="ψ′", style=dashed];',
    ]
    if d:
        member, _ = result.delta.entries[component]
        z = result.solution_set.members[member]
        lines += [
            f'  Z [label="E(Z_φ), φ = Delta[{component}]\\n|Z| = {z.size}"];',
            f'  P -> Z [label="E(π_φ)"];',
            '  X -> Z [label="φ′", style=dotted];',
            f'  Y [label="E(Y)\\n|Y| >= {z.size}"];',
            '  Z -> Y [label="E(e_φ)"];',
            '  X -> Y [label="φ"];',
        ]
    lines.append("}")
    return "\n".join(lines) + "\n"
