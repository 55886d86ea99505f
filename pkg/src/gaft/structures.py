"""Structures of a kind, homomorphisms, products, closures and kappa.

A :class:`Structure` stores one flat table per operation: the entry for the
argument tuple ``(a_1, ..., a_k)`` sits at the mixed-radix position
``a_1 * n**(k-1) + ... + a_k``.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .dsl import INFINITE_HINT, KindSpec, eval_term, term_vars
from .errors import KappaUnavailable, PreconditionError, ResourceError
from .finset import FinMap, FinSet, Subset, TupleProduct, all_subsets

DEFAULT_SATURATION_BUDGET = 10**4


# -- cardinals -------------------------------------------------------------

@functools.total_ordering
class _Infinite:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("Infinite")

    def __repr__(self):
        return "Infinite"

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()


def is_finite(c) -> bool:
    return c is not INFINITE


def kappa(kind: KindSpec, n):
    """Evaluate the kind's closure bound at cardinal ``n``."""
    hint = kind.kappa_hint
    if hint is None:
        raise KappaUnavailable(f"kind {kind.name!r} declares no kappa bound")
    if hint == INFINITE_HINT or n is INFINITE:
        return INFINITE
    return hint(n)


# -- structures ------------------------------------------------------------

def _flat_index(args, n):
    i = 0
    for a in args:
        i = i * n + a
    return i


@functools.lru_cache(maxsize=256)
def arg_grid(n: int, k: int) -> np.ndarray:
    """All argument tuples in table order, shape ``(n**k, k)``."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.indices((n,) * k, dtype=np.int64).reshape(k, -1).T


@dataclass(frozen=True)
class Structure:
    kind: KindSpec
    size: int
    tables: tuple  # one flat tuple per kind.ops entry
    labels: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        tables = tuple(tuple(int(v) for v in t) for t in self.tables)
        object.__setattr__(self, "tables", tables)
        if len(tables) != len(self.kind.ops):
            raise PreconditionError(
                f"{self.kind.name} needs {len(self.kind.ops)} tables, got {len(tables)}"
            )
        for (op, k), t in zip(self.kind.ops, tables):
            if len(t) != self.size**k:
                raise PreconditionError(
                    f"table for {op}/{k} has {len(t)} entries, expected {self.size**k}"
                )
            for v in t:
                if not 0 <= v < self.size:
                    raise PreconditionError(f"table for {op} mentions {v}, outside carrier")

    @property
    def carrier(self) -> FinSet:
        return FinSet(self.size, self.labels)

    @functools.cached_property
    def arrays(self):
        return tuple(np.asarray(t, dtype=np.int64) for t in self.tables)

    def table(self, op):
        return self.tables[self.kind.op_index(op)]

    def apply(self, op, args=()):
        return self.tables[self.kind.op_index(op)][_flat_index(args, self.size)]

    def op_entries(self):
        """Yield ``(op, args, result)`` for every table cell."""
        n = self.size
        for (op, k), t in zip(self.kind.ops, self.tables):
            for idx, args in enumerate(itertools.product(range(n), repeat=k)):
                yield op, args, t[idx]

    def nested(self, op):
        t = self.table(op)
        k = self.kind.arity(op)
        if k == 0:
            return t[0]
        n = self.size

        def build(prefix_idx, depth):
            if depth == k:
                return t[prefix_idx]
            return [build(prefix_idx * n + i, depth + 1) for i in range(n)]

        return build(0, 0)

    def to_json(self):
        out = {
            "kind": self.kind.name,
            "carrier": self.size,
            "tables": {op: self.nested(op) for op in self.kind.op_names},
        }
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, kind: KindSpec, data):
        if data.get("kind", kind.name) != kind.name:
            raise PreconditionError(f"structure is of kind {data['kind']!r}, not {kind.name!r}")
        n = data["carrier"]
        tables = []
        for op, k in kind.ops:
            tables.append(tuple(_flatten(data["tables"][op], k)))
        labels = data.get("labels")
        return cls(kind, n, tuple(tables), tuple(labels) if labels is not None else None)

    def relabel(self, perm) -> "Structure":
        """Copy transported along the bijection ``perm`` (old index -> new index)."""
        n = self.size
        inv = [0] * n
        for old, new in enumerate(perm):
            inv[new] = old
        tables = []
        for (op, k), t in zip(self.kind.ops, self.tables):
            tables.append(
                tuple(perm[t[_flat_index([inv[a] for a in args], n)]]
                      for args in itertools.product(range(n), repeat=k))
            )
        return Structure(self.kind, n, tuple(tables))

    def __repr__(self):
        return f"<{self.kind.name} structure of size {self.size}>"


def _flatten(raw, k):
    if k == 0:
        return [raw]
    if k == 1:
        return list(raw)
    return [v for row in raw for v in _flatten(row, k - 1)]


def structure_from_function(kind: KindSpec, size: int, fn) -> Structure:
    """Build tables by calling ``fn(op, args)`` on every argument tuple."""
    tables = []
    for op, k in kind.ops:
        tables.append(tuple(fn(op, args) for args in itertools.product(range(size), repeat=k)))
    return Structure(kind, size, tuple(tables))


@dataclass(frozen=True)
class Hom:
    dom: Structure
    cod: Structure
    map: FinMap

    def __post_init__(self):
        if self.map.dom.size != self.dom.size or self.map.cod.size != self.cod.size:
            raise PreconditionError("underlying map does not match the structures")

    @property
    def kind(self):
        return self.dom.kind

    def __call__(self, i):
        return self.map(i)

    @property
    def table(self):
        return self.map.table


def make_hom(dom: Structure, cod: Structure, table) -> Hom:
    return Hom(dom, cod, FinMap(FinSet(dom.size), FinSet(cod.size), tuple(table)))


def identity_hom(a: Structure) -> Hom:
    return make_hom(a, a, range(a.size))


def compose_homs(f: Hom, g: Hom) -> Hom:
    """``g o f``."""
    if f.cod != g.dom:
        raise PreconditionError("compose: codomain of f is not the domain of g")
    return make_hom(f.dom, g.cod, [g(v) for v in f.table])


# -- law and morphism checks -----------------------------------------------

@dataclass(frozen=True)
class LawCheck:
    ok: bool
    equation: Optional[tuple] = None
    assignment: Optional[dict] = None

    def __bool__(self):
        return self.ok


def is_structure(kind: KindSpec, size: int, tables) -> LawCheck:
    """Check every equation under every assignment of its variables."""
    s = Structure(kind, size, tables)
    for lhs, rhs in kind.equations:
        names = term_vars(lhs)
        for v in term_vars(rhs):
            if v not in names:
                names.append(v)
        for vals in itertools.product(range(size), repeat=len(names)):
            env = dict(zip(names, vals))
            if eval_term(lhs, s, env) != eval_term(rhs, s, env):
                return LawCheck(False, (lhs, rhs), env)
    return LawCheck(True)


def validate(s: Structure) -> Structure:
    res = is_structure(s.kind, s.size, s.tables)
    if not res:
        lhs, rhs = res.equation
        raise PreconditionError(f"{lhs} = {rhs} fails at {res.assignment}")
    return s


def hom_violation(dom: Structure, cod: Structure, table) -> Optional[tuple]:
    """First ``(op, args)`` where ``table`` fails to commute with ``op``."""
    if dom.kind is not cod.kind and dom.kind != cod.kind:
        raise PreconditionError("structures are of different kinds")
    f = np.asarray(table, dtype=np.int64)
    n, m = dom.size, cod.size
    for (op, k), t, u in zip(dom.kind.ops, dom.arrays, cod.arrays):
        if n == 0 and k > 0:
            continue
        grid = arg_grid(n, k)
        pos = np.zeros(len(grid), dtype=np.int64)
        for j in range(k):
            pos = pos * m + f[grid[:, j]]
        bad = np.flatnonzero(f[t] != u[pos])
        if len(bad):
            return op, tuple(int(a) for a in grid[bad[0]])
    return None


def is_morphism(h: Hom) -> bool:
    return hom_violation(h.dom, h.cod, h.map.table) is None


# -- products --------------------------------------------------------------

class ProductStructure:
    """Componentwise structure on a :class:`TupleProduct` carrier.

    Operations act on tuples on demand; :meth:`materialize` builds an indexed
    :class:`Structure` when the carrier is small enough.
    """

    def __init__(self, kind: KindSpec, factors: Sequence[Structure]):
        for f in factors:
            if f.kind != kind:
                raise PreconditionError("product factors must all be of the given kind")
        self.kind = kind
        self.factors = tuple(factors)
        self.carrier = TupleProduct([f.carrier for f in factors])

    def apply(self, op, args=()):
        return tuple(f.apply(op, tuple(a[i] for a in args)) for i, f in enumerate(self.factors))

    def projection(self, i):
        return self.carrier.projection(i)

    def materialize(self):
        """Return ``(structure, elements)`` with elements in row-major order."""
        elems = self.carrier.elements()
        n = len(elems)
        tables = []
        for op, k in self.kind.ops:
            tables.append(tuple(
                self.carrier.index(self.apply(op, tuple(elems[a] for a in args)))
                for args in itertools.product(range(n), repeat=k)
            ))
        return Structure(self.kind, n, tuple(tables)), elems

    def projection_homs(self):
        s, elems = self.materialize()
        return [make_hom(s, f, [t[i] for t in elems]) for i, f in enumerate(self.factors)]

    def tuple_hom(self, homs: Sequence[Hom]) -> Hom:
        """Mediating morphism into the (materialized) product."""
        homs = list(homs)
        if len(homs) != len(self.factors):
            raise PreconditionError("need one morphism per factor")
        s, _ = self.materialize()
        if not homs:
            raise PreconditionError("the empty family has no common domain; pass it explicitly")
        dom = homs[0].dom
        mediating = self.carrier.tuple_map([h.map for h in homs])
        return make_hom(dom, s, [self.carrier.index(mediating(x)) for x in range(dom.size)])


def product_structure(kind: KindSpec, factors: Sequence[Structure]) -> ProductStructure:
    return ProductStructure(kind, factors)


def terminal(kind: KindSpec) -> Structure:
    return product_structure(kind, []).materialize()[0]


# -- subobjects ------------------------------------------------------------

def is_closed(a: Structure, s: Subset) -> bool:
    members = s.as_set()
    for op, k in a.kind.ops:
        for args in itertools.product(s.members, repeat=k):
            if a.apply(op, args) not in members:
                return False
    return True


def induced_substructure(kind: KindSpec, a: Structure, s: Subset) -> Optional[Structure]:
    """Structure induced on ``s``, or ``None`` when ``s`` is not closed."""
    if s.ambient.size != a.size:
        raise PreconditionError("subset does not live in the structure's carrier")
    if not is_closed(a, s):
        return None
    pos = {m: i for i, m in enumerate(s.members)}
    m = len(s.members)
    tables = []
    for op, k in kind.ops:
        tables.append(tuple(
            pos[a.apply(op, tuple(s.members[i] for i in args))]
            for args in itertools.product(range(m), repeat=k)
        ))
    return Structure(kind, m, tuple(tables))


def saturate(generators, ops, apply, key=lambda e: e, budget=DEFAULT_SATURATION_BUDGET):
    """Close ``generators`` under ``ops`` by semi-naive worklist iteration.

    Returns ``(elements, derivation, index)``: elements in discovery order;
    for each element either ``("gen", i)`` (first generator equal to it) or
    ``(op, arg_positions)``; and the map from ``key(element)`` to position.
    """
    elems, index, derivation = [], {}, []

    def add(e, how):
        k = key(e)
        if k in index:
            return
        if len(elems) >= budget:
            raise ResourceError(f"closure exceeded the saturation budget of {budget} elements", bound=budget)
        index[k] = len(elems)
        elems.append(e)
        derivation.append(how)

    for i, g in enumerate(generators):
        add(g, ("gen", i))
    for op, k in ops:
        if k == 0:
            add(apply(op, ()), (op, ()))
    start = 0
    while start < len(elems):
        end = len(elems)
        for op, k in ops:
            if k == 0:
                continue
            for args in itertools.product(range(end), repeat=k):
                if max(args) < start:
                    continue
                add(apply(op, tuple(elems[i] for i in args)), (op, args))
        start = end
    return elems, derivation, index


def closure(kind: KindSpec, a: Structure, z: Subset, budget=DEFAULT_SATURATION_BUDGET) -> Subset:
    if z.ambient.size != a.size:
        raise PreconditionError("subset does not live in the structure's carrier")
    elems, _, _ = saturate(list(z.members), kind.ops, a.apply, budget=budget)
    return Subset.of(z.ambient, elems)


def closed_subsets(a: Structure):
    return [s for s in all_subsets(a.carrier) if is_closed(a, s)]
