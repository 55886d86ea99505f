"""Finite sets, total maps and the Set-level limits.

Elements of a :class:`FinSet` are the indices ``0..size-1``; labels are only
decoration.  Everything here is immutable.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

from .errors import PreconditionError, ResourceError

DEFAULT_MATERIALIZE_BOUND = 10**6


@dataclass(frozen=True)
class FinSet:
    size: int
    labels: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        if self.size < 0:
            raise PreconditionError(f"negative size {self.size}")
        if self.labels is not None:
            labels = tuple(self.labels)
            object.__setattr__(self, "labels", labels)
            if len(labels) != self.size:
                raise PreconditionError("labels must have one entry per element")
            if len(set(labels)) != len(labels):
                raise PreconditionError("labels must be pairwise distinct")

    def __len__(self):
        return self.size

    def __iter__(self):
        return iter(range(self.size))

    def label(self, i):
        return self.labels[i] if self.labels is not None else i

    def to_json(self):
        out = {"size": self.size}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, data):
        return cls(data["size"], data.get("labels"))


@dataclass(frozen=True)
class FinMap:
    dom: FinSet
    cod: FinSet
    table: tuple

    def __post_init__(self):
        table = tuple(int(v) for v in self.table)
        object.__setattr__(self, "table", table)
        if len(table) != self.dom.size:
            raise PreconditionError(
                f"table has {len(table)} entries for a domain of size {self.dom.size}"
            )
        for v in table:
            if not 0 <= v < self.cod.size:
                raise PreconditionError(f"table entry {v} outside codomain of size {self.cod.size}")

    def __call__(self, i):
        return self.table[i]

    def image(self) -> "Subset":
        return Subset(self.cod, sorted(set(self.table)))

    def is_injective(self):
        return len(set(self.table)) == len(self.table)

    def is_bijective(self):
        return self.dom.size == self.cod.size and self.is_injective()

    def inverse(self) -> "FinMap":
        if not self.is_bijective():
            raise PreconditionError("only bijections have inverses")
        inv = [0] * self.dom.size
        for i, v in enumerate(self.table):
            inv[v] = i
        return FinMap(self.cod, self.dom, tuple(inv))

    def to_json(self):
        return {"dom": self.dom.to_json(), "cod": self.cod.to_json(), "table": list(self.table)}

    @classmethod
    def from_json(cls, data):
        return cls(FinSet.from_json(data["dom"]), FinSet.from_json(data["cod"]), tuple(data["table"]))


@dataclass(frozen=True)
class Subset:
    ambient: FinSet
    members: tuple

    def __post_init__(self):
        members = tuple(int(m) for m in self.members)
        object.__setattr__(self, "members", members)
        for a, b in zip(members, members[1:]):
            if not a < b:
                raise PreconditionError("subset members must be strictly increasing")
        if members and not (0 <= members[0] and members[-1] < self.ambient.size):
            raise PreconditionError("subset member outside the ambient set")

    @classmethod
    def of(cls, ambient: FinSet, elements) -> "Subset":
        return cls(ambient, tuple(sorted(set(elements))))

    @classmethod
    def full(cls, ambient: FinSet) -> "Subset":
        return cls(ambient, tuple(range(ambient.size)))

    def __contains__(self, i):
        return i in set(self.members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def as_set(self):
        return frozenset(self.members)

    def issubset(self, other: "Subset"):
        return self.as_set() <= other.as_set()

    def to_json(self):
        return {"ambient": self.ambient.to_json(), "members": list(self.members)}

    @classmethod
    def from_json(cls, data):
        return cls(FinSet.from_json(data["ambient"]), tuple(data["members"]))


class TupleProduct:
    """Cartesian product kept as its list of factors.

    Elements are tuples with one index per factor.  The element list is only
    built on request, and only when the cardinality is below ``bound``.
    """

    def __init__(self, factors: Sequence[FinSet], bound: int = DEFAULT_MATERIALIZE_BOUND):
        self.factors = tuple(factors)
        self.bound = bound

    @property
    def cardinality(self) -> int:
        return math.prod(f.size for f in self.factors)

    def __contains__(self, t):
        return (
            isinstance(t, tuple)
            and len(t) == len(self.factors)
            and all(0 <= c < f.size for c, f in zip(t, self.factors))
        )

    def projection(self, i) -> Callable[[tuple], int]:
        if not 0 <= i < len(self.factors):
            raise PreconditionError(f"no factor {i}")
        return lambda t: t[i]

    def tuple_map(self, maps: Sequence[FinMap]) -> Callable[[int], tuple]:
        """Mediating map x -> (m_0(x), m_1(x), ...) for maps out of a common domain."""
        maps = tuple(maps)
        if len(maps) != len(self.factors):
            raise PreconditionError("need one map per factor")
        doms = {m.dom.size for m in maps}
        if len(doms) > 1:
            raise PreconditionError("mediating maps must share a domain")
        for m, f in zip(maps, self.factors):
            if m.cod.size != f.size:
                raise PreconditionError("map codomain does not match its factor")
        return lambda x: tuple(m(x) for m in maps)

    def elements(self) -> list:
        n = self.cardinality
        if n > self.bound:
            raise ResourceError(
                f"product of cardinality {n} exceeds the materialization bound {self.bound}",
                bound=self.bound,
            )
        return list(itertools.product(*(range(f.size) for f in self.factors)))

    def as_finset(self) -> FinSet:
        return FinSet(len(self.elements()))

    def index(self, t) -> int:
        """Position of ``t`` in :meth:`elements` order (row-major)."""
        i = 0
        for c, f in zip(t, self.factors):
            i = i * f.size + c
        return i

    def __repr__(self):
        return f"TupleProduct({[f.size for f in self.factors]})"


def product(factors: Sequence[FinSet], bound: int = DEFAULT_MATERIALIZE_BOUND) -> TupleProduct:
    return TupleProduct(factors, bound)


def identity(s: FinSet) -> FinMap:
    return FinMap(s, s, tuple(range(s.size)))


def compose(f: FinMap, g: FinMap) -> FinMap:
    """``g o f`` (apply f first)."""
    if f.cod != g.dom:
        raise PreconditionError("compose: codomain of f is not the domain of g")
    return FinMap(f.dom, g.cod, tuple(g.table[v] for v in f.table))


def inclusion(s: Subset) -> FinMap:
    return FinMap(FinSet(len(s.members)), s.ambient, s.members)


def equalizer(f: FinMap, g: FinMap) -> Subset:
    if f.dom != g.dom or f.cod != g.cod:
        raise PreconditionError("equalizer needs parallel maps")
    return Subset(f.dom, tuple(x for x in range(f.dom.size) if f(x) == g(x)))


def intersection(subsets: Sequence[Subset]) -> Subset:
    subsets = list(subsets)
    if not subsets:
        raise PreconditionError("intersection of an empty family")
    ambient = subsets[0].ambient
    if any(s.ambient != ambient for s in subsets):
        raise PreconditionError("subsets live in different ambient sets")
    common = set(subsets[0].members)
    for s in subsets[1:]:
        common &= s.as_set()
    return Subset(ambient, tuple(sorted(common)))


def factor_through(f: FinMap, s: Subset) -> Optional[FinMap]:
    """Corestriction of ``f`` to ``s`` when the image fits, else ``None``."""
    if s.ambient != f.cod:
        raise PreconditionError("subset must live in the codomain of f")
    pos = {m: i for i, m in enumerate(s.members)}
    try:
        table = tuple(pos[v] for v in f.table)
    except KeyError:
        return None
    return FinMap(f.dom, FinSet(len(s.members)), table)


def all_maps(dom: FinSet, cod: FinSet) -> Iterator[FinMap]:
    for table in itertools.product(range(cod.size), repeat=dom.size):
        yield FinMap(dom, cod, table)


def all_subsets(s: FinSet) -> Iterator[Subset]:
    for r in range(s.size + 1):
        for c in itertools.combinations(range(s.size), r):
            yield Subset(s, c)
