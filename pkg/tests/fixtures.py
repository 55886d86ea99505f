"""Deliberately broken inputs used to exercise the negative paths."""
from pathlib import Path

import numpy as np

from gaft import builtins
from gaft.dsl import parse_kind
from gaft.functor import ConcreteFunctor
from gaft.structures import Structure, make_hom
from gaft.universal import UniversalArrowResult

DATA = Path(__file__).parent / "data"
MALFORMED = sorted((DATA / "malformed").glob("*.kind"))


def broken_kind():
    return parse_kind((DATA / "broken.kind").read_text())


class InjectiveOnlyMSet(ConcreteFunctor):
    """Forgetful functor on MSet2 that only admits injective maps, which
    breaks closure under post-composition."""

    def __init__(self):
        super().__init__("injective-only:MSet2", builtins.kind("MSet2"), builtins.kind("Set"), {})

    def admits(self, x, y, table):
        return len(set(table)) == len(table)


def too_small_group_lambda():
    """Only the trivial group: misses every nontrivial cyclic image."""
    g = builtins.kind("Group")
    return [Structure(g, 1, ((0,), (0,), (0,)))]


def z2_group():
    g = builtins.kind("Group")
    return Structure(g, 2, ((0,), (0, 1, 1, 0), (0, 1)))


def drop_element(result: UniversalArrowResult, victim: int, redirect: int) -> UniversalArrowResult:
    """Remove ``victim`` from the universal object, sending every table
    entry that pointed at it to ``redirect`` instead."""
    y0 = result.object
    keep = [i for i in range(y0.size) if i != victim]
    new_index = {old: new for new, old in enumerate(keep)}
    new_index[victim] = new_index[redirect]
    n = len(keep)
    tables = []
    for (op, k), t in zip(y0.kind.ops, y0.tables):
        rows = []
        for args in np.ndindex(*((n,) * k)) if k else [()]:
            old_args = tuple(keep[a] for a in args)
            flat = 0
            for a in old_args:
                flat = flat * y0.size + a
            rows.append(new_index[t[flat]])
        tables.append(tuple(rows))
    obj = Structure(y0.kind, n, tuple(tables))
    derivation = []
    for i in keep:
        how = result.derivation[i]
        if how[0] != "gen":
            how = (how[0], tuple(new_index[a] for a in how[1]))
        derivation.append(how)
    psi = make_hom(result.source, result.functor.apply(obj), [new_index[p] for p in result.psi.map.table])
    return UniversalArrowResult(result.functor, result.source, obj, psi, result.embedding[keep],
                                tuple(derivation), result.solution_set, result.delta)


def constant_unit(result: UniversalArrowResult) -> UniversalArrowResult:
    """Same object, but the unit sends every generator to element 0."""
    psi = make_hom(result.source, result.psi.cod, [0] * result.source.size)
    return UniversalArrowResult(result.functor, result.source, result.object, psi, result.embedding,
                                result.derivation, result.solution_set, result.delta)
