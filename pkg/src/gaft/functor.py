"""Concrete functors between categories of structures.

A functor keeps carriers and underlying maps unchanged; on objects it
computes each target operation from a term in the source operations.  The
mixed maps from a target-kind object ``x`` into a source-kind object ``y``
are the target morphisms ``x -> E(y)``.
"""
from __future__ import annotations

import itertools
import random
from typing import Optional

from . import builtins
from .dsl import App, KindSpec, Var, eval_term, term_vars
from .errors import IllDefinedFunctor, PreconditionError
from .finset import factor_through, intersection, equalizer
from .report import Report
from .search import enumerate_homs, enumerate_structures
from .structures import (
    Hom,
    Structure,
    closed_subsets,
    hom_violation,
    induced_substructure,
    is_structure,
    make_hom,
    product_structure,
    structure_from_function,
)

DEFAULT_SEED = 0


class ConcreteFunctor:
    """Identity-on-carriers functor ``source -> target``.

    ``interpretation`` maps each target op of arity ``k`` to a source-kind
    term over the variables ``x1 .. xk``.
    """

    def __init__(self, name: str, source: KindSpec, target: KindSpec, interpretation: dict):
        self.name = name
        self.source = source
        self.target = target
        self.interpretation = {}
        for op, k in target.ops:
            if op not in interpretation:
                raise PreconditionError(f"functor {name!r} does not interpret {op!r}")
            term = interpretation[op]
            allowed = [f"x{i + 1}" for i in range(k)]
            bad = [v for v in term_vars(term) if v not in allowed]
            if bad:
                raise PreconditionError(f"interpretation of {op!r} mentions {bad}")
            _check_term(source, term)
            self.interpretation[op] = term
        self._cache = {}

    def __repr__(self):
        return f"ConcreteFunctor({self.name!r}: {self.source.name} -> {self.target.name})"

    def apply(self, obj):
        if isinstance(obj, Hom):
            return make_hom(self.apply(obj.dom), self.apply(obj.cod), obj.map.table)
        if not isinstance(obj, Structure) or obj.kind != self.source:
            raise PreconditionError(f"{self.name} applies to {self.source.name} structures")
        cached = self._cache.get(obj)
        if cached is not None:
            return cached

        def fn(op, args):
            env = {f"x{i + 1}": a for i, a in enumerate(args)}
            return eval_term(self.interpretation[op], obj, env)

        image = structure_from_function(self.target, obj.size, fn)
        check = is_structure(self.target, image.size, image.tables)
        if not check:
            lhs, rhs = check.equation
            raise IllDefinedFunctor(
                f"{self.name} sends a {self.source.name} structure to tables violating {lhs} = {rhs}",
                witness={"structure": obj.to_json(), "assignment": check.assignment},
            )
        self._cache[obj] = image
        return image

    def admits(self, x: Structure, y: Structure, table) -> bool:
        """Extra restriction on mixed maps beyond being a target morphism."""
        return True

    def is_st_morphism(self, x: Structure, y: Structure, table) -> bool:
        table = tuple(table)
        if len(table) != x.size or any(not 0 <= v < y.size for v in table):
            return False
        return hom_violation(x, self.apply(y), table) is None and self.admits(x, y, table)

    def st_morphisms(self, x: Structure, y: Structure) -> list:
        if x.kind != self.target:
            raise PreconditionError(f"mixed maps start at {self.target.name} structures")
        ey = self.apply(y)
        return [h for h in enumerate_homs(self.target, x, ey) if self.admits(x, y, h.map.table)]


def _check_term(kind, term):
    if isinstance(term, Var):
        return
    if term.op not in kind.op_names or kind.arity(term.op) != len(term.args):
        raise PreconditionError(f"{term} is not a {kind.name} term")
    for a in term.args:
        _check_term(kind, a)


def apply(e: ConcreteFunctor, obj):
    return e.apply(obj)


def st_morphisms(e: ConcreteFunctor, x: Structure, y: Structure) -> list:
    return e.st_morphisms(x, y)


# -- built-in functors -----------------------------------------------------

def _binary(op):
    return App(op, (Var("x1"), Var("x2")))


def forgetful(source: KindSpec) -> ConcreteFunctor:
    return ConcreteFunctor(f"forgetful:{source.name}", source, builtins.kind("Set"), {})


def commmonoid_in_monoid() -> ConcreteFunctor:
    return ConcreteFunctor(
        "commmonoid-in-monoid",
        builtins.kind("CommMonoid"),
        builtins.kind("Monoid"),
        {"unit": App("unit"), "mul": _binary("mul")},
    )


def bsl_in_commmonoid() -> ConcreteFunctor:
    return ConcreteFunctor(
        "bsl-in-commmonoid",
        builtins.kind("BoundedSemilattice"),
        builtins.kind("CommMonoid"),
        {"unit": App("bot"), "mul": _binary("join")},
    )


INCLUSIONS = {"commmonoid-in-monoid": commmonoid_in_monoid, "bsl-in-commmonoid": bsl_in_commmonoid}


def builtin_functor(name: str, source: Optional[KindSpec] = None) -> ConcreteFunctor:
    if name == "forgetful":
        if source is None:
            raise PreconditionError("the forgetful functor needs a source kind")
        return forgetful(source)
    if name.startswith("forgetful:"):
        return forgetful(source if source is not None else builtins.kind(name.split(":", 1)[1]))
    try:
        return INCLUSIONS[name]()
    except KeyError:
        raise PreconditionError(f"unknown functor {name!r}") from None


def builtin_functors() -> list:
    out = [forgetful(builtins.kind(k)) for k in builtins.SOURCES if k != "Set"]
    out += [f() for f in INCLUSIONS.values()]
    return out


# -- axiom checks ----------------------------------------------------------

def _sample(rng, items, budget):
    items = list(items)
    if len(items) <= budget:
        return items
    picked = sorted(rng.sample(range(len(items)), budget))
    return [items[i] for i in picked]


def check_st_axioms(e: ConcreteFunctor, max_card_x=2, max_card_y=3, sample_budget=40,
                    seed=DEFAULT_SEED) -> Report:
    """Check the four closure properties of mixed maps on sampled instances.

    ``ST1`` post-composition with source morphisms, ``ST2`` tupling into
    products, ``ST3`` corestriction to any closed subset containing the image,
    ``ST3'`` corestriction to intersections of such subsets.  ``ST3~ST3'``
    records per-instance agreement of the last two verdicts.
    """
    rng = random.Random(seed)
    rep = Report(f"mixed-map axioms for {e.name} (seed {seed})")
    for name in ("ST1", "ST2", "ST3", "ST3'", "ST3~ST3'"):
        rep.declare(name)
    xs = enumerate_structures(e.target, max_card_x)
    ys = enumerate_structures(e.source, max_card_y)

    def j(h):
        return list(h.map.table)

    # ST1
    for x in _sample(rng, xs, 6):
        for y1, y2 in _sample(rng, itertools.product(ys, repeat=2), sample_budget):
            for phi in _sample(rng, e.st_morphisms(x, y1), 6):
                for f in _sample(rng, enumerate_homs(e.source, y1, y2), 6):
                    comp = [f(v) for v in phi.map.table]
                    rep.record("ST1", e.is_st_morphism(x, y2, comp),
                               {"x": x.to_json(), "via": y1.to_json(), "y": y2.to_json(),
                                "phi": j(phi), "f": j(f)})

    # ST2, including the empty family
    for x in _sample(rng, xs, 6):
        fams = [()] + _sample(rng, itertools.product(ys, repeat=2), sample_budget // 2 or 1)
        for fam in fams:
            ps = product_structure(e.source, fam)
            prod, _ = ps.materialize()
            choices = [_sample(rng, e.st_morphisms(x, y), 3) for y in fam]
            for combo in itertools.product(*choices):
                table = [ps.carrier.index(tuple(p(a) for p in combo)) for a in range(x.size)]
                rep.record("ST2", e.is_st_morphism(x, prod, table),
                           {"x": x.to_json(), "factors": [y.to_json() for y in fam],
                            "maps": [j(p) for p in combo]})

    # ST3 and ST3'
    for x in _sample(rng, xs, 6):
        for y in _sample(rng, ys, sample_budget):
            closed = closed_subsets(y)
            for phi in _sample(rng, e.st_morphisms(x, y), 8):
                img = set(phi.map.table)
                over = [s for s in closed if img <= s.as_set()]
                v3 = True
                for s in over:
                    sub = induced_substructure(e.source, y, s)
                    co = factor_through(phi.map, s)
                    ok = e.is_st_morphism(x, sub, co.table)
                    v3 = v3 and ok
                    rep.record("ST3", ok, {"x": x.to_json(), "y": y.to_json(), "phi": j(phi),
                                           "subset": list(s.members)})
                v3p = True
                families = [over] + [[u, w] for u, w in itertools.combinations(over, 2)]
                for fam in families:
                    if not fam:
                        continue
                    s = intersection(fam)
                    sub = induced_substructure(e.source, y, s)
                    co = factor_through(phi.map, s)
                    ok = sub is not None and co is not None and e.is_st_morphism(x, sub, co.table)
                    v3p = v3p and ok
                    rep.record("ST3'", ok, {"x": x.to_json(), "y": y.to_json(), "phi": j(phi),
                                            "subsets": [list(t.members) for t in fam]})
                rep.record("ST3~ST3'", v3 == v3p, {"x": x.to_json(), "y": y.to_json(), "phi": j(phi),
                                                  "ST3": v3, "ST3'": v3p})
    return rep


def check_limit_preservation(e: ConcreteFunctor, max_card=3, sample_budget=40, seed=DEFAULT_SEED) -> Report:
    """Products, equalizers and intersections computed before and after ``E``
    must coincide on the nose (same carrier, same tables)."""
    rng = random.Random(seed)
    rep = Report(f"limit preservation for {e.name} (seed {seed})")
    for name in ("products", "equalizers", "intersections"):
        rep.declare(name)
    ys = enumerate_structures(e.source, max_card)

    fams = [()] + [(y,) for y in _sample(rng, ys, 4)]
    fams += _sample(rng, itertools.product(ys, repeat=2), sample_budget)
    for fam in fams:
        before = e.apply(product_structure(e.source, fam).materialize()[0])
        after = product_structure(e.target, [e.apply(y) for y in fam]).materialize()[0]
        rep.record("products", before == after, {"factors": [y.to_json() for y in fam]})

    for a, b in _sample(rng, itertools.product(ys, repeat=2), sample_budget):
        hs = enumerate_homs(e.source, a, b)
        for f, g in _sample(rng, itertools.combinations(hs, 2), 6):
            s = equalizer(f.map, g.map)
            ef, eg = e.apply(f), e.apply(g)
            same_subset = equalizer(ef.map, eg.map) == s
            sub = induced_substructure(e.source, a, s)
            image_sub = induced_substructure(e.target, e.apply(a), s)
            ok = same_subset and sub is not None and image_sub is not None and e.apply(sub) == image_sub
            rep.record("equalizers", ok, {"dom": a.to_json(), "cod": b.to_json(),
                                          "f": list(f.map.table), "g": list(g.map.table)})

    for a in _sample(rng, ys, sample_budget):
        closed = closed_subsets(a)
        ea = e.apply(a)
        for u, w in _sample(rng, itertools.combinations(closed, 2), 10):
            s = intersection([u, w])
            sub = induced_substructure(e.source, a, s)
            image_sub = induced_substructure(e.target, ea, s)
            ok = sub is not None and image_sub is not None and e.apply(sub) == image_sub
            rep.record("intersections", ok, {"structure": a.to_json(),
                                             "subsets": [list(u.members), list(w.members)]})
    return rep
