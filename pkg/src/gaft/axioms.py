"""Executable checks of the structure axioms on enumerated instances.

Axiom names in reports: ``A1`` isomorphisms are morphisms, ``A2`` closure
under composition, ``A3`` a bijection is an isomorphism iff it and its
inverse are morphisms, ``I1``/``I2`` induced structures, ``S1`` equalizer
subsets are closed, ``S2`` intersections of closed subsets are closed,
``S3`` closures are bounded by kappa, ``P1``/``P2`` products.
"""
from __future__ import annotations

import itertools
import random

from .dsl import KindSpec
from .errors import KappaUnavailable
from .finset import Subset, all_subsets, equalizer, factor_through, intersection
from .report import Report
from .search import enumerate_homs, enumerate_structures, is_isomorphic
from .structures import (
    closure,
    compose_homs,
    hom_violation,
    identity_hom,
    induced_substructure,
    is_closed,
    is_finite,
    is_morphism,
    kappa,
    make_hom,
    product_structure,
)

DEFAULT_SEED = 0
PRODUCT_SIZE_LIMIT = 64


def _sample(rng, items, budget):
    items = list(items)
    if len(items) <= budget:
        return items
    picked = sorted(rng.sample(range(len(items)), budget))
    return [items[i] for i in picked]


def _table(h):
    return list(h.map.table)


def check_kind_axioms(kind: KindSpec, max_card=4, sample_budget=60, seed=DEFAULT_SEED, structures=None) -> Report:
    rng = random.Random(seed)
    rep = Report(f"kind axioms for {kind.name} (carriers <= {max_card}, seed {seed})")
    for name in ("A1", "A2", "A3", "I1", "I2", "S1", "S2", "S3", "P1", "P2"):
        rep.declare(name)
    if structures is None:
        structures = enumerate_structures(kind, max_card)
    structures = list(structures)
    homs_cache = {}

    def homs(a, b):
        key = (id(a), id(b))
        if key not in homs_cache:
            homs_cache[key] = enumerate_homs(kind, a, b)
        return homs_cache[key]

    pairs = _sample(rng, itertools.product(structures, repeat=2), sample_budget)

    # A1: identities and transported copies are isomorphisms, hence morphisms
    for s in structures:
        rep.record("A1", is_morphism(identity_hom(s)), {"structure": s.to_json(), "map": "identity"})
        perm = list(range(s.size))
        rng.shuffle(perm)
        t = s.relabel(perm)
        iso = make_hom(s, t, perm)
        ok = is_morphism(iso) and is_isomorphic(kind, s, t) is not None
        rep.record("A1", ok, {"structure": s.to_json(), "perm": perm})

    # A2: composites of morphisms are morphisms
    triples = _sample(rng, itertools.product(structures, repeat=3), sample_budget)
    for a, b, c in triples:
        for f in _sample(rng, homs(a, b), 6):
            for g in _sample(rng, homs(b, c), 6):
                h = compose_homs(f, g)
                rep.record("A2", is_morphism(h), {"f": _table(f), "g": _table(g)})

    # A3: bijective morphisms have morphism inverses; isomorphism search agrees
    for a, b in pairs:
        if a.size != b.size:
            continue
        found_bijection = False
        for f in homs(a, b):
            if f.map.is_bijective():
                found_bijection = True
                inv = make_hom(b, a, f.map.inverse().table)
                rep.record("A3", is_morphism(inv), {"dom": a.to_json(), "cod": b.to_json(), "f": _table(f)})
        iso = is_isomorphic(kind, a, b)
        rep.record("A3", (iso is not None) == found_bijection,
                   {"dom": a.to_json(), "cod": b.to_json(), "reason": "isomorphism search disagrees"})

    # I1, I2, S2 on every subset of every structure
    for s in structures:
        closed = []
        for sub in all_subsets(s.carrier):
            ind = induced_substructure(kind, s, sub)
            if (ind is None) == is_closed(s, sub):
                rep.record("I1", False, {"structure": s.to_json(), "subset": list(sub.members),
                                         "reason": "induced structure disagrees with closedness"})
                continue
            if ind is None:
                continue
            closed.append(sub)
            inc = make_hom(ind, s, sub.members)
            rep.record("I1", is_morphism(inc), {"structure": s.to_json(), "subset": list(sub.members)})
            for b in _sample(rng, structures, 4):
                for h in _sample(rng, homs(b, s), 6):
                    co = factor_through(h.map, sub)
                    if co is None:
                        continue
                    rep.record("I2", hom_violation(b, ind, co.table) is None,
                               {"source": b.to_json(), "structure": s.to_json(),
                                "subset": list(sub.members), "h": _table(h)})
        for u, v in _sample(rng, itertools.combinations(closed, 2), sample_budget):
            rep.record("S2", is_closed(s, intersection([u, v])),
                       {"structure": s.to_json(), "subsets": [list(u.members), list(v.members)]})
        if closed:
            rep.record("S2", is_closed(s, intersection(closed)),
                       {"structure": s.to_json(), "subsets": "all closed subsets"})

    # S1: where a family of morphisms agrees is a closed subset
    for a, b in pairs:
        hs = homs(a, b)
        for f, g in _sample(rng, itertools.combinations(hs, 2), 10):
            eq = equalizer(f.map, g.map)
            rep.record("S1", is_closed(a, eq), {"dom": a.to_json(), "cod": b.to_json(),
                                                "f": _table(f), "g": _table(g)})
        if len(hs) > 2:
            agree = Subset(a.carrier, tuple(x for x in range(a.size) if len({h(x) for h in hs}) == 1))
            rep.record("S1", is_closed(a, agree), {"dom": a.to_json(), "cod": b.to_json(), "family": "all homs"})

    # S3: card closure(Z) <= kappa(card Z), and kappa is monotone
    try:
        values = [kappa(kind, n) for n in range(2 * max_card + 2)]
    except KappaUnavailable:
        rep.declare("S3", note="kind declares no kappa bound; not checked")
        values = None
    if values is not None:
        for n in range(len(values) - 1):
            rep.record("S3", not values[n] > values[n + 1], {"kappa_not_monotone_at": n})
        for s in structures:
            for z in all_subsets(s.carrier):
                bound = values[len(z)]
                c = closure(kind, s, z)
                ok = (not is_finite(bound)) or len(c) <= bound
                rep.record("S3", ok, {"structure": s.to_json(), "subset": list(z.members),
                                      "closure": list(c.members), "kappa": bound if is_finite(bound) else "infinite"})

    # P1, P2 on small families, including the empty one
    families = [()] + [(s,) for s in _sample(rng, structures, 4)]
    families += _sample(rng, itertools.product(structures, repeat=2), sample_budget // 4 or 1)
    for fam in families:
        if _prod_size(fam) > PRODUCT_SIZE_LIMIT:
            continue
        ps = product_structure(kind, fam)
        prod, elems = ps.materialize()
        for i, pr in enumerate(ps.projection_homs()):
            rep.record("P1", is_morphism(pr), {"factors": [f.to_json() for f in fam], "projection": i})
        for x in _sample(rng, structures, 3):
            choices = [_sample(rng, homs(x, f), 3) for f in fam]
            for combo in itertools.product(*choices):
                table = [ps.carrier.index(tuple(h(e) for h in combo)) for e in range(x.size)]
                rep.record("P2", hom_violation(x, prod, table) is None,
                           {"source": x.to_json(), "factors": [f.to_json() for f in fam],
                            "maps": [_table(h) for h in combo]})
    return rep


def _prod_size(fam):
    n = 1
    for f in fam:
        n *= f.size
    return n
