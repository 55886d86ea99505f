"""The left adjoint assembled from universal arrows, one object at a time."""
from __future__ import annotations

import itertools
import random
import threading
from typing import Callable, Optional

from .errors import GaftError, NoFactorization
from .functor import ConcreteFunctor
from .report import Report
from .search import enumerate_homs, enumerate_structures
from .structures import INFINITE, Hom, Structure, compose_homs, identity_hom, kappa
from .universal import UniversalArrowResult, construct_universal, factorize

DEFAULT_SEED = 0


class Adjunction:
    """``F -| E`` built lazily: ``F(x)`` is the object of the universal arrow
    out of ``x`` and the unit at ``x`` is its ``psi``.

    ``members`` optionally maps an object ``x`` to a user solution set; by
    default the kappa bound is used.
    """

    def __init__(self, functor: ConcreteFunctor, members: Optional[Callable] = None, **construct_options):
        self.functor = functor
        self.members = members
        self.options = construct_options
        self._results = {}
        self._lock = threading.Lock()

    def install(self, x: Structure, result: UniversalArrowResult):
        """Pin the universal arrow used for ``x``."""
        with self._lock:
            self._results[x] = result

    def universal(self, x: Structure) -> UniversalArrowResult:
        with self._lock:
            hit = self._results.get(x)
        if hit is not None:
            return hit
        members = self.members(x) if self.members is not None else None
        result = construct_universal(self.functor, x, members, **self.options)
        with self._lock:
            # concurrent builders produce equal results; the first one wins
            return self._results.setdefault(x, result)

    def left_on_object(self, x: Structure) -> Structure:
        return self.universal(x).object

    def unit(self, x: Structure) -> Hom:
        return self.universal(x).psi

    def left_on_morphism(self, g: Hom) -> Hom:
        """``F(g) = factorize(psi_{x'} o g)`` for ``g: x -> x'``."""
        rx, rx2 = self.universal(g.dom), self.universal(g.cod)
        table = [rx2.psi(g(a)) for a in range(g.dom.size)]
        return factorize(self.functor, rx, rx2.object, table)

    def counit(self, y: Structure) -> Hom:
        """``eps_y: F(E y) -> y``, the factorization of the identity of ``E y``."""
        ey = self.functor.apply(y)
        return factorize(self.functor, self.universal(ey), y, list(range(y.size)))

    def hom_bijection(self, x: Structure, y: Structure) -> "HomBijection":
        return HomBijection(self, x, y)


class HomBijection:
    """``T(F x, y) <-> S(x, E y)``."""

    def __init__(self, adj: Adjunction, x: Structure, y: Structure):
        self.adj, self.x, self.y = adj, x, y
        self.result = adj.universal(x)

    def left(self) -> list:
        return enumerate_homs(self.adj.functor.source, self.result.object, self.y)

    def right(self) -> list:
        return self.adj.functor.st_morphisms(self.x, self.y)

    def forward(self, f: Hom) -> tuple:
        return tuple(f(p) for p in self.result.psi.map.table)

    def backward(self, phi) -> Hom:
        return factorize(self.adj.functor, self.result, self.y, phi)


def _sample(rng, items, budget):
    items = list(items)
    if len(items) <= budget:
        return items
    return [items[i] for i in sorted(rng.sample(range(len(items)), budget))]


def check_adjunction_laws(adj: Adjunction, max_card_x=2, max_card_y=4, sample_budget=30,
                          seed=DEFAULT_SEED, counit_kappa_limit=6, xs=None, ys=None) -> Report:
    """Hom-set bijection, naturality in both variables, functoriality of ``F``
    and both triangle identities on sampled objects.

    The counit at ``y`` needs the universal arrow out of ``E y``, so the
    counit triangle is only checked where ``kappa(|y|) <= counit_kappa_limit``.
    """
    e = adj.functor
    rng = random.Random(seed)
    rep = Report(f"adjunction laws for {e.name} (seed {seed})")
    for name in ("hom-cardinality", "bijection", "naturality-x", "naturality-y",
                 "functoriality", "triangle-unit", "triangle-counit"):
        rep.declare(name)
    xs = list(xs) if xs is not None else enumerate_structures(e.target, max_card_x)
    ys = list(ys) if ys is not None else enumerate_structures(e.source, max_card_y)
    ys = _sample(rng, ys, sample_budget)

    def tbl(h):
        return list(h.map.table)

    for x in xs:
        fx = adj.left_on_object(x)
        # factorizing psi through itself gives the identity of F(x)
        try:
            ok = factorize(e, adj.universal(x), fx, adj.unit(x)).map.table == tuple(range(fx.size))
        except NoFactorization:
            ok = False
        rep.record("triangle-unit", ok, {"x": x.to_json(), "psi": tbl(adj.unit(x))})
        ok = adj.left_on_morphism(identity_hom(x)).map.table == tuple(range(fx.size)) if ok else False
        rep.record("functoriality", ok, {"x": x.to_json(), "law": "F(id) = id"})

        for y in ys:
            b = adj.hom_bijection(x, y)
            left, right = b.left(), b.right()
            rep.record("hom-cardinality", len(left) == len(right),
                       {"x": x.to_json(), "y": y.to_json(), "left": len(left), "right": len(right)})
            right_tables = {h.map.table for h in right}
            for f in left:
                phi = b.forward(f)
                ok = phi in right_tables
                if ok:
                    try:
                        ok = b.backward(phi).map.table == f.map.table
                    except NoFactorization:
                        ok = False
                rep.record("bijection", ok, {"x": x.to_json(), "y": y.to_json(), "f": tbl(f)})
            for phi in right:
                try:
                    ok = b.forward(b.backward(phi)) == phi.map.table
                except NoFactorization:
                    ok = False
                rep.record("bijection", ok, {"x": x.to_json(), "y": y.to_json(), "phi": tbl(phi)})

            # naturality in y: forward(h o f) = E(h) o forward(f)
            for y2 in _sample(rng, ys, 3):
                for h in _sample(rng, enumerate_homs(e.source, y, y2), 3):
                    for f in _sample(rng, left, 4):
                        lhs = b.forward(compose_homs(f, h))
                        rhs = tuple(h(v) for v in b.forward(f))
                        rep.record("naturality-y", lhs == rhs,
                                   {"x": x.to_json(), "y": y.to_json(), "y2": y2.to_json(),
                                    "f": tbl(f), "h": tbl(h)})

            # naturality in x: forward(f) o g = forward(f o F(g)) for g: x2 -> x
            for x2 in _sample(rng, xs, 3):
                b2 = adj.hom_bijection(x2, y)
                for g in _sample(rng, enumerate_homs(e.target, x2, x), 3):
                    try:
                        fg = adj.left_on_morphism(g)
                    except NoFactorization:
                        rep.record("naturality-x", False, {"x": x.to_json(), "x2": x2.to_json(), "g": tbl(g)})
                        continue
                    for f in _sample(rng, left, 4):
                        lhs = tuple(b.forward(f)[g(a)] for a in range(x2.size))
                        rhs = b2.forward(compose_homs(fg, f))
                        rep.record("naturality-x", lhs == rhs,
                                   {"x": x.to_json(), "x2": x2.to_json(), "y": y.to_json(),
                                    "g": tbl(g), "f": tbl(f)})

        # F(g2 o g1) = F(g2) o F(g1)
        for x1, x2 in _sample(rng, itertools.product(xs, repeat=2), 4):
            for g1 in _sample(rng, enumerate_homs(e.target, x1, x2), 2):
                for g2 in _sample(rng, enumerate_homs(e.target, x2, x), 2):
                    try:
                        lhs = adj.left_on_morphism(compose_homs(g1, g2)).map.table
                        rhs = compose_homs(adj.left_on_morphism(g1), adj.left_on_morphism(g2)).map.table
                        ok = lhs == rhs
                    except NoFactorization:
                        ok = False
                    rep.record("functoriality", ok, {"g1": tbl(g1), "g2": tbl(g2)})

    # E(eps_y) o psi_{E y} = id
    checked = 0
    for y in ys:
        bound = _kappa_or_none(e, y.size)
        if adj.members is None and (bound is None or bound > counit_kappa_limit):
            continue
        try:
            eps = adj.counit(y)
            r = adj.universal(e.apply(y))
            ok = tuple(eps(p) for p in r.psi.map.table) == tuple(range(y.size))
        except NoFactorization:
            ok = False
        checked += 1
        rep.record("triangle-counit", ok, {"y": y.to_json()})
    if checked < len(ys):
        rep.declare("triangle-counit",
                    note=f"checked on {checked} of {len(ys)} sampled targets (kappa(|y|) <= {counit_kappa_limit})")
    return rep


def _kappa_or_none(e, n):
    try:
        v = kappa(e.source, n)
    except GaftError:
        return None
    return None if v is INFINITE else v
