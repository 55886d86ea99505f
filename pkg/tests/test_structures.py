import itertools

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from gaft import builtins
from gaft.errors import KappaUnavailable, PreconditionError, ResourceError
from gaft.dsl import parse_kind
from gaft.finset import FinSet, Subset, all_subsets, intersection
from gaft.search import enumerate_structures
from gaft.structures import (
    INFINITE,
    Structure,
    closed_subsets,
    closure,
    compose_homs,
    identity_hom,
    induced_substructure,
    is_closed,
    is_morphism,
    is_structure,
    kappa,
    make_hom,
    product_structure,
    saturate,
    terminal,
)

SL = builtins.kind("Semilattice")
PT = builtins.kind("Pointed")
GF = builtins.kind("GF2Vector")


def chain2():
    return Structure(SL, 2, ((0, 1, 1, 1),))


def test_is_structure_examples():
    assert is_structure(SL, 2, ((0, 1, 1, 1),))
    bad = is_structure(SL, 2, ((0, 0, 1, 1),))  # a v b = a, b v a = b
    assert not bad
    lhs, rhs = bad.equation
    assert str(lhs) == "join(x, y)" and bad.assignment == {"x": 0, "y": 1}
    assert is_structure(SL, 0, ((),))


def test_table_shape_checked():
    with pytest.raises(PreconditionError):
        Structure(SL, 2, ((0, 1, 1),))
    with pytest.raises(PreconditionError):
        Structure(SL, 2, ((0, 1, 1, 2),))


def test_is_morphism_examples():
    c = chain2()
    assert is_morphism(identity_hom(c))
    passing = [t for t in itertools.product(range(2), repeat=2) if is_morphism(make_hom(c, c, t))]
    assert passing == [(0, 0), (0, 1), (1, 1)]
    assert is_morphism(make_hom(c, c, (1, 1)))


def test_kind_mismatch():
    with pytest.raises(PreconditionError):
        is_morphism(make_hom(chain2(), Structure(PT, 2, ((0,),)), (0, 1)))


def test_product_structure_examples():
    t = terminal(SL)
    assert t.size == 1
    p = product_structure(SL, [chain2(), chain2()])
    diamond, elems = p.materialize()
    assert diamond.size == 4
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            assert elems[diamond.apply("join", (i, j))] == (max(a[0], b[0]), max(a[1], b[1]))
    star, sy = Structure(PT, 1, ((0,),)), Structure(PT, 2, ((0,),))
    pp = product_structure(PT, [star, sy])
    assert pp.apply("base") == (0, 0)


def test_projections_and_tuple_homs():
    p = product_structure(SL, [chain2(), chain2()])
    for pr in p.projection_homs():
        assert is_morphism(pr)
    c = chain2()
    h = p.tuple_hom([identity_hom(c), make_hom(c, c, (1, 1))])
    assert is_morphism(h)


def test_induced_substructure_examples():
    c = chain2()
    assert induced_substructure(SL, c, Subset.full(c.carrier)) == c
    assert induced_substructure(SL, c, Subset(c.carrier, (0,))).size == 1
    v = oracles.free_gf2(2)  # bit vectors: 1 = (1,0), 2 = (0,1)
    assert induced_substructure(GF, v, Subset(v.carrier, (0, 1, 2))) is None


def test_closure_examples():
    v = oracles.free_gf2(2)
    assert closure(GF, v, Subset(v.carrier, (1, 2))).members == (0, 1, 2, 3)
    p = Structure(PT, 3, ((1,),))
    assert closure(PT, p, Subset(p.carrier, ())).members == (1,)
    c = chain2()
    assert closure(SL, c, Subset(c.carrier, (0,))).members == (0,)


def test_kappa_values():
    assert kappa(SL, 2) == 3
    assert kappa(PT, 0) == 1
    assert kappa(builtins.kind("Group"), 1) is INFINITE
    assert kappa(SL, INFINITE) is INFINITE
    assert 10**9 < INFINITE and not INFINITE < 5
    with pytest.raises(KappaUnavailable):
        kappa(parse_kind("kind K { vars; }"), 1)


def test_saturation_budget():
    gens = [0]
    with pytest.raises(ResourceError):
        saturate(gens, (("s", 1),), lambda op, args: args[0] + 1, budget=50)


def test_json_round_trip():
    s = oracles.free_semilattice(2)
    data = s.to_json()
    assert data["kind"] == "Semilattice" and data["carrier"] == 3
    assert data["tables"]["join"][0][1] == s.apply("join", (0, 1))
    assert Structure.from_json(SL, data) == s
    p = Structure(PT, 2, ((1,),))
    assert p.to_json()["tables"] == {"base": 1}


def test_relabel_is_isomorphic_copy():
    s = oracles.free_semilattice(2)
    perm = [2, 0, 1]
    t = s.relabel(perm)
    assert is_morphism(make_hom(s, t, perm))


SMALL = {name: enumerate_structures(builtins.kind(name), 4) for name in builtins.FINITE_KAPPA}
cases = [(name, i) for name, ss in SMALL.items() for i in range(len(ss))]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(cases), st.data())
def test_closure_properties(case, data):
    name, i = case
    s = SMALL[name][i]
    kind = s.kind
    members = data.draw(st.sets(st.integers(0, max(s.size - 1, 0)))) if s.size else set()
    z = Subset.of(s.carrier, members)
    c = closure(kind, s, z)
    assert z.issubset(c)
    assert closure(kind, s, c) == c
    assert set(c.members) == oracles.brute_closure(s, members)
    supersets = [t for t in closed_subsets(s) if z.issubset(t)]
    assert intersection(supersets) == c
    more = data.draw(st.sets(st.integers(0, max(s.size - 1, 0)))) if s.size else set()
    assert c.issubset(closure(kind, s, Subset.of(s.carrier, members | more)))


@pytest.mark.parametrize("name", builtins.FINITE_KAPPA)
def test_closure_bound_and_s1_s2_small(name):
    for s in SMALL[name]:
        closed = closed_subsets(s)
        for u, w in itertools.combinations(closed, 2):
            assert is_closed(s, intersection([u, w]))
        for z in all_subsets(s.carrier):
            assert len(closure(s.kind, s, z)) <= kappa(s.kind, len(z))


def test_compose_homs_is_g_after_f():
    c = chain2()
    f = make_hom(c, c, (0, 1))
    g = make_hom(c, c, (1, 1))
    assert compose_homs(f, g).map.table == (1, 1)
