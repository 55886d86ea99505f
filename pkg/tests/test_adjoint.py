import threading

import pytest

import oracles
from fixtures import constant_unit
from gaft import builtins
from gaft.adjoint import Adjunction, check_adjunction_laws
from gaft.functor import commmonoid_in_monoid, forgetful
from gaft.search import enumerate_homs
from gaft.structures import Structure, compose_homs, identity_hom, make_hom, terminal

SET = builtins.kind("Set")
SL, PT = builtins.kind("Semilattice"), builtins.kind("Pointed")


def bare(n):
    return Structure(SET, n, ())


def test_left_on_identity():
    adj = Adjunction(forgetful(SL))
    x = bare(2)
    assert adj.left_on_morphism(identity_hom(x)).map.table == (0, 1, 2)


def test_left_on_inclusion_pointed():
    adj = Adjunction(forgetful(PT))
    g = make_hom(bare(1), bare(2), [0])
    fg = adj.left_on_morphism(g)
    r1, r2 = adj.universal(bare(1)), adj.universal(bare(2))
    assert fg(r1.psi(0)) == r2.psi(0)
    assert fg(r1.object.apply("base")) == r2.object.apply("base")


def test_left_on_collapse_semilattice():
    adj = Adjunction(forgetful(SL))
    g = make_hom(bare(2), bare(1), [0, 0])
    assert adj.left_on_morphism(g).map.table == (0, 0, 0)


def test_functoriality_on_composites():
    adj = Adjunction(forgetful(builtins.kind("MSet2")))
    g1 = make_hom(bare(1), bare(2), [1])
    g2 = make_hom(bare(2), bare(2), [1, 0])
    lhs = adj.left_on_morphism(compose_homs(g1, g2))
    rhs = compose_homs(adj.left_on_morphism(g1), adj.left_on_morphism(g2))
    assert lhs.map == rhs.map


def test_hom_bijection_examples():
    adj = Adjunction(forgetful(SL))
    chain = Structure(SL, 2, ((0, 1, 1, 1),))
    b = adj.hom_bijection(bare(1), chain)
    assert len(b.left()) == len(b.right()) == 2
    for f in b.left():
        assert b.backward(b.forward(f)).map == f.map
    t = adj.hom_bijection(bare(2), terminal(SL))
    assert len(t.left()) == len(t.right()) == 1
    adjp = Adjunction(forgetful(PT))
    sy = Structure(PT, 2, ((0,),))
    bp = adjp.hom_bijection(bare(1), sy)
    assert sorted(bp.forward(f) for f in bp.left()) == [(0,), (1,)]


def test_naturality_square_inclusion_into_chain():
    adj = Adjunction(forgetful(SL))
    chain = Structure(SL, 2, ((0, 1, 1, 1),))
    g = make_hom(bare(1), bare(2), [0])
    b2, b1 = adj.hom_bijection(bare(2), chain), adj.hom_bijection(bare(1), chain)
    fg = adj.left_on_morphism(g)
    for f in b2.left():
        assert tuple(b2.forward(f)[g(a)] for a in range(1)) == b1.forward(compose_homs(fg, f))


@pytest.mark.parametrize("name", ["Pointed", "Semilattice", "MSet2"])
def test_laws_pass(name):
    rep = check_adjunction_laws(Adjunction(forgetful(builtins.kind(name))), max_card_y=3, sample_budget=10)
    assert rep.passed, rep.summary()
    assert rep.to_json()["axioms"]["triangle-counit"]["checked"] > 0


def test_laws_with_user_solution_sets():
    # abelianization: quotients of a commutative monoid image are enough
    e = commmonoid_in_monoid()

    def members(x):
        _, q = oracles.abelianization(x)
        out = [oracles.cyclic_commmonoid(1)]
        if q.size > 1:
            out.append(q)
        return out

    adj = Adjunction(e, members=members)
    x = oracles.s3_monoid()
    assert adj.left_on_object(x).size == 2
    ys = [oracles.cyclic_commmonoid(n) for n in (1, 2, 3)]
    rep = check_adjunction_laws(adj, xs=[x], ys=ys)
    assert rep.violations("hom-cardinality") == 0 and rep.violations("bijection") == 0


def test_tampered_unit_fails():
    e = forgetful(SL)
    adj = Adjunction(e)
    x = bare(2)
    adj.install(x, constant_unit(adj.universal(x)))
    rep = check_adjunction_laws(adj, xs=[x], max_card_y=3)
    assert not rep.passed
    assert rep.violations("triangle-unit") > 0
    assert rep.witnesses("triangle-unit")[0]["psi"] == [0, 0]


def test_memo_is_shared_across_threads():
    adj = Adjunction(forgetful(builtins.kind("GF2Vector")))
    x = bare(2)
    seen = []

    def work():
        seen.append(adj.universal(x))

    threads = [threading.Thread(target=work) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r is seen[0] for r in seen)
