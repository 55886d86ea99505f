# # The left adjoint
#
# Universal arrows for every object assemble into a functor F with a unit and
# a counit. The adjunction is built lazily and only for the objects asked for.

# %%

from gaft import Adjunction, builtin_kind, check_adjunction_laws, forgetful, make_hom
from gaft.structures import Structure

SET = builtin_kind("Set")
adj = Adjunction(forgetful(builtin_kind("Semilattice")))
one, two = Structure(SET, 1, ()), Structure(SET, 2, ())

# %% [markdown]
# F on a morphism: the map sending both points of 2 to the one point of 1
# becomes a semilattice morphism from the 3-element free semilattice onto
# the 1-element one.

# %%

collapse = make_hom(two, one, (0, 0))
print(adj.left_on_morphism(collapse).map.table)

# %% [markdown]
# Hom-sets on both sides have the same size. Here y is the 2-element chain.

# %%

chain = Structure(builtin_kind("Semilattice"), 2, ((0, 1, 1, 1),))
b = adj.hom_bijection(two, chain)
print(len(b.left()), "semilattice maps,", len(b.right()), "plain maps")
for f in b.left():
    print(f.map.table, "->", b.forward(f))

# %%

print(adj.counit(chain).map.table)
print(check_adjunction_laws(adj, max_card_y=3).summary())
