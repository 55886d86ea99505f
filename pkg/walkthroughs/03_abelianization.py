# # Abelianization as a universal arrow
#
# Commutative monoids sit inside monoids. The universal arrow out of a monoid
# M is its largest commutative quotient. Monoids have no finite kappa, so the
# solution set has to be supplied by hand.

# %%

import itertools

from gaft import construct_universal
from gaft.functor import commmonoid_in_monoid
from gaft.report import dumps
from gaft.structures import Structure
from gaft import builtin_kind

perms = sorted(itertools.permutations(range(3)))
index = {p: i for i, p in enumerate(perms)}
mul = tuple(index[tuple(p[q[i]] for i in range(3))] for p in perms for q in perms)
s3 = Structure(builtin_kind("Monoid"), 6, ((0,), mul))

cm = builtin_kind("CommMonoid")
trivial = Structure(cm, 1, ((0,), (0,)))
z2 = Structure(cm, 2, ((0,), (0, 1, 1, 0)))

# %%

e = commmonoid_in_monoid()
r = construct_universal(e, s3, [trivial, z2], "trivial and cyclic of order 2")
print("object size:", r.object.size)
print("unit:", r.psi.map.table)

# %% [markdown]
# The unit is the sign of a permutation: the three transpositions land on the
# same element, the rotations on the identity.

# %%

for p, v in zip(perms, r.psi.map.table):
    print(p, "->", v)

# %%

print(dumps(r.verification.report.to_json()))
