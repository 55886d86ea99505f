# # Free pointed sets
#
# A pointed set is a set with one constant. Forgetting the constant gives a
# functor into plain sets, and the universal arrow out of a set X should be
# X plus one fresh point.

# %%

from gaft import builtin_kind, construct_universal, forgetful, to_dot
from gaft.report import dumps
from gaft.structures import Structure

pointed = builtin_kind("Pointed")
e = forgetful(pointed)
x = Structure(builtin_kind("Set"), 2, ())

# %% [markdown]
# The solution set is every pointed set of size at most kappa(2) = 3, up to
# isomorphism. The mixed maps out of X into those members get stacked into
# one big array psi' whose rows are the elements of X.

# %%

result = construct_universal(e, x)
print("solution set:", len(result.solution_set.members), "members")
print("psi' shape:", result.embedding.shape)
print("object size:", result.object.size)
print("unit:", result.psi.map.table)

# %% [markdown]
# Every element of the universal object comes with a derivation: either it is
# the image of a generator, or it was produced by an operation.

# %%

for i, how in enumerate(result.derivation):
    print(i, how)

# %%

print(dumps(result.verification.report.to_json()))

# %% [markdown]
# Graphviz source for the factorization diagram, ready for `dot -Tsvg`.

# %%

print(to_dot(result))
