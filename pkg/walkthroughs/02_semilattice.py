# # Free semilattices by brute force
#
# The free semilattice on n generators is the set of nonempty subsets under
# union, so it has 2**n - 1 elements. Here the engine finds it without being
# told, and we compare against a hand-written copy.

# %%

import time

import numpy as np

from gaft import builtin_kind, construct_universal, forgetful, is_isomorphic
from gaft.structures import Structure

sl = builtin_kind("Semilattice")
e = forgetful(sl)


def subsets_under_union(n):
    size = 2**n - 1
    join = tuple(((a + 1) | (b + 1)) - 1 for a in range(size) for b in range(size))
    return Structure(sl, size, (join,))


# %%

for n in range(4):
    t = time.perf_counter()
    r = construct_universal(e, Structure(builtin_kind("Set"), n, ()))
    took = time.perf_counter() - t
    same = is_isomorphic(sl, r.object, subsets_under_union(n)) is not None
    print(f"n={n}  |F(X)|={r.object.size}  lambda={len(r.solution_set.members)}  "
          f"delta={len(r.delta.entries)}  iso={same}  {took:.1f}s")

# %% [markdown]
# The join table of the result, as a numpy array. Each row is one element,
# and the generators sit where the unit puts them.

# %%

r = construct_universal(e, Structure(builtin_kind("Set"), 2, ()))
print(np.array(r.object.tables[0]).reshape(r.object.size, r.object.size))
print("generators at", r.psi.map.table)
