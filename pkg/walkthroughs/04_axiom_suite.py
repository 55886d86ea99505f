# # Checking the side conditions
#
# The construction is only sound when the kind and the functor satisfy a
# list of closure properties. They can be checked by sampling.

# %%

from gaft import builtin_kind, check_kind_axioms, check_limit_preservation, check_st_axioms, forgetful
from gaft.dsl import parse_kind

for name in ("Pointed", "Semilattice", "MSet2"):
    rep = check_kind_axioms(builtin_kind(name), max_card=3)
    print(rep.summary())

# %%

e = forgetful(builtin_kind("GF2Vector"))
print(check_st_axioms(e, max_card_y=4).summary())
print(check_limit_preservation(e, max_card=4).summary())

# %% [markdown]
# A kind can lie about its kappa. Drop associativity from semilattices and
# the closure of two points is no longer bounded by 3.

# %%

broken = parse_kind("""
kind Magma {
  op join/2;
  vars x y;
  eq join(x, y) = join(y, x);
  eq join(x, x) = x;
  kappa 2^n - 1
}
""")
rep = check_kind_axioms(broken, max_card=4)
print(rep.summary())
print(rep.witnesses("S3")[0])
