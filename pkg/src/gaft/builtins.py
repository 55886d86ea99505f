"""Built-in kinds of structure, shipped as DSL source text."""
from __future__ import annotations

import functools

from .dsl import KindSpec, parse_kind

SET = """
# bare sets: the target of every forgetful functor
kind Set {
  vars;
  kappa n
}
"""

POINTED = """
kind Pointed {
  op base/0;
  vars;
  kappa n + 1
}
"""

SEMILATTICE = """
kind Semilattice {
  op join/2;
  vars x y z;
  eq join(x, y) = join(y, x);
  eq join(x, x) = x;
  eq join(join(x, y), z) = join(x, join(y, z));
  kappa 2^n - 1
}
"""

BOUNDED_SEMILATTICE = """
kind BoundedSemilattice {
  op bot/0;
  op join/2;
  vars x y z;
  eq join(x, y) = join(y, x);
  eq join(x, x) = x;
  eq join(join(x, y), z) = join(x, join(y, z));
  eq join(x, bot) = x;
  kappa 2^n
}
"""

GF2_VECTOR = """
# vector spaces over the two-element field
kind GF2Vector {
  op zero/0;
  op add/2;
  vars x y z;
  eq add(x, y) = add(y, x);
  eq add(add(x, y), z) = add(x, add(y, z));
  eq add(x, zero) = x;
  eq add(x, x) = zero;
  kappa 2^n
}
"""

MONOID = """
kind Monoid {
  op unit/0;
  op mul/2;
  vars x y z;
  eq mul(unit, x) = x;
  eq mul(x, unit) = x;
  eq mul(mul(x, y), z) = mul(x, mul(y, z));
  kappa infinite
}
"""

COMM_MONOID = """
kind CommMonoid {
  op unit/0;
  op mul/2;
  vars x y z;
  eq mul(unit, x) = x;
  eq mul(x, unit) = x;
  eq mul(mul(x, y), z) = mul(x, mul(y, z));
  eq mul(x, y) = mul(y, x);
  kappa infinite
}
"""

GROUP = """
kind Group {
  op unit/0;
  op mul/2;
  op inv/1;
  vars x y z;
  eq mul(unit, x) = x;
  eq mul(x, unit) = x;
  eq mul(mul(x, y), z) = mul(x, mul(y, z));
  eq mul(x, inv(x)) = unit;
  eq mul(inv(x), x) = unit;
  kappa infinite
}
"""


def mset_source(name: str, elements, table, identity) -> str:
    """DSL source for sets acted on by a finite monoid.

    ``elements`` names the monoid elements, ``table[i][j]`` is the index of
    ``elements[i] * elements[j]`` and ``identity`` is the index of the unit.
    Each non-identity element becomes a unary operation; the action law
    ``m(n(x)) = (m n)(x)`` becomes one equation per pair.
    """
    ops = [e for i, e in enumerate(elements) if i != identity]
    lines = [f"kind {name} {{"]
    lines += [f"  op {e}/1;" for e in ops]
    lines.append("  vars x;")
    for i, m in enumerate(elements):
        for j, n in enumerate(elements):
            if identity in (i, j):
                continue
            prod = table[i][j]
            rhs = "x" if prod == identity else f"{elements[prod]}(x)"
            lines.append(f"  eq {m}({n}(x)) = {rhs};")
    lines.append(f"  kappa {len(elements)}*n")
    lines.append("}")
    return "\n".join(lines) + "\n"


# the two-element monoid {1, e} with e idempotent
MSET2 = mset_source("MSet2", ["one", "e"], [[0, 1], [1, 1]], identity=0)

SOURCES = {
    "Set": SET,
    "Pointed": POINTED,
    "Semilattice": SEMILATTICE,
    "BoundedSemilattice": BOUNDED_SEMILATTICE,
    "GF2Vector": GF2_VECTOR,
    "MSet2": MSET2,
    "Monoid": MONOID,
    "CommMonoid": COMM_MONOID,
    "Group": GROUP,
}

FINITE_KAPPA = ("Set", "Pointed", "Semilattice", "BoundedSemilattice", "GF2Vector", "MSet2")


@functools.lru_cache(maxsize=None)
def kind(name: str) -> KindSpec:
    try:
        return parse_kind(SOURCES[name])
    except KeyError:
        raise KeyError(f"no built-in kind {name!r}; known: {', '.join(SOURCES)}") from None
