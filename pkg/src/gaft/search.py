"""Finite model search, canonical forms and homomorphism enumeration.

Structures of a given size are found by filling operation tables cell by
cell.  Equation instances are evaluated on the partial tables: an instance
that is blocked on an undefined cell is parked on that cell's watch list, and
an instance whose one side is known while the other is blocked at its
outermost cell forces that cell.  Value choices follow the least-number
heuristic: at a choice point only one element never mentioned so far is
tried, since all unmentioned elements are interchangeable.

Isomorphism classes are separated by a canonical form: the lexicographically
least table serialization over all relabelings compatible with an
isomorphism-invariant coloring of the elements.
"""
from __future__ import annotations

import functools
import itertools
import math
from typing import Iterator, Optional

import numpy as np

from .dsl import KindSpec, Var, term_vars
from .errors import PreconditionError, ResourceError
from .structures import Hom, Structure, identity_hom, make_hom

DEFAULT_ENUMERATION_BUDGET = 8
_MAX_CANON_PERMS = 400_000

_VAR = -1


def _compile(term, names, opi):
    if isinstance(term, Var):
        return (_VAR, names.index(term.name))
    return (opi[term.op], tuple(_compile(a, names, opi) for a in term.args))


class _ModelSearch:
    def __init__(self, kind: KindSpec, n: int):
        self.kind = kind
        self.n = n
        opi = {op: i for i, (op, _) in enumerate(kind.ops)}
        self.base = []
        cells = []
        off = 0
        for i, (op, k) in enumerate(kind.ops):
            self.base.append(off)
            for args in itertools.product(range(n), repeat=k):
                cells.append((i, args))
            off += n**k
        self.ncells = off
        self.cells = cells
        self.val = [-1] * off
        self.watch = [[] for _ in range(off)]
        self.trail = []
        self.queue = []
        self.mx = -1
        self.instances = []
        for lhs, rhs in kind.equations:
            names = term_vars(lhs)
            for v in term_vars(rhs):
                if v not in names:
                    names.append(v)
            lc, rc = _compile(lhs, names, opi), _compile(rhs, names, opi)
            for env in itertools.product(range(n), repeat=len(names)):
                self.instances.append((lc, rc, env))
        # cells whose arguments are small come first
        self.order = sorted(range(off), key=lambda c: (max(cells[c][1], default=-1), cells[c][0], cells[c][1]))

    # evaluation on partial tables: value >= 0, or -(cell + 1) when blocked
    def _inner(self, code, env):
        if code[0] == _VAR:
            return env[code[1]]
        n = self.n
        idx = 0
        for s in code[1]:
            v = self._inner(s, env)
            if v < 0:
                return v
            idx = idx * n + v
        cell = self.base[code[0]] + idx
        v = self.val[cell]
        return v if v >= 0 else -(cell + 1)

    def _side(self, code, env):
        """Return ``(value, blocked_cell, direct)``."""
        if code[0] == _VAR:
            return env[code[1]], -1, False
        n = self.n
        idx = 0
        for s in code[1]:
            v = self._inner(s, env)
            if v < 0:
                return None, -v - 1, False
            idx = idx * n + v
        cell = self.base[code[0]] + idx
        v = self.val[cell]
        if v >= 0:
            return v, -1, False
        return None, cell, True

    def _check(self, inst):
        lc, rc, env = inst
        lv, lcell, ld = self._side(lc, env)
        rv, rcell, rd = self._side(rc, env)
        if lv is not None and rv is not None:
            return lv == rv
        if lv is not None:
            if rd:
                self.queue.append((rcell, lv))
                return True
            self._watch(rcell, inst)
            return True
        if rv is not None:
            if ld:
                self.queue.append((lcell, rv))
                return True
            self._watch(lcell, inst)
            return True
        if ld and rd and lcell == rcell:
            return True
        self._watch(lcell, inst)
        if rcell != lcell:
            self._watch(rcell, inst)
        return True

    def _watch(self, cell, inst):
        self.watch[cell].append(inst)
        self.trail.append(~cell)

    def _propagate(self):
        val, queue = self.val, self.queue
        while queue:
            cell, v = queue.pop()
            cur = val[cell]
            if cur >= 0:
                if cur != v:
                    queue.clear()
                    return False
                continue
            val[cell] = v
            self.trail.append(cell)
            args = self.cells[cell][1]
            m = max(max(args, default=-1), v)
            if m > self.mx:
                self.mx = m
            for inst in self.watch[cell]:
                if not self._check(inst):
                    queue.clear()
                    return False
        return True

    def _undo(self, mark):
        trail, val, watch = self.trail, self.val, self.watch
        while len(trail) > mark:
            x = trail.pop()
            if x >= 0:
                val[x] = -1
            else:
                watch[~x].pop()

    def run(self) -> Iterator[tuple]:
        if self.n == 0:
            if not self.kind.has_constants:
                yield tuple(() for _ in self.kind.ops)
            return
        for inst in self.instances:
            if not self._check(inst):
                return
        if not self._propagate():
            return
        self.seen = [set() for _ in range(self.n + 1)]
        yield from self._search(0, 0)

    def _search(self, pos, level):
        order, val = self.order, self.val
        while pos < len(order) and val[order[pos]] >= 0:
            pos += 1
        if pos == len(order):
            yield self._tables()
            return
        cell = order[pos]
        block = max(self.cells[cell][1], default=-1)
        if block > level:
            # every cell over the prefix {0..block-1} is filled
            key = self._prefix_key(block)
            if key in self.seen[block]:
                return
            self.seen[block].add(key)
            level = block
        top = max(self.mx, block) + 1
        saved_mx = self.mx
        for v in range(min(self.n, top + 1)):
            mark = len(self.trail)
            self.queue.append((cell, v))
            if self._propagate():
                yield from self._search(pos + 1, level)
            self._undo(mark)
            self.mx = saved_mx

    def _prefix_key(self, p):
        """Canonical form of the tables restricted to argument tuples over
        ``{0..p-1}``, under relabelings that keep the prefix in place as a set."""
        n = self.n
        Q = _split_perms(n, p)  # Q[row, new] = old
        P = _inverse_rows(Q)
        val = np.asarray(self.val, dtype=np.int64)
        cols = []
        for i, (op, k) in enumerate(self.kind.ops):
            b = self.base[i]
            if k == 0:
                v = val[b]
                cols.append(P[:, v][:, None] if v >= 0 else np.full((Q.shape[0], 1), -1))
                continue
            grid = _arg_grid(p, k)
            old = Q[:, grid]
            flat = np.zeros(old.shape[:2], dtype=np.int64)
            for j in range(k):
                flat = flat * n + old[:, :, j]
            cols.append(np.take_along_axis(P, val[b + flat], axis=1))
        M = np.concatenate(cols, axis=1)
        return _lexmin_row(M).tobytes()

    def _tables(self):
        out = []
        for i, (op, k) in enumerate(self.kind.ops):
            b = self.base[i]
            out.append(tuple(self.val[b:b + self.n**k]))
        return tuple(out)


@functools.lru_cache(maxsize=None)
def _split_perms(n: int, p: int) -> np.ndarray:
    return _block_perms((p, n - p) if p < n else (n,))


def _inverse_rows(Q: np.ndarray) -> np.ndarray:
    P = np.empty_like(Q)
    np.put_along_axis(P, Q, np.broadcast_to(np.arange(Q.shape[1]), Q.shape), axis=1)
    return P


def _lexmin_row(M: np.ndarray) -> np.ndarray:
    rows = np.arange(M.shape[0])
    for c in range(M.shape[1]):
        if len(rows) == 1:
            break
        col = M[rows, c]
        rows = rows[col == col.min()]
    return M[rows[0]]


def raw_models(kind: KindSpec, n: int) -> Iterator[Structure]:
    """Law-satisfying structures of size ``n`` surviving symmetry breaking.

    Every isomorphism class of size ``n`` is represented at least once.
    """
    for tables in _ModelSearch(kind, n).run():
        yield Structure(kind, n, tables)


# -- canonical forms -------------------------------------------------------

def invariant_coloring(s: Structure) -> list:
    """Isomorphism-invariant coloring, refined to a fixed point."""
    n = s.size
    colors = [0] * n
    entries = list(s.op_entries())
    ncolors = 1
    while True:
        sig = [[colors[x]] for x in range(n)]
        for op, args, r in entries:
            cargs = tuple(colors[a] for a in args)
            for p, a in enumerate(args):
                sig[a].append((op, p, cargs, colors[r]))
            sig[r].append((op, -1, cargs, -1))
        keys = [(k[0], tuple(sorted(k[1:]))) for k in sig]
        ranked = sorted(set(keys))
        lookup = {k: i for i, k in enumerate(ranked)}
        new = [lookup[k] for k in keys]
        if len(ranked) == ncolors:
            return new
        colors, ncolors = new, len(ranked)


@functools.lru_cache(maxsize=None)
def _block_perms(block_sizes: tuple) -> np.ndarray:
    """All position assignments that permute within consecutive blocks."""
    parts = []
    start = 0
    for b in block_sizes:
        parts.append(list(itertools.permutations(range(start, start + b))))
        start += b
    rows = [sum(choice, ()) for choice in itertools.product(*parts)]
    return np.array(rows, dtype=np.int64).reshape(len(rows), start)


@functools.lru_cache(maxsize=None)
def _arg_grid(n: int, k: int) -> np.ndarray:
    return np.array(list(itertools.product(range(n), repeat=k)), dtype=np.int64).reshape(n**k, k)


def canonical_form(s: Structure):
    """Return ``(key, perm)``: a canonical serialization and a relabeling
    ``perm`` (old index -> new index) with ``s.relabel(perm)`` canonical."""
    n = s.size
    if n == 0:
        return (0, s.tables), ()
    colors = invariant_coloring(s)
    by_color = sorted(range(n), key=lambda x: colors[x])
    block_sizes = tuple(len(list(g)) for _, g in itertools.groupby(by_color, key=lambda x: colors[x]))
    count = math.prod(math.factorial(b) for b in block_sizes)
    if count > _MAX_CANON_PERMS:
        raise ResourceError(f"canonical form needs {count} relabelings", bound=_MAX_CANON_PERMS)
    # Q[row, new] = old
    Q = np.asarray(by_color, dtype=np.int64)[_block_perms(block_sizes)]
    m = Q.shape[0]
    P = np.empty_like(Q)
    np.put_along_axis(P, Q, np.broadcast_to(np.arange(n), Q.shape), axis=1)
    cols = []
    for (op, k), t in zip(s.kind.ops, s.tables):
        t = np.asarray(t, dtype=np.int64)
        if k == 0:
            cols.append(P[:, t[0]][:, None])
            continue
        grid = _arg_grid(n, k)
        old = Q[:, grid]  # (m, n^k, k)
        flat = np.zeros((m, n**k), dtype=np.int64)
        for i in range(k):
            flat = flat * n + old[:, :, i]
        cols.append(np.take_along_axis(P, t[flat], axis=1))
    M = np.concatenate(cols, axis=1) if cols else np.zeros((m, 0), dtype=np.int64)
    rows = np.arange(m)
    for c in range(M.shape[1]):
        if len(rows) == 1:
            break
        col = M[rows, c]
        rows = rows[col == col.min()]
    best = rows[0]
    return (n, tuple(int(v) for v in M[best])), tuple(int(v) for v in P[best])


def canonical(s: Structure) -> Structure:
    _, perm = canonical_form(s)
    return s.relabel(perm) if s.size else s


@functools.lru_cache(maxsize=None)
def _classes_of_size(kind: KindSpec, n: int) -> tuple:
    seen = {}
    for s in raw_models(kind, n):
        key, perm = canonical_form(s)
        if key not in seen:
            seen[key] = s.relabel(perm) if n else s
    return tuple(seen[k] for k in sorted(seen))


def enumerate_structures(kind: KindSpec, max_card: int, budget: int = DEFAULT_ENUMERATION_BUDGET) -> list:
    """One canonical representative per isomorphism class, sizes ``0..max_card``."""
    if max_card > budget:
        raise ResourceError(
            f"enumeration up to carrier size {max_card} exceeds the budget of {budget}", bound=budget
        )
    out = []
    for n in range(max_card + 1):
        out.extend(_classes_of_size(kind, n))
    return out


def structures_of_size(kind: KindSpec, n: int) -> list:
    return list(_classes_of_size(kind, n))


# -- homomorphisms ---------------------------------------------------------

def _same(k1, k2):
    return k1 is k2 or k1 == k2


def _hom_search(a: Structure, b: Structure, injective=False, fixed=None):
    if not _same(a.kind, b.kind):
        raise PreconditionError("structures are of different kinds")
    n, m = a.size, b.size
    by_elem = [[] for _ in range(n)]
    consts = []
    for i, (op, k) in enumerate(a.kind.ops):
        t = a.tables[i]
        if k == 0:
            consts.append((t[0], b.tables[i][0]))
            continue
        for idx, args in enumerate(itertools.product(range(n), repeat=k)):
            entry = (i, args, t[idx])
            for x in set(args):
                by_elem[x].append(entry)
    btabs = b.tables
    h = [-1] * n
    used = [False] * m
    trail = []

    def assign(pairs):
        stack = list(pairs)
        while stack:
            x, v = stack.pop()
            if h[x] >= 0:
                if h[x] != v:
                    return False
                continue
            if injective and used[v]:
                return False
            h[x] = v
            used[v] = True
            trail.append(x)
            for i, args, r in by_elem[x]:
                idx = 0
                for y in args:
                    hy = h[y]
                    if hy < 0:
                        break
                    idx = idx * m + hy
                else:
                    w = btabs[i][idx]
                    if h[r] >= 0:
                        if h[r] != w:
                            return False
                    else:
                        stack.append((r, w))
        return True

    def undo(mark):
        while len(trail) > mark:
            x = trail.pop()
            used[h[x]] = False
            h[x] = -1

    def rec(x):
        while x < n and h[x] >= 0:
            x += 1
        if x == n:
            yield tuple(h)
            return
        for v in range(m):
            if injective and used[v]:
                continue
            mark = len(trail)
            if assign([(x, v)]):
                yield from rec(x + 1)
            undo(mark)

    start = list(consts) + list((fixed or {}).items())
    if not assign(start):
        return
    yield from rec(0)


def enumerate_homs(kind: KindSpec, a: Structure, b: Structure) -> list:
    """All homomorphisms ``a -> b`` in lexicographic order of their tables."""
    if not (_same(a.kind, kind) and _same(b.kind, kind)):
        raise PreconditionError("structures are not of the given kind")
    return [make_hom(a, b, t) for t in sorted(_hom_search(a, b))]


def count_homs(a: Structure, b: Structure) -> int:
    return sum(1 for _ in _hom_search(a, b))


def homs_extending(a: Structure, b: Structure, fixed: dict) -> list:
    """Homomorphisms ``a -> b`` agreeing with the partial assignment ``fixed``."""
    return [make_hom(a, b, t) for t in sorted(_hom_search(a, b, fixed=fixed))]


def is_isomorphic(kind: KindSpec, a: Structure, b: Structure) -> Optional[Hom]:
    """An isomorphism ``a -> b`` whose inverse is checked to be a hom, or None."""
    if not (_same(a.kind, kind) and _same(b.kind, kind)):
        raise PreconditionError("structures are not of the given kind")
    if a.size != b.size:
        return None
    if a == b:
        return identity_hom(a)
    for t in _hom_search(a, b, injective=True):
        inv = [0] * len(t)
        for i, v in enumerate(t):
            inv[v] = i
        if next(_hom_search(b, a, fixed=dict(enumerate(inv))), None) is not None:
            return make_hom(a, b, t)
    return None
