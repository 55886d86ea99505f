"""Textual kinds of structure: equational signatures.

Grammar::

    kind      ::= "kind" IDENT "{" opdecl* varsdecl eqdecl* kappadecl? "}"
    opdecl    ::= "op" IDENT "/" NAT ";"
    varsdecl  ::= "vars" IDENT* ";"
    eqdecl    ::= "eq" term "=" term ";"
    kappadecl ::= "kappa" (EXPR | "infinite") [";"]
    term      ::= IDENT | IDENT "(" term ("," term)* ")"

``EXPR`` is arithmetic in ``n`` with ``+ - * ^``, parentheses and naturals.
``#`` starts a line comment.  A nullary operation is written as a bare
identifier inside terms.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import KindSyntaxError, PreconditionError


# -- terms -----------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    op: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.op
        return f"{self.op}({', '.join(str(a) for a in self.args)})"


Term = Union[Var, App]


def term_vars(t: Term, acc=None) -> list:
    """Variables of ``t`` in first-occurrence order."""
    if acc is None:
        acc = []
    if isinstance(t, Var):
        if t.name not in acc:
            acc.append(t.name)
    else:
        for a in t.args:
            term_vars(a, acc)
    return acc


def eval_term(t: Term, structure, env: dict) -> int:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise PreconditionError(f"variable {t.name!r} is unbound") from None
    return structure.apply(t.op, tuple(eval_term(a, structure, env) for a in t.args))


# -- kappa expressions -----------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "^": 3}


@dataclass(frozen=True)
class KappaExpr:
    """Arithmetic expression tree in ``n``.

    ``node`` is an int, the string ``"n"``, or ``(op, left, right)``.
    """

    node: object

    def __call__(self, n: int) -> int:
        return max(0, _eval_expr(self.node, n))

    def __str__(self):
        return _show_expr(self.node, 0)


def _eval_expr(node, n):
    if isinstance(node, int):
        return node
    if node == "n":
        return n
    op, a, b = node
    a, b = _eval_expr(a, n), _eval_expr(b, n)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    return a ** b


def _show_expr(node, ctx):
    if isinstance(node, int):
        return str(node)
    if node == "n":
        return "n"
    op, a, b = node
    p = _PREC[op]
    if op == "^":
        # right associative
        s = f"{_show_expr(a, p + 1)}^{_show_expr(b, p)}"
    else:
        s = f"{_show_expr(a, p)} {op} {_show_expr(b, p + 1)}"
    return f"({s})" if p < ctx else s


INFINITE_HINT = "infinite"


# -- kind specs ------------------------------------------------------------

@dataclass(frozen=True)
class KindSpec:
    name: str
    ops: tuple  # ((symbol, arity), ...)
    variables: tuple
    equations: tuple  # ((lhs, rhs), ...)
    kappa_hint: Optional[Union[KappaExpr, str]] = None
    _arity: dict = field(default=None, compare=False, repr=False, hash=False)
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple((s, int(a)) for s, a in self.ops))
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "equations", tuple(tuple(e) for e in self.equations))
        arity = {}
        for s, a in self.ops:
            if s in arity:
                raise PreconditionError(f"duplicate op symbol {s!r}")
            if a < 0:
                raise PreconditionError(f"negative arity for {s!r}")
            arity[s] = a
        object.__setattr__(self, "_arity", arity)
        object.__setattr__(self, "_index", {s: i for i, (s, _) in enumerate(self.ops)})
        for lhs, rhs in self.equations:
            for t in (lhs, rhs):
                self._check_term(t)

    def _check_term(self, t):
        if isinstance(t, Var):
            if t.name not in self.variables:
                raise PreconditionError(f"unbound variable {t.name!r}")
            return
        if self._arity.get(t.op) != len(t.args):
            raise PreconditionError(f"{t.op} given {len(t.args)} argument(s)")
        for a in t.args:
            self._check_term(a)

    def arity(self, op: str) -> int:
        return self._arity[op]

    def op_index(self, op: str) -> int:
        return self._index[op]

    @property
    def op_names(self):
        return tuple(self._index)

    @property
    def has_constants(self):
        return any(a == 0 for _, a in self.ops)

    def __str__(self):
        return print_kind(self)


# -- lexer -----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>#[^\n]*)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<nat>[0-9]+)|(?P<sym>[{}(),;=/+*^\-−])"
)


@dataclass
class _Tok:
    type: str  # ident, nat, sym, eof
    value: str
    line: int
    col: int


def _tokenize(src: str):
    toks = []
    pos, line, col = 0, 1, 1
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise KindSyntaxError("lexical", f"unexpected character {src[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind == "ident":
            toks.append(_Tok("ident", text, line, col))
        elif kind == "nat":
            toks.append(_Tok("nat", text, line, col))
        elif kind == "sym":
            toks.append(_Tok("sym", "-" if text == "−" else text, line, col))
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


# -- parser ----------------------------------------------------------------

class _Parser:
    def __init__(self, src):
        self.toks = _tokenize(src)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, code, msg, tok=None):
        tok = tok or self.tok
        return KindSyntaxError(code, msg, tok.line, tok.col)

    def _describe(self, tok):
        return "end of input" if tok.type == "eof" else repr(tok.value)

    def expect_sym(self, s):
        tok = self.tok
        if tok.type != "sym" or tok.value != s:
            raise self.error("syntax", f"expected {s!r}, found {self._describe(tok)}")
        self.i += 1
        return tok

    def expect_ident(self, what="identifier", keyword=None):
        tok = self.tok
        if tok.type != "ident" or (keyword is not None and tok.value != keyword):
            want = repr(keyword) if keyword else what
            raise self.error("syntax", f"expected {want}, found {self._describe(tok)}")
        self.i += 1
        return tok

    def at_keyword(self, kw):
        return self.tok.type == "ident" and self.tok.value == kw

    def at_sym(self, s):
        return self.tok.type == "sym" and self.tok.value == s

    def parse_all(self):
        kinds = []
        while self.tok.type != "eof":
            kinds.append(self.parse_kind())
        return kinds

    def parse_kind(self):
        self.expect_ident(keyword="kind")
        name = self.expect_ident("kind name").value
        self.expect_sym("{")
        ops, arity = [], {}
        while self.at_keyword("op"):
            self.i += 1
            tok = self.expect_ident("op symbol")
            if tok.value in arity:
                raise self.error("duplicate", f"op symbol {tok.value!r} declared twice", tok)
            self.expect_sym("/")
            nat = self.tok
            if nat.type != "nat":
                raise self.error("syntax", f"expected arity, found {self._describe(nat)}")
            self.i += 1
            self.expect_sym(";")
            arity[tok.value] = int(nat.value)
            ops.append((tok.value, int(nat.value)))
        self.expect_ident(keyword="vars")
        variables = []
        while self.tok.type == "ident":
            tok = self.tok
            if tok.value in variables or tok.value in arity:
                raise self.error("duplicate", f"symbol {tok.value!r} declared twice", tok)
            variables.append(tok.value)
            self.i += 1
        self.expect_sym(";")
        equations = []
        while self.at_keyword("eq"):
            self.i += 1
            lhs = self.parse_term(arity, variables)
            self.expect_sym("=")
            rhs = self.parse_term(arity, variables)
            if not self.at_sym("}"):
                self.expect_sym(";")
            equations.append((lhs, rhs))
        hint = None
        if self.at_keyword("kappa"):
            self.i += 1
            if self.at_keyword(INFINITE_HINT):
                self.i += 1
                hint = INFINITE_HINT
            else:
                hint = KappaExpr(self.parse_expr(0))
            if self.at_sym(";"):
                self.i += 1
        self.expect_sym("}")
        return KindSpec(name, tuple(ops), tuple(variables), tuple(equations), hint)

    def parse_term(self, arity, variables):
        tok = self.expect_ident("term")
        name = tok.value
        if self.at_sym("("):
            if name not in arity:
                raise self.error("unbound", f"unknown op symbol {name!r}", tok)
            self.i += 1
            args = [self.parse_term(arity, variables)]
            while self.at_sym(","):
                self.i += 1
                args.append(self.parse_term(arity, variables))
            self.expect_sym(")")
            if arity[name] != len(args):
                raise self.error(
                    "arity", f"{name} has arity {arity[name]} but is given {len(args)} argument(s)", tok
                )
            return App(name, tuple(args))
        if name in variables:
            return Var(name)
        if name in arity:
            if arity[name] != 0:
                raise self.error("arity", f"{name} has arity {arity[name]} but is given no arguments", tok)
            return App(name, ())
        raise self.error("unbound", f"unbound variable {name!r}", tok)

    def parse_expr(self, min_prec):
        left = self.parse_atom()
        while self.tok.type == "sym" and self.tok.value in _PREC and _PREC[self.tok.value] >= min_prec:
            op = self.tok.value
            p = _PREC[op]
            self.i += 1
            right = self.parse_expr(p if op == "^" else p + 1)
            left = (op, left, right)
        return left

    def parse_atom(self):
        tok = self.tok
        if tok.type == "nat":
            self.i += 1
            return int(tok.value)
        if tok.type == "ident":
            if tok.value != "n":
                raise self.error("unbound", f"kappa expressions may only mention n, found {tok.value!r}")
            self.i += 1
            return "n"
        if self.at_sym("("):
            self.i += 1
            e = self.parse_expr(0)
            self.expect_sym(")")
            return e
        raise self.error("syntax", f"expected kappa expression, found {self._describe(tok)}")


def parse_kinds(source: str) -> list:
    return _Parser(source).parse_all()


def parse_kind(source: str) -> KindSpec:
    p = _Parser(source)
    kind = p.parse_kind()
    if p.tok.type != "eof":
        raise p.error("syntax", f"unexpected {p._describe(p.tok)} after kind definition")
    return kind


def print_kind(spec: KindSpec) -> str:
    lines = [f"kind {spec.name} {{"]
    for s, a in spec.ops:
        lines.append(f"  op {s}/{a};")
    lines.append("  vars" + "".join(" " + v for v in spec.variables) + ";")
    for lhs, rhs in spec.equations:
        lines.append(f"  eq {lhs} = {rhs};")
    if spec.kappa_hint is not None:
        lines.append(f"  kappa {spec.kappa_hint}")
    lines.append("}")
    return "\n".join(lines) + "\n"
