"""Guarded commands over mutable cells.

Each cell is a location holding exactly one value. Expressions leave their
result on the default stack: booleans are ``tt``/``ff`` and naturals are
Peano numerals ``s(...s(z))``. Besides literals and dereference ``!a``,
two operators are provided as small counting loops: ``N + M`` and
``N >= M``.

A loop ``do C od`` compiles to ``C^*``, which may stop at any iteration.
With ``strict_loops`` the star is followed by a check that every guard is
false, so that only terminated runs survive.

Source syntax::

    stmt   ::= simple (';' simple)*
    simple ::= skip | abort | LOC ':=' expr | if guards fi | do guards od | '(' stmt ')'
    guards ::= expr '->' stmt ('[]' expr '->' stmt)*
    expr   ::= sum ('>=' sum)?
    sum    ::= atom ('+' atom)*
    atom   ::= tt | ff | INT | '!' LOC | '(' expr ')'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from ..machine import Budget, explore
from ..memory import Memory
from ..parsing import parse_term
from ..syntax import DEFAULT_LOC, SKIP, ZERO, Fun, New, Pop, Push, Star, Term, Value, Var, canonicalize, seq, sum_of

TT, FF = Fun("tt", ()), Fun("ff", ())


# -- syntax ------------------------------------------------------------------


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class Deref:
    cell: str


@dataclass(frozen=True)
class Plus:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Geq:
    left: "Expr"
    right: "Expr"


Expr = Union[BoolLit, IntLit, Deref, Plus, Geq]


@dataclass(frozen=True)
class SkipS:
    pass


@dataclass(frozen=True)
class Abort:
    pass


@dataclass(frozen=True)
class SeqS:
    first: "Stmt"
    second: "Stmt"


@dataclass(frozen=True)
class Assign:
    cell: str
    expr: Expr


@dataclass(frozen=True)
class If:
    guards: tuple  # of (Expr, Stmt)


@dataclass(frozen=True)
class Do:
    guards: tuple


Stmt = Union[SkipS, Abort, SeqS, Assign, If, Do]

_TOK = re.compile(r"\s+|(:=|->|>=|\[\]|[A-Za-z_][A-Za-z0-9_]*|[0-9]+|[!;+()])")


def _tokens(text: str) -> list[str]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOK.match(text, pos)
        if not m:
            raise ValueError(f"unexpected character {text[pos]!r} at offset {pos}")
        if m.group(1):
            out.append(m.group(1))
        pos = m.end()
    return out


_KEYWORDS = {"skip", "abort", "if", "fi", "do", "od", "tt", "ff"}


class _P:
    def __init__(self, text: str):
        self.t = _tokens(text)
        self.i = 0

    def peek(self):
        return self.t[self.i] if self.i < len(self.t) else None

    def take(self, want=None):
        tok = self.peek()
        if tok is None or (want is not None and tok != want):
            raise ValueError(f"expected {want or 'more input'}, found {tok!r}")
        self.i += 1
        return tok

    def cell(self) -> str:
        tok = self.take()
        if not tok[0].islower() or tok in _KEYWORDS:
            raise ValueError(f"{tok!r} is not a cell name")
        return tok

    def stmt(self) -> Stmt:
        s = self.simple()
        while self.peek() == ";":
            self.take()
            s = SeqS(s, self.simple())
        return s

    def simple(self) -> Stmt:
        tok = self.peek()
        if tok == "skip":
            self.take()
            return SkipS()
        if tok == "abort":
            self.take()
            return Abort()
        if tok in ("if", "do"):
            self.take()
            g = self.guards()
            self.take("fi" if tok == "if" else "od")
            return If(g) if tok == "if" else Do(g)
        if tok == "(":
            self.take()
            s = self.stmt()
            self.take(")")
            return s
        c = self.cell()
        self.take(":=")
        return Assign(c, self.expr())

    def guards(self) -> tuple:
        out = [self.guard()]
        while self.peek() == "[]":
            self.take()
            out.append(self.guard())
        return tuple(out)

    def guard(self):
        b = self.expr()
        self.take("->")
        return (b, self.stmt())

    def expr(self) -> Expr:
        e = self.sum()
        if self.peek() == ">=":
            self.take()
            e = Geq(e, self.sum())
        return e

    def sum(self) -> Expr:
        e = self.atom()
        while self.peek() == "+":
            self.take()
            e = Plus(e, self.atom())
        return e

    def atom(self) -> Expr:
        tok = self.take()
        if tok == "tt":
            return BoolLit(True)
        if tok == "ff":
            return BoolLit(False)
        if tok.isdigit():
            return IntLit(int(tok))
        if tok == "!":
            return Deref(self.cell())
        if tok == "(":
            e = self.expr()
            self.take(")")
            return e
        raise ValueError(f"unexpected {tok!r} in expression")


def parse_gcl(text: str) -> Stmt:
    p = _P(text)
    s = p.stmt()
    if p.peek() is not None:
        raise ValueError(f"trailing input at {p.peek()!r}")
    return s


# -- values ------------------------------------------------------------------


def nat(n: int) -> Value:
    v: Value = Fun("z", ())
    for _ in range(n):
        v = Fun("s", (v,))
    return v


def to_value(x: bool | int) -> Value:
    if isinstance(x, bool):
        return TT if x else FF
    if x < 0:
        raise ValueError("cells hold naturals or booleans")
    return nat(x)


def from_value(v: Value) -> bool | int:
    if v == TT:
        return True
    if v == FF:
        return False
    n = 0
    while isinstance(v, Fun) and v.symbol == "s":
        v, n = v.args[0], n + 1
    if v != Fun("z", ()):
        raise ValueError(f"{v} is not a cell value")
    return n


def cells_to_memory(cells: dict) -> Memory:
    return Memory({c: [to_value(x)] for c, x in cells.items()})


def memory_to_cells(mem: Memory) -> dict | None:
    """Cell contents, or None if some location does not hold a single value."""
    out = {}
    for loc, stack in mem.items_sorted():
        if loc == DEFAULT_LOC or len(stack) != 1:
            return None
        out[loc] = from_value(stack[0])
    return out


# -- encoding ----------------------------------------------------------------

_ADD = parse_term("(E X Y.<s(Y)>;<X>;[s(X)];[Y])^*;E X.<z>;<X>;[X]")
_GEQ = parse_term("(E X Y.<s(Y)>;<s(X)>;[X];[Y])^*;(E X.<z>;<X>;[tt] + E Y.<s(Y)>;<z>;[ff])")


def encode_expr(e: Expr) -> Term:
    match e:
        case BoolLit(b):
            return Push(TT if b else FF)
        case IntLit(n):
            return Push(nat(n))
        case Deref(a):
            x = Var("X")
            return New("X", seq(Pop(a, x), Push(x, a), Push(x)))
        case Plus(l, r):
            return seq(encode_expr(l), encode_expr(r), _ADD)
        case Geq(l, r):
            return seq(encode_expr(l), encode_expr(r), _GEQ)
    raise TypeError(e)


def _all_false(guards) -> Term:
    return seq(*(seq(encode_expr(b), Pop(DEFAULT_LOC, FF)) for b, _ in guards))


def encode_gcl(s: Stmt, strict_loops: bool = False) -> Term:
    def go(s: Stmt) -> Term:
        match s:
            case SkipS():
                return SKIP
            case Abort():
                return ZERO
            case SeqS(a, b):
                return seq(go(a), go(b))
            case Assign(a, e):
                x, y = Var("X"), Var("Y")
                return seq(encode_expr(e), New("X", New("Y", seq(Pop(a, x), Pop(DEFAULT_LOC, y), Push(y, a)))))
            case If(gs):
                return guards(gs)
            case Do(gs):
                loop = Star(guards(gs))
                return seq(loop, _all_false(gs)) if strict_loops else loop
        raise TypeError(s)

    def guards(gs) -> Term:
        return sum_of([seq(encode_expr(b), Pop(DEFAULT_LOC, TT), go(body)) for b, body in gs])

    return canonicalize(go(s))


_SEARCH = Budget(max_steps_per_path=50_000, max_solutions=10_000, max_states=500_000)


def run_machine(s: Stmt, cells: dict, strict_loops: bool = True, budget: Budget = _SEARCH) -> set[frozenset]:
    res = explore(cells_to_memory(cells), encode_gcl(s, strict_loops), budget, dedup=True)
    out = set()
    for mem, _ in res:
        c = memory_to_cells(mem)
        if c is not None:
            out.add(frozenset(c.items()))
    return out


# -- reference interpreter ---------------------------------------------------


def eval_expr(e: Expr, env: dict):
    match e:
        case BoolLit(b):
            return b
        case IntLit(n):
            return n
        case Deref(a):
            return env[a]
        case Plus(l, r):
            return eval_expr(l, env) + eval_expr(r, env)
        case Geq(l, r):
            return eval_expr(l, env) >= eval_expr(r, env)
    raise TypeError(e)


def execute(s: Stmt, cells: dict, fuel: int = 1000) -> set[frozenset]:
    """All final cell assignments of the nondeterministic program."""

    def go(s: Stmt, env: frozenset, fuel: int) -> set[frozenset]:
        d = dict(env)
        match s:
            case SkipS():
                return {env}
            case Abort():
                return set()
            case SeqS(a, b):
                out = set()
                for mid in go(a, env, fuel):
                    out |= go(b, mid, fuel)
                return out
            case Assign(a, e):
                if a not in d:
                    return set()
                nd = dict(d)
                nd[a] = eval_expr(e, d)
                return {frozenset(nd.items())}
            case If(gs):
                out = set()
                for b, body in gs:
                    if eval_expr(b, d) is True:
                        out |= go(body, env, fuel)
                return out
            case Do(gs):
                live = [body for b, body in gs if eval_expr(b, d) is True]
                if not live:
                    return {env}
                if fuel <= 0:
                    raise RuntimeError("loop did not terminate within fuel")
                out = set()
                for body in live:
                    for mid in go(body, env, fuel):
                        out |= go(s, mid, fuel - 1)
                return out
        raise TypeError(s)

    return go(s, frozenset(cells.items()), fuel)


MAX_PROGRAM = "if !a >= !b -> c := !a [] !b >= !a -> c := !b fi"
