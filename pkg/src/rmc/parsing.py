"""Concrete syntax: lexer, recursive-descent parser and printer.

Grammar (loosest to tightest)::

    sum    ::= new ('+' new)*
    new    ::= 'E' VAR* '.' new | seq
    seq    ::= post (';' (post | new))*
    post   ::= atom ('^*')*
    atom   ::= '*' | '0' | '[' value ']' LOC? | LOC? '<' value '>' | '(' sum ')'
    value  ::= VAR | sym | sym '(' value (',' value)* ')'

A New appearing after ``;`` swallows the remainder of the sequence, which
is how ``M;E X.N;P`` reads as ``M;(E X.(N;P))``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    DEFAULT_LOC,
    SKIP,
    ZERO,
    Fun,
    New,
    Pop,
    Push,
    Seq,
    Skip,
    Star,
    Sum,
    Term,
    Value,
    Var,
    Zero,
    canonicalize,
)


class ParseError(ValueError):
    def __init__(self, message: str, pos: int = 0, text: str = ""):
        self.pos = pos
        self.text = text
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")


class ArityError(ValueError):
    pass


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<starop>\^\*)
  | (?P<ident>[A-Za-z_%][A-Za-z0-9_'%]*)
  | (?P<num>[0-9]+)
  | (?P<punct>[*;+()\[\]<>,.])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            tok = m.group()
            out.append(Token(tok if kind == "punct" else kind, tok, pos))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


def is_var_name(name: str) -> bool:
    return name[:1].isupper() or name.startswith("%")


def _is_loc_name(name: str) -> bool:
    return name == DEFAULT_LOC or name[:1].islower()


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            self.fail(f"expected {kind!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def fail(self, msg: str):
        raise ParseError(msg, self.tok.pos, self.text)

    # values
    def value(self) -> Value:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Fun(t.text, ())
        if t.kind != "ident":
            self.fail(f"expected a value, found {t.text or 'end of input'!r}")
        self.advance()
        if is_var_name(t.text):
            if t.text == "E":
                raise ParseError("'E' is reserved for the binder", t.pos, self.text)
            return Var(t.text)
        if self.tok.kind == "(":
            self.advance()
            args = [self.value()]
            while self.tok.kind == ",":
                self.advance()
                args.append(self.value())
            self.expect(")")
            return Fun(t.text, tuple(args))
        return Fun(t.text, ())

    # terms
    def sum(self) -> Term:
        left = self.new()
        while self.tok.kind == "+":
            self.advance()
            left = Sum(left, self.new())
        return left

    def _at_binder(self) -> bool:
        return self.tok.kind == "ident" and self.tok.text == "E"

    def new(self) -> Term:
        if self._at_binder():
            self.advance()
            names = []
            while self.tok.kind == "ident":
                name = self.tok.text
                if not is_var_name(name) or name == "E":
                    self.fail(f"binder {name!r} is not a variable name")
                names.append(name)
                self.advance()
            self.expect(".")
            body = self.new()
            for x in reversed(names):
                body = New(x, body)
            return body
        return self.seq()

    def seq(self) -> Term:
        items = [self.post()]
        while self.tok.kind == ";":
            self.advance()
            if self._at_binder():
                items.append(self.new())
                break
            items.append(self.post())
        if len(items) == 1:
            return items[0]
        out: Term = items[-1]
        for it in reversed(items[:-1]):
            out = Seq(it, out)
        return out

    def post(self) -> Term:
        m = self.atom()
        while self.tok.kind == "starop":
            self.advance()
            m = Star(m)
        return m

    def atom(self) -> Term:
        t = self.tok
        if t.kind == "*":
            self.advance()
            return SKIP
        if t.kind == "num":
            if t.text != "0":
                self.fail(f"unexpected number {t.text!r}")
            self.advance()
            return ZERO
        if t.kind == "[":
            self.advance()
            v = self.value()
            self.expect("]")
            loc = DEFAULT_LOC
            if self.tok.kind == "ident" and _is_loc_name(self.tok.text):
                loc = self.advance().text
            return Push(v, loc)
        if t.kind == "<":
            return self._pop(DEFAULT_LOC)
        if t.kind == "ident" and _is_loc_name(t.text) and self.peek().kind == "<":
            self.advance()
            return self._pop(t.text)
        if t.kind == "(":
            self.advance()
            m = self.sum()
            self.expect(")")
            return m
        self.fail(f"unexpected token {t.text or 'end of input'!r}")

    def _pop(self, loc: str) -> Term:
        self.expect("<")
        v = self.value()
        self.expect(">")
        return Pop(loc, v)


def check_arities(m: Term) -> None:
    seen: dict[str, int] = {}
    for s in _iter_values(m):
        _check_value_arity(s, seen)


def _iter_values(m: Term):
    match m:
        case Push(v, _) | Pop(_, v):
            yield v
        case Seq(h, t) | Sum(h, t):
            yield from _iter_values(h)
            yield from _iter_values(t)
        case Star(b) | New(_, b):
            yield from _iter_values(b)


def _check_value_arity(v: Value, seen: dict[str, int]) -> None:
    if isinstance(v, Fun):
        n = seen.setdefault(v.symbol, len(v.args))
        if n != len(v.args):
            raise ArityError(f"symbol {v.symbol!r} used with arities {n} and {len(v.args)}")
        for a in v.args:
            _check_value_arity(a, seen)


def parse_term(text: str, canonical: bool = True) -> Term:
    p = _Parser(text)
    if p.tok.kind == "eof":
        p.fail("empty term")
    m = p.sum()
    if p.tok.kind != "eof":
        p.fail(f"unexpected token {p.tok.text!r}")
    check_arities(m)
    return canonicalize(m) if canonical else m


def parse_value(text: str) -> Value:
    p = _Parser(text)
    v = p.value()
    if p.tok.kind != "eof":
        p.fail(f"unexpected token {p.tok.text!r}")
    _check_value_arity(v, {})
    return v


def parse_values(text: str) -> list[Value]:
    """A comma-separated list of values, optionally wrapped in brackets or parens."""
    body = text.strip()
    if body[:1] in "[(" and body[-1:] in "])":
        body = body[1:-1]
    if not body.strip():
        return []
    p = _Parser(body)
    out = [p.value()]
    while p.tok.kind == ",":
        p.advance()
        out.append(p.value())
    if p.tok.kind != "eof":
        p.fail(f"unexpected token {p.tok.text!r}")
    return out


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

_SUM, _NEW, _SEQ, _POST = range(4)


def print_value(v: Value) -> str:
    return str(v)


def print_term(m: Term) -> str:
    return _pr(m, _SUM)


def _paren(s: str, need: bool) -> str:
    return f"({s})" if need else s


def _pr(m: Term, ctx: int) -> str:
    match m:
        case Skip():
            return "*"
        case Zero():
            return "0"
        case Push(v, loc):
            return f"[{v}]" + ("" if loc == DEFAULT_LOC else loc)
        case Pop(loc, v):
            return ("" if loc == DEFAULT_LOC else loc) + f"<{v}>"
        case Star(b):
            return _pr(b, _POST + 1) + "^*" if not isinstance(b, (Seq, Sum, New)) else f"({_pr(b, _SUM)})^*"
        case Sum(l, r):
            s = f"{_pr(l, _SUM)} + {_pr(r, _NEW)}"
            return _paren(s, ctx > _SUM)
        case New():
            names = []
            while isinstance(m, New):
                names.append(m.var)
                m = m.body
            s = f"E {' '.join(names)}.{_pr(m, _NEW)}"
            return _paren(s, ctx > _NEW)
        case Seq():
            leaves: list = []
            _flatten(m, leaves)
            if isinstance(leaves[-1], Skip) and len(leaves) > 2:
                leaves.pop()
            parts = [_pr(it, _POST) for it in leaves[:-1]]
            last = leaves[-1]
            parts.append(_pr(last, _NEW if isinstance(last, New) else _POST))
            return _paren(";".join(parts), ctx > _SEQ)
    raise TypeError(f"not a term: {m!r}")


def _flatten(m: Term, out: list) -> None:
    if isinstance(m, Seq):
        _flatten(m.head, out)
        _flatten(m.tail, out)
    else:
        out.append(m)
