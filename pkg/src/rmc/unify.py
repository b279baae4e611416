"""Martelli–Montanari unification, kept independent of the machine, and equation encodings."""

from __future__ import annotations

from collections.abc import Iterable, Sequence

from .syntax import (
    DEFAULT_LOC,
    Fun,
    Pop,
    Push,
    Subst,
    Term,
    Value,
    Var,
    seq,
    value_vars,
)

Equation = tuple  # (lhs: Value, rhs: Value)


class NoUnifier(Exception):
    """Raised internally; ``mgu`` returns None instead."""


def _occurs(x: str, v: Value) -> bool:
    if isinstance(v, Var):
        return v.name == x
    return any(_occurs(x, a) for a in v.args)


def _walk_subst(bindings: dict, v: Value) -> Value:
    if isinstance(v, Var):
        return bindings.get(v.name, v)
    if not v.args:
        return v
    return Fun(v.symbol, tuple(_walk_subst(bindings, a) for a in v.args))


def mgu(equations: Iterable[Equation]) -> Subst | None:
    """Most general unifier of the equations, or None if there is none.

    The rules (delete, decompose, clash, orient, occurs check, eliminate)
    are applied to the leftmost pending equation, so the output is fully
    deterministic.
    """
    todo = list(equations)
    solved: dict[str, Value] = {}
    while todo:
        s, t = todo.pop(0)
        if isinstance(s, Var) and isinstance(t, Var) and s.name == t.name:
            continue
        if isinstance(s, Fun) and isinstance(t, Fun):
            if s.symbol != t.symbol or len(s.args) != len(t.args):
                return None
            todo[0:0] = list(zip(s.args, t.args))
            continue
        if not isinstance(s, Var):
            s, t = t, s
        x = s.name
        if _occurs(x, t):
            return None
        elim = {x: t}
        todo = [(_walk_subst(elim, a), _walk_subst(elim, b)) for a, b in todo]
        solved = {k: _walk_subst(elim, v) for k, v in solved.items()}
        solved[x] = t
    return Subst(solved)


def is_unifier(s: Subst, equations: Iterable[Equation]) -> bool:
    return all(s.value(a) == s.value(b) for a, b in equations)


def is_idempotent(s: Subst) -> bool:
    return all(s.value(v) == v for v in s.values())


def equation_vars(equations: Iterable[Equation]) -> set[str]:
    out: set[str] = set()
    for a, b in equations:
        out |= value_vars(a) | value_vars(b)
    return out


def is_variant(xs: Sequence[Value], ys: Sequence[Value]) -> bool:
    """True if the tuples are equal up to a bijective renaming of variables."""
    fwd: dict[str, str] = {}
    bwd: dict[str, str] = {}

    def go(a: Value, b: Value) -> bool:
        if isinstance(a, Var) and isinstance(b, Var):
            if fwd.setdefault(a.name, b.name) != b.name:
                return False
            return bwd.setdefault(b.name, a.name) == a.name
        if isinstance(a, Fun) and isinstance(b, Fun):
            return (
                a.symbol == b.symbol
                and len(a.args) == len(b.args)
                and all(go(x, y) for x, y in zip(a.args, b.args))
            )
        return False

    return len(xs) == len(ys) and all(go(a, b) for a, b in zip(xs, ys))


def equal_up_to_renaming(s: Subst | None, t: Subst | None, names: Iterable[str]) -> bool:
    """Two unifiers agree on ``names`` up to renaming (both None also counts)."""
    if s is None or t is None:
        return s is None and t is None
    order = sorted(set(names) | set(s) | set(t))
    return is_variant([s.value(Var(x)) for x in order], [t.value(Var(x)) for x in order])


def encode_equations(equations: Sequence[Equation], loc: str = DEFAULT_LOC) -> Term:
    """``[s_n];...;[s_1];<t_1>;...;<t_n>`` on location ``loc``."""
    pushes = [Push(s, loc) for s, _ in reversed(equations)]
    pops = [Pop(loc, t) for _, t in equations]
    if not pushes:
        return seq()
    return seq(*pushes, *pops)


def parse_equations(text: str) -> list[Equation]:
    """One ``s = t`` per line; blank lines and ``#`` comments are ignored."""
    from .parsing import ParseError, parse_value

    out = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        lhs, sep, rhs = line.partition("=")
        if not sep:
            raise ParseError(f"line {n}: expected 's = t'", 0, line)
        out.append((parse_value(lhs.strip()), parse_value(rhs.strip())))
    return out
