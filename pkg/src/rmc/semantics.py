"""Bounded relational semantics over closed values, and diagrammatic term builders."""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .machine import Budget, Verdict, big_eval
from .memory import Memory
from .syntax import (
    DEFAULT_LOC,
    SKIP,
    Fun,
    New,
    Pop,
    Push,
    Seq,
    Skip,
    Star,
    Subst,
    Sum,
    Term,
    Value,
    Var,
    Zero,
    canonicalize,
    fresh_name,
    seq,
    term_symbols,
    term_values,
    value_height,
    value_vars,
)


class UnboundVariable(ValueError):
    pass


@dataclass(frozen=True)
class DenotationBounds:
    term_depth: int = 3
    star_unfold: int = 3

    def __post_init__(self):
        if self.term_depth <= 0 or self.star_unfold <= 0:
            raise ValueError("bounds must be positive")


def normalize_signature(signature) -> list[tuple[str, int]]:
    if isinstance(signature, dict):
        return list(signature.items())
    return [tuple(x) for x in signature]


def enum_closed_terms(signature, depth: int) -> list[Value]:
    """All closed values of height at most ``depth``, by height then signature order."""
    sig = normalize_signature(signature)
    if not any(n == 0 for _, n in sig):
        return []
    out: list[Value] = []
    layers: list[list[Value]] = []
    for h in range(1, depth + 1):
        below = out[:]
        prev = layers[-1] if layers else []
        layer: list[Value] = []
        for sym, n in sig:
            if n == 0:
                if h == 1:
                    layer.append(Fun(sym, ()))
                continue
            if h == 1:
                continue
            prev_set = set(prev)
            for args in itertools.product(below, repeat=n):
                if any(a in prev_set for a in args):
                    layer.append(Fun(sym, args))
        layers.append(layer)
        out.extend(layer)
    return out


# ---------------------------------------------------------------------------
# Denotation
# ---------------------------------------------------------------------------


class _Denote:
    def __init__(self, universe: list[Value], star_unfold: int):
        self.universe = universe
        self.star_unfold = star_unfold

    def value(self, v: Value, val: dict) -> Value:
        if isinstance(v, Var):
            if v.name not in val:
                raise UnboundVariable(f"variable {v.name} has no value")
            return val[v.name]
        if not v.args:
            return v
        return Fun(v.symbol, tuple(self.value(a, val) for a in v.args))

    def run(self, m: Term, val: dict, stack: tuple) -> set:
        match m:
            case Skip():
                return {stack}
            case Zero():
                return set()
            case Push(v, _):
                return {stack + (self.value(v, val),)}
            case Pop(_, v):
                if stack and stack[-1] == self.value(v, val):
                    return {stack[:-1]}
                return set()
            case Seq(h, t):
                out = set()
                for mid in self.run(h, val, stack):
                    out |= self.run(t, val, mid)
                return out
            case Sum(l, r):
                return self.run(l, val, stack) | self.run(r, val, stack)
            case New(x, b):
                out = set()
                for t in self.universe:
                    out |= self.run(b, {**val, x: t}, stack)
                return out
            case Star(b):
                out = {stack}
                level = {stack}
                for _ in range(self.star_unfold):
                    nxt = set()
                    for s in level:
                        nxt |= self.run(b, val, s)
                    level = nxt - out
                    out |= nxt
                    if not level:
                        break
                return out
        raise TypeError(f"not a term: {m!r}")


def witness_depth(m: Term, height: int) -> int:
    """Universe height large enough that outputs of height <= ``height`` are all found."""
    return height + sum(value_height(v) for v in term_values(m))


def denote(
    m: Term,
    valuation: dict | None,
    inputs: Sequence[Value],
    bounds: DenotationBounds,
    signature=None,
    out_height: int | None = None,
) -> set[tuple]:
    """Output stacks related to ``inputs`` on the default location.

    New ranges over closed values up to ``bounds.term_depth``; star over
    at most ``bounds.star_unfold`` iterations. With ``out_height`` set,
    only outputs whose values all have at most that height are kept.
    """
    sig = signature if signature is not None else term_symbols(m)
    universe = enum_closed_terms(sig, bounds.term_depth)
    d = _Denote(universe, bounds.star_unfold)
    out = d.run(m, dict(valuation or {}), tuple(inputs))
    if out_height is not None:
        out = {o for o in out if all(value_height(v) <= out_height for v in o)}
    return out


def _closure(stack: tuple, universe: list[Value], height: int) -> set[tuple]:
    names = sorted({x for v in stack for x in value_vars(v)})
    if not names:
        return {stack} if all(value_height(v) <= height for v in stack) else set()
    out = set()
    for combo in itertools.product(universe, repeat=len(names)):
        s = Subst(dict(zip(names, combo)))
        inst = tuple(s.value(v) for v in stack)
        if all(value_height(v) <= height for v in inst):
            out.add(inst)
    return out


def machine_relation(m: Term, inputs: Sequence[Value], signature, height: int, budget: Budget) -> tuple[set, bool]:
    """Closure-expanded machine outputs of height <= ``height``."""
    res = big_eval(Memory({DEFAULT_LOC: tuple(inputs)}), m, budget)
    universe = enum_closed_terms(signature, height)
    out = set()
    for mem, _ in res:
        out |= _closure(mem.stack(DEFAULT_LOC), universe, height)
    return out, res.exhausted


def compare_denotation_machine(
    m: Term,
    bounds: DenotationBounds,
    budget: Budget = Budget(max_star_unfold=3),
    signature=None,
    inputs: Iterable[Sequence[Value]] | None = None,
    arity: int | None = None,
) -> Verdict:
    """Check that the bounded denotation and the machine agree on closed inputs.

    Inputs default to every tuple of values of height <= ``term_depth`` with
    the term's input arity. Both sides are cut to outputs of that height;
    the denotation uses a deeper universe for New so no witness is missed.
    """
    from .types import effect

    sig = normalize_signature(signature if signature is not None else term_symbols(m))
    h = bounds.term_depth
    if inputs is None:
        if arity is None:
            arity = effect(m).get(DEFAULT_LOC).min_in
        small = enum_closed_terms(sig, h)
        inputs = itertools.product(small, repeat=arity)
    deep = DenotationBounds(witness_depth(m, h), bounds.star_unfold)
    count = 0
    for inp in inputs:
        count += 1
        den = denote(m, {}, inp, deep, sig, out_height=h)
        mac, _ = machine_relation(m, inp, sig, h, budget)
        if den != mac:
            mem = Memory({DEFAULT_LOC: tuple(inp)})
            fmt = lambda s: frozenset((Memory({DEFAULT_LOC: o}), Subst()) for o in s)
            return Verdict(False, "Counterexample", mem, fmt(mac - den), fmt(den - mac), count,
                           "left = machine, right = denotation")
    return Verdict(True, "ConsistentUpToBudget", checked=count)


# ---------------------------------------------------------------------------
# Diagram equipment
# ---------------------------------------------------------------------------


def _vars(n: int) -> list[str]:
    return [fresh_name() for _ in range(n)]


def _pops(names: Sequence[str]) -> list[Term]:
    """Pop into ``names`` so that names[0] receives the deepest of the values."""
    return [Pop(DEFAULT_LOC, Var(x)) for x in reversed(names)]


def _pushes(names: Sequence[str]) -> list[Term]:
    return [Push(Var(x), DEFAULT_LOC) for x in names]


def _bind(names: Sequence[str], items: list[Term]) -> Term:
    body: Term = seq(*items)
    for x in reversed(list(names)):
        body = New(x, body)
    return canonicalize(body)


def identity(n: int = 1) -> Term:
    return SKIP


def delta_n(n: int = 1) -> Term:
    xs = _vars(n)
    return _bind(xs, _pops(xs) + _pushes(xs) + _pushes(xs))


def epsilon_n(n: int = 1) -> Term:
    xs = _vars(n)
    return _bind(xs, _pops(xs))


def mu_n(n: int = 1) -> Term:
    xs = _vars(n)
    return _bind(xs, _pops(xs) + _pops(xs) + _pushes(xs))


def eta_n(n: int = 1) -> Term:
    xs = _vars(n)
    return _bind(xs, _pushes(xs))


def sym(m: int = 1, n: int = 1) -> Term:
    """Swap the top ``n`` values with the ``m`` values beneath them."""
    xs, ys = _vars(m), _vars(n)
    return _bind(xs + ys, _pops(xs + ys) + _pushes(ys) + _pushes(xs))


def cup() -> Term:
    (x,) = _vars(1)
    return _bind([x], [Push(Var(x)), Push(Var(x))])


def cap() -> Term:
    (x,) = _vars(1)
    return _bind([x], [Pop(DEFAULT_LOC, Var(x)), Pop(DEFAULT_LOC, Var(x))])


GENERATORS = {
    "delta": lambda: delta_n(1),
    "epsilon": lambda: epsilon_n(1),
    "mu": lambda: mu_n(1),
    "eta": lambda: eta_n(1),
    "sigma": lambda: sym(1, 1),
    "cup": cup,
    "cap": cap,
    "id": lambda: identity(1),
}


def diagram_term(name: str) -> Term:
    try:
        return GENERATORS[name]()
    except KeyError:
        raise ValueError(f"unknown generator {name!r}") from None


def seq_compose(*terms: Term) -> Term:
    return canonicalize(seq(*terms))


def tensor_left(k: int, m: Term) -> Term:
    """``id_k ⊗ m``: the k bottom wires are untouched, which stack typing gives for free."""
    return m


def tensor_right(m: Term, k: int) -> Term:
    """``m ⊗ id_k``: set the top k values aside, run ``m``, put them back."""
    if k == 0:
        return m
    xs = _vars(k)
    return _bind(xs, _pops(xs) + [m] + _pushes(xs))


def tensor(m: Term, m_out: int, n: Term, n_in: int) -> Term:
    """``m ⊗ n`` where ``n`` (on top) has input arity ``n_in`` and ``m`` output arity ``m_out``."""
    return seq_compose(tensor_right(m, n_in), tensor_left(m_out, n))


def top(m: int, n: int) -> Term:
    return seq_compose(*([epsilon_n(1) for _ in range(m)] + [eta_n(1) for _ in range(n)]))


def intersect(a: Term, b: Term, m: int, n: int) -> Term:
    """Relational intersection of two ``m > n`` terms."""
    return seq_compose(delta_n(m), tensor(a, n, b, m), mu_n(n))


def typed_dual_sandwich(m: Term, k: int, n: int) -> Term:
    """For ``m: k > n`` the converse built from caps and cups around ``m``."""
    xs, ys = _vars(n), _vars(k)
    items = _pops(xs) + _pushes(ys) + [m] + _pops(xs) + _pushes(ys)
    return _bind(xs + ys, items)
