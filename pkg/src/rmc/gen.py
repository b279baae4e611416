"""Seeded random generators for values, terms and memories."""

from __future__ import annotations

import random
from collections.abc import Sequence

from .memory import Memory
from .syntax import (
    DEFAULT_LOC,
    SKIP,
    ZERO,
    Fun,
    New,
    Pop,
    Push,
    Seq,
    Star,
    Sum,
    Term,
    Value,
    Var,
    canonicalize,
)

DEFAULT_SIG = (("c", 0), ("d", 0), ("f", 1), ("g", 2))


def random_value(rng: random.Random, vars_: Sequence[str], sig=DEFAULT_SIG, depth: int = 2) -> Value:
    consts = [s for s, n in sig if n == 0]
    funs = [(s, n) for s, n in sig if n > 0]
    leaf_choices = len(vars_) + len(consts)
    if depth <= 1 or not funs or rng.random() < 0.55:
        k = rng.randrange(leaf_choices)
        return Var(vars_[k]) if k < len(vars_) else Fun(consts[k - len(vars_)], ())
    s, n = rng.choice(funs)
    return Fun(s, tuple(random_value(rng, vars_, sig, depth - 1) for _ in range(n)))


class TermGen:
    """Random terms of roughly ``size`` constructors.

    ``free`` variables may appear anywhere; New binders add scoped ones.
    With ``free=()`` every generated term is closed.
    """

    def __init__(
        self,
        rng: random.Random,
        free: Sequence[str] = ("X", "Y"),
        sig=DEFAULT_SIG,
        locs: Sequence[str] = (DEFAULT_LOC,),
        star: bool = True,
        sums: bool = True,
        zero: bool = True,
        value_depth: int = 2,
    ):
        self.rng = rng
        self.free = list(free)
        self.sig = sig
        self.locs = list(locs)
        self.star = star
        self.sums = sums
        self.zero = zero
        self.value_depth = value_depth
        self.counter = 0

    def _binder(self) -> str:
        self.counter += 1
        return f"V{self.counter}"

    def value(self, scope: list) -> Value:
        return random_value(self.rng, scope, self.sig, self.value_depth)

    def atom(self, scope: list) -> Term:
        r = self.rng.random()
        loc = self.rng.choice(self.locs)
        if r < 0.42:
            return Push(self.value(scope), loc)
        if r < 0.84:
            return Pop(loc, self.value(scope))
        if r < 0.94 or not self.zero:
            return SKIP
        return ZERO

    def term(self, size: int, scope: list | None = None) -> Term:
        if scope is None:
            scope = list(self.free)
        if size <= 1:
            return self.atom(scope)
        ops = ["seq", "seq", "seq", "new", "new"]
        if self.sums:
            ops += ["sum", "sum"]
        if self.star:
            ops.append("star")
        op = self.rng.choice(ops)
        if op == "seq":
            k = self.rng.randint(1, size - 1)
            return Seq(self.term(k, scope), self.term(size - k, scope))
        if op == "sum":
            k = self.rng.randint(1, size - 1)
            return Sum(self.term(k, scope), self.term(size - k, scope))
        if op == "star":
            return Star(self.term(size - 1, scope))
        x = self._binder()
        return New(x, self.term(size - 1, scope + [x]))

    def __call__(self, size: int) -> Term:
        return canonicalize(self.term(size))


def random_term(rng: random.Random, size: int, **kw) -> Term:
    return TermGen(rng, **kw)(size)


class TypedGen:
    """Random single-location terms built to be typable.

    Sums get branches of equal stack delta and star bodies are balanced,
    so every output has a simple type by construction.
    """

    def __init__(self, rng: random.Random, sig=DEFAULT_SIG, star: bool = False, zero: bool = True,
                 free: Sequence[str] = (), value_depth: int = 2, loc: str = DEFAULT_LOC):
        self.rng = rng
        self.sig = sig
        self.star = star
        self.zero = zero
        self.free = list(free)
        self.value_depth = value_depth
        self.loc = loc
        self.counter = 0

    def value(self, scope):
        return random_value(self.rng, scope, self.sig, self.value_depth)

    def term(self, size: int, delta: int, scope: list) -> Term:
        rng = self.rng
        if size <= 1 or abs(delta) >= size:
            return self._chain(delta, scope)
        ops = ["seq", "seq", "new", "new", "sum"]
        if self.star and delta == 0 and size > 2:
            ops.append("star")
        op = rng.choice(ops)
        if op == "seq":
            k = rng.randint(1, size - 1)
            d1 = rng.randint(-min(k, 2), min(k, 2))
            return Seq(self.term(k, d1, scope), self.term(size - k, delta - d1, scope))
        if op == "sum":
            k = rng.randint(1, size - 1)
            return Sum(self.term(k, delta, scope), self.term(size - k, delta, scope))
        if op == "star":
            return Star(self.term(size - 1, 0, scope))
        self.counter += 1
        x = f"V{self.counter}"
        return New(x, self.term(size - 1, delta, scope + [x]))

    def _chain(self, delta: int, scope) -> Term:
        if delta == 0:
            r = self.rng.random()
            if self.zero and r < 0.1:
                return ZERO
            if r < 0.4:
                return SKIP
            return Seq(Pop(self.loc, self.value(scope)), Push(self.value(scope), self.loc))
        items: list[Term] = []
        for _ in range(abs(delta)):
            items.append(Push(self.value(scope), self.loc) if delta > 0 else Pop(self.loc, self.value(scope)))
        out = items[-1]
        for it in reversed(items[:-1]):
            out = Seq(it, out)
        return out

    def __call__(self, size: int, delta: int | None = None) -> Term:
        if delta is None:
            delta = self.rng.randint(-2, 2)
        return canonicalize(self.term(size, delta, list(self.free)))


def random_memory(
    rng: random.Random,
    locs: Sequence[str] = (DEFAULT_LOC,),
    max_depth: int = 3,
    vars_: Sequence[str] = ("A", "B"),
    sig=DEFAULT_SIG,
    value_depth: int = 2,
    depths: dict | None = None,
) -> Memory:
    """A memory whose values may contain the variables ``vars_`` (open memory)."""
    stacks = {}
    for loc in locs:
        n = depths[loc] if depths and loc in depths else rng.randint(0, max_depth)
        stacks[loc] = [random_value(rng, list(vars_), sig, value_depth) for _ in range(n)]
    return Memory(stacks)


def random_memories(rng: random.Random, count: int, **kw) -> list[Memory]:
    return [random_memory(rng, **kw) for _ in range(count)]
