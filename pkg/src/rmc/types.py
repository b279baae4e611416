"""Simple stack-effect types.

A term's type assigns each location an input and an output stack depth.
Types are inferred as per-location effects. ``Line(m, d)`` accepts any
input depth ``i >= m`` and produces depth ``i + d``. ``Rect(a, b)`` arises
from Zero (which has every type) and accepts any input ``i >= a`` with any
output ``o >= b``. Locations a term never mentions use a default effect,
which is ``Line(0, 0)`` unless the term can only fail.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .memory import Memory
from .syntax import DEFAULT_LOC, New, Pop, Push, Seq, Skip, Star, Sum, Term, Zero


class RmcTypeError(TypeError):
    """A term has no simple type."""


@dataclass(frozen=True, slots=True)
class Line:
    min_in: int
    delta: int


@dataclass(frozen=True, slots=True)
class Rect:
    min_in: int
    min_out: int


Eff = Line | Rect
IDENTITY = Line(0, 0)
ANY = Rect(0, 0)


def _seq1(e1: Eff, e2: Eff) -> Eff:
    match e1, e2:
        case Line(m1, d1), Line(m2, d2):
            return Line(max(m1, m2 - d1), d1 + d2)
        case Rect(a, b), Line(m, d):
            return Rect(a, max(b, m) + d)
        case Line(m, d), Rect(a, b):
            return Rect(max(m, a - d), b)
        case Rect(a, _), Rect(_, b):
            return Rect(a, b)
    raise AssertionError


def _meet1(e1: Eff, e2: Eff) -> Eff:
    match e1, e2:
        case Line(m1, d1), Line(m2, d2):
            if d1 != d2:
                raise RmcTypeError("branch deltas differ")
            return Line(max(m1, m2), d1)
        case (Line(m, d), Rect(a, b)) | (Rect(a, b), Line(m, d)):
            return Line(max(m, a, b - d), d)
        case Rect(a1, b1), Rect(a2, b2):
            return Rect(max(a1, a2), max(b1, b2))
    raise AssertionError


def _star1(e: Eff) -> Eff:
    match e:
        case Line(_, 0):
            return e
        case Line():
            raise RmcTypeError("star not balanced")
        case Rect(a, b):
            return Line(max(a, b), 0)
    raise AssertionError


def _dual1(e: Eff) -> Eff:
    if isinstance(e, Line):
        return Line(e.min_in + e.delta, -e.delta)
    return Rect(e.min_out, e.min_in)


def _subset1(e1: Eff, e2: Eff) -> bool:
    """Every (input, output) pair allowed by ``e1`` is allowed by ``e2``."""
    match e1, e2:
        case Line(m1, d1), Line(m2, d2):
            return d1 == d2 and m2 <= m1
        case Line(m, d), Rect(a, b):
            return m >= a and m + d >= b
        case Rect(), Line():
            return False
        case Rect(a1, b1), Rect(a2, b2):
            return a1 >= a2 and b1 >= b2
    raise AssertionError


@dataclass(frozen=True)
class Effect:
    """Per-location effects with a default for unmentioned locations."""

    entries: tuple = ()  # sorted (loc, Eff) pairs
    default: Eff = IDENTITY

    @staticmethod
    def make(entries: dict, default: Eff = IDENTITY) -> "Effect":
        return Effect(tuple(sorted((k, v) for k, v in entries.items() if v != default)), default)

    def get(self, loc: str) -> Eff:
        for k, v in self.entries:
            if k == loc:
                return v
        return self.default

    def locs(self) -> set[str]:
        return {k for k, _ in self.entries}

    def _zip(self, other: "Effect", f) -> "Effect":
        locs = self.locs() | other.locs()
        return Effect.make({l: f(self.get(l), other.get(l)) for l in locs}, f(self.default, other.default))

    def then(self, other: "Effect") -> "Effect":
        return self._zip(other, _seq1)

    def meet(self, other: "Effect") -> "Effect":
        return self._zip(other, _meet1)

    def star(self) -> "Effect":
        return Effect.make({l: _star1(e) for l, e in self.entries}, _star1(self.default))

    def dual(self) -> "Effect":
        return Effect.make({l: _dual1(e) for l, e in self.entries}, _dual1(self.default))

    def subset_of(self, other: "Effect") -> bool:
        locs = self.locs() | other.locs()
        return _subset1(self.default, other.default) and all(
            _subset1(self.get(l), other.get(l)) for l in locs
        )

    @property
    def is_poly(self) -> bool:
        return isinstance(self.default, Rect) and all(isinstance(e, Rect) for _, e in self.entries)

    @property
    def is_concrete(self) -> bool:
        return isinstance(self.default, Line) and all(isinstance(e, Line) for _, e in self.entries)

    def min_in(self) -> dict[str, int]:
        return {l: e.min_in for l, e in self.entries}

    def delta(self) -> dict[str, int]:
        return {l: e.delta for l, e in self.entries if isinstance(e, Line)}

    def __str__(self) -> str:
        def one(e):
            return f"Line({e.min_in},{e.delta:+d})" if isinstance(e, Line) else f"Rect({e.min_in},{e.min_out})"

        body = ", ".join(f"{l}: {one(e)}" for l, e in self.entries)
        return "{" + body + (", " if body else "") + f"*: {one(self.default)}" + "}"


SKIP_EFFECT = Effect()
ZERO_EFFECT = Effect((), ANY)


def effect(m: Term) -> Effect:
    """Principal effect, raising ``RmcTypeError`` when the term is untypable."""
    match m:
        case Skip():
            return SKIP_EFFECT
        case Zero():
            return ZERO_EFFECT
        case Push(_, loc):
            return Effect(((loc, Line(0, 1)),))
        case Pop(loc, _):
            return Effect(((loc, Line(1, -1)),))
        case Seq(h, t):
            return effect(h).then(effect(t))
        case Sum(l, r):
            return effect(l).meet(effect(r))
        case Star(b):
            return effect(b).star()
        case New(_, b):
            return effect(b)
    raise TypeError(f"not a term: {m!r}")


def typable(m: Term) -> bool:
    try:
        effect(m)
        return True
    except RmcTypeError:
        return False


# ---------------------------------------------------------------------------
# Memory types and arrow types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MemoryType:
    arities: tuple = ()  # sorted (loc, n) with n > 0

    @staticmethod
    def of(d: dict | None = None, **kw) -> "MemoryType":
        merged = dict(d or {})
        merged.update(kw)
        return MemoryType(tuple(sorted((k, v) for k, v in merged.items() if v)))

    @staticmethod
    def of_memory(mem: Memory) -> "MemoryType":
        return MemoryType.of(mem.depths())

    def __getitem__(self, loc: str) -> int:
        return dict(self.arities).get(loc, 0)

    def locs(self) -> set[str]:
        return {k for k, _ in self.arities}

    def __add__(self, other: "MemoryType") -> "MemoryType":
        locs = self.locs() | other.locs()
        return MemoryType.of({l: self[l] + other[l] for l in locs})


@dataclass(frozen=True)
class RmcType:
    input: MemoryType = field(default_factory=MemoryType)
    output: MemoryType = field(default_factory=MemoryType)

    def flip(self) -> "RmcType":
        return RmcType(self.output, self.input)

    def expand(self, extra: MemoryType) -> "RmcType":
        return RmcType(self.input + extra, self.output + extra)

    def __str__(self) -> str:
        locs = sorted(self.input.locs() | self.output.locs())
        if not locs or locs == [DEFAULT_LOC]:
            return f"{self.input[DEFAULT_LOC]} > {self.output[DEFAULT_LOC]}"

        def side(mt):
            return ", ".join(f"{l}:{mt[l]}" for l in locs)

        return f"{side(self.input)} > {side(self.output)}"


@dataclass(frozen=True)
class Polymorphic:
    """Marker for terms without a single principal arrow type (they contain a forced failure)."""

    effect: Effect

    def flip(self) -> "Polymorphic":
        return Polymorphic(self.effect.dual())

    def __str__(self) -> str:
        return "polymorphic"


def parse_type(text: str) -> RmcType:
    """``"2 > 1"`` or ``"a:2, b:0 > a:1, b:1"``."""
    lhs, sep, rhs = text.partition(">")
    if not sep:
        raise ValueError(f"type {text!r} needs '>'")

    def side(s: str) -> MemoryType:
        s = s.strip()
        if re.fullmatch(r"\d+", s):
            return MemoryType.of({DEFAULT_LOC: int(s)})
        out = {}
        for part in filter(None, (p.strip() for p in s.split(","))):
            loc, _, n = part.partition(":")
            if not n.strip().isdigit():
                raise ValueError(f"bad arity entry {part!r}")
            out[loc.strip()] = int(n)
        return MemoryType.of(out)

    return RmcType(side(lhs), side(rhs))


def _fits(e: Eff, i: int, o: int) -> bool:
    if isinstance(e, Line):
        return i >= e.min_in and o == i + e.delta
    return i >= e.min_in and o >= e.min_out


def check_type(m: Term, t: RmcType) -> bool:
    try:
        eff = effect(m)
    except RmcTypeError:
        return False
    locs = eff.locs() | t.input.locs() | t.output.locs()
    return _fits(eff.default, 0, 0) and all(_fits(eff.get(l), t.input[l], t.output[l]) for l in locs)


def principal_type(m: Term) -> RmcType | Polymorphic:
    eff = effect(m)
    if not eff.is_concrete:
        return Polymorphic(eff)
    ins = {l: e.min_in for l, e in eff.entries}
    outs = {l: e.min_in + e.delta for l, e in eff.entries}
    return RmcType(MemoryType.of(ins), MemoryType.of(outs))


def accepts_memory(m: Term, mem: Memory) -> bool:
    """The memory's depths meet the term's input requirements."""
    try:
        eff = effect(m)
    except RmcTypeError:
        return False
    locs = eff.locs() | set(mem.depths())
    return all(eff.get(l).min_in <= mem.depth(l) for l in locs) and eff.default.min_in == 0


def output_depths_ok(m: Term, mem: Memory, out: Memory) -> bool:
    eff = effect(m)
    for l in eff.locs() | set(mem.depths()) | set(out.depths()):
        ok = _fits(eff.get(l), mem.depth(l), out.depth(l))
        if not ok:
            return False
    return True


# ---------------------------------------------------------------------------
# Progress
# ---------------------------------------------------------------------------


class ProgressViolation(AssertionError):
    def __init__(self, state):
        self.state = state
        super().__init__(f"empty pop from a typed state: {state.render() if state else '?'}")


class UntypedInput(ValueError):
    pass


def check_progress(mem: Memory, m: Term, budget=None):
    """Explore every run from a typed state and fail on any empty-stack pop.

    Returns the result multiset. Other stuck states (clashes, occurs
    failures, Zero) are ordinary failure and are allowed.
    """
    from .machine import DEFAULT_BUDGET, explore

    if not accepts_memory(m, mem):
        raise UntypedInput(f"memory {mem} does not meet the input type of the term")

    def on_stuck(st):
        if st.reason == "empty_pop":
            raise ProgressViolation(st.state)

    return explore(mem, m, budget or DEFAULT_BUDGET, on_stuck=on_stuck)
