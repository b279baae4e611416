"""Core values, terms and substitutions.

Values are first-order algebraic terms. Terms are the computation terms:
skip, sequencing, Kleene star, zero, sum, push, pop and the new-variable
binder. Everything here is immutable.

Variables follow the Prolog convention: identifiers starting with an
uppercase letter are variables, lowercase ones are function symbols.
Machine-generated fresh variables are written ``%n`` and never clash with
user identifiers.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from typing import Union

DEFAULT_LOC = "_"


# ---------------------------------------------------------------------------
# Values
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Fun:
    symbol: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.symbol
        return f"{self.symbol}({','.join(str(a) for a in self.args)})"


Value = Union[Var, Fun]


def const(symbol: str) -> Fun:
    return Fun(symbol, ())


def value_vars(v: Value) -> set[str]:
    out: set[str] = set()
    _collect_value_vars(v, out)
    return out


def _collect_value_vars(v: Value, out: set[str]) -> None:
    if isinstance(v, Var):
        out.add(v.name)
    else:
        for a in v.args:
            _collect_value_vars(a, out)


def occurs(name: str, v: Value) -> bool:
    if isinstance(v, Var):
        return v.name == name
    return any(occurs(name, a) for a in v.args)


def value_height(v: Value) -> int:
    if isinstance(v, Var) or not v.args:
        return 1
    return 1 + max(value_height(a) for a in v.args)


def value_symbols(v: Value, out: dict[str, int] | None = None) -> dict[str, int]:
    """Symbol -> arity for every function symbol in ``v``."""
    if out is None:
        out = {}
    if isinstance(v, Fun):
        out.setdefault(v.symbol, len(v.args))
        for a in v.args:
            value_symbols(a, out)
    return out


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Skip:
    pass


@dataclass(frozen=True, slots=True)
class Zero:
    pass


@dataclass(frozen=True, slots=True)
class Seq:
    head: "Term"
    tail: "Term"


@dataclass(frozen=True, slots=True)
class Star:
    body: "Term"


@dataclass(frozen=True, slots=True)
class Sum:
    left: "Term"
    right: "Term"


@dataclass(frozen=True, slots=True)
class Push:
    value: Value
    loc: str = DEFAULT_LOC


@dataclass(frozen=True, slots=True)
class Pop:
    loc: str
    value: Value


@dataclass(frozen=True, slots=True)
class New:
    var: str
    body: "Term"


Term = Union[Skip, Zero, Seq, Star, Sum, Push, Pop, New]

SKIP = Skip()
ZERO = Zero()


def pop(value: Value, loc: str = DEFAULT_LOC) -> Pop:
    return Pop(loc, value)


def seq(*terms: Term) -> Term:
    """Right-nested, Skip-terminated sequence of ``terms``."""
    out: Term = SKIP
    for t in reversed(terms):
        out = Seq(t, out)
    return out


def sum_of(terms: Iterable[Term]) -> Term:
    """Left-nested sum; the empty sum is Zero."""
    out: Term | None = None
    for t in terms:
        out = t if out is None else Sum(out, t)
    return ZERO if out is None else out


def new_many(names: Iterable[str], body: Term) -> Term:
    for x in reversed(list(names)):
        body = New(x, body)
    return body


def push_all(values: Iterable[Value], loc: str = DEFAULT_LOC) -> list[Term]:
    return [Push(v, loc) for v in values]


def pop_all(values: Iterable[Value], loc: str = DEFAULT_LOC) -> list[Term]:
    """Pops matching ``values`` laid out bottom-to-top, so the last value pops first."""
    return [Pop(loc, v) for v in reversed(list(values))]


def size(m: Term) -> int:
    match m:
        case Seq(h, t) | Sum(h, t):
            return 1 + size(h) + size(t)
        case Star(b) | New(_, b):
            return 1 + size(b)
        case _:
            return 1


def subterms(m: Term) -> Iterator[Term]:
    yield m
    match m:
        case Seq(h, t) | Sum(h, t):
            yield from subterms(h)
            yield from subterms(t)
        case Star(b) | New(_, b):
            yield from subterms(b)


def has_star(m: Term) -> bool:
    return any(isinstance(s, Star) for s in subterms(m))


def has_sum(m: Term) -> bool:
    return any(isinstance(s, Sum) for s in subterms(m))


def locations(m: Term) -> set[str]:
    return {s.loc for s in subterms(m) if isinstance(s, (Push, Pop))}


def term_values(m: Term) -> list[Value]:
    return [s.value for s in subterms(m) if isinstance(s, (Push, Pop))]


def term_symbols(m: Term) -> dict[str, int]:
    out: dict[str, int] = {}
    for v in term_values(m):
        value_symbols(v, out)
    return out


def free_vars(m: Term) -> set[str]:
    """Variables of ``m`` not bound by an enclosing New."""
    match m:
        case Push(v, _) | Pop(_, v):
            return value_vars(v)
        case Seq(h, t) | Sum(h, t):
            return free_vars(h) | free_vars(t)
        case Star(b):
            return free_vars(b)
        case New(x, b):
            return free_vars(b) - {x}
        case _:
            return set()


def all_vars(m: Term) -> set[str]:
    out: set[str] = set()
    for s in subterms(m):
        if isinstance(s, (Push, Pop)):
            _collect_value_vars(s.value, out)
        elif isinstance(s, New):
            out.add(s.var)
    return out


# ---------------------------------------------------------------------------
# Fresh names
# ---------------------------------------------------------------------------

# next() on itertools.count is atomic under the GIL.
_fresh_counter = itertools.count(1)


def fresh_name() -> str:
    return f"%{next(_fresh_counter)}"


def is_fresh_name(name: str) -> bool:
    return name.startswith("%")


# ---------------------------------------------------------------------------
# Substitutions
# ---------------------------------------------------------------------------


class Subst(Mapping):
    """Finite map from variable names to values.

    Application is simultaneous. Identity bindings are dropped on
    construction, so ``Subst({"X": Var("X")})`` is empty.
    """

    __slots__ = ("_map", "_hash")

    def __init__(self, bindings: Mapping[str, Value] | Iterable[tuple[str, Value]] = ()):
        items = bindings.items() if isinstance(bindings, Mapping) else bindings
        self._map = {k: v for k, v in items if not (isinstance(v, Var) and v.name == k)}
        self._hash = None

    def __getitem__(self, key: str) -> Value:
        return self._map[key]

    def __iter__(self):
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, Subst):
            return self._map == other._map
        if isinstance(other, Mapping):
            return self._map == dict(other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"Subst({self._map!r})"

    def __str__(self) -> str:
        if not self._map:
            return "{}"
        body = ", ".join(f"{v}/{k}" for k, v in sorted(self._map.items()))
        return "{" + body + "}"

    def value(self, v: Value) -> Value:
        if not self._map:
            return v
        return _subst_value(self._map, v)

    def restrict(self, names: Iterable[str]) -> "Subst":
        keep = set(names)
        return Subst({k: v for k, v in self._map.items() if k in keep})

    def without(self, name: str) -> "Subst":
        if name not in self._map:
            return self
        return Subst({k: v for k, v in self._map.items() if k != name})

    def codomain_vars(self) -> set[str]:
        out: set[str] = set()
        for v in self._map.values():
            _collect_value_vars(v, out)
        return out


EMPTY_SUBST = Subst()


def _subst_value(mp: Mapping[str, Value], v: Value) -> Value:
    if isinstance(v, Var):
        return mp.get(v.name, v)
    if not v.args:
        return v
    return Fun(v.symbol, tuple(_subst_value(mp, a) for a in v.args))


def single(name: str, v: Value) -> Subst:
    return Subst({name: v})


def compose_subst(t: Subst, s: Subst) -> Subst:
    """The substitution ``t . s``: applying it equals applying ``s`` then ``t``."""
    if not s:
        return t
    if not t:
        return s
    out = {x: t.value(v) for x, v in s.items()}
    for y, v in t.items():
        if y not in out:
            out[y] = v
    return Subst(out)


def apply_subst(s: Subst, m: Term) -> Term:
    """Capture-avoiding application of ``s`` to every value in ``m``."""
    if not s:
        return m
    match m:
        case Push(v, loc):
            return Push(s.value(v), loc)
        case Pop(loc, v):
            return Pop(loc, s.value(v))
        case Seq(h, t):
            return Seq(apply_subst(s, h), apply_subst(s, t))
        case Sum(l, r):
            return Sum(apply_subst(s, l), apply_subst(s, r))
        case Star(b):
            return Star(apply_subst(s, b))
        case New(x, b):
            inner = s.without(x)
            if not inner:
                return m
            if x in inner.codomain_vars():
                y = fresh_name()
                renamed = Subst({**dict(inner), x: Var(y)})
                return New(y, apply_subst(renamed, b))
            return New(x, apply_subst(inner, b))
        case _:
            return m


def rename_bound(x: str, y: str, body: Term) -> Term:
    return apply_subst(single(x, Var(y)), body)


# ---------------------------------------------------------------------------
# Duality and alpha-equivalence
# ---------------------------------------------------------------------------


def dual(m: Term) -> Term:
    """Reverse sequencing and swap push with pop."""
    match m:
        case Seq(h, t):
            return Seq(dual(t), dual(h))
        case Sum(l, r):
            return Sum(dual(l), dual(r))
        case Star(b):
            return Star(dual(b))
        case New(x, b):
            return New(x, dual(b))
        case Push(v, loc):
            return Pop(loc, v)
        case Pop(loc, v):
            return Push(v, loc)
        case _:
            return m


def alpha_eq(a: Term, b: Term) -> bool:
    """Structural equality up to renaming of New-bound variables."""
    return _alpha(a, b, {}, {}, 0)


def _alpha(a: Term, b: Term, ea: dict, eb: dict, depth: int) -> bool:
    if type(a) is not type(b):
        return False
    match a:
        case Push(v, loc):
            return loc == b.loc and _alpha_value(v, b.value, ea, eb)
        case Pop(loc, v):
            return loc == b.loc and _alpha_value(v, b.value, ea, eb)
        case Seq(h, t):
            return _alpha(h, b.head, ea, eb, depth) and _alpha(t, b.tail, ea, eb, depth)
        case Sum(l, r):
            return _alpha(l, b.left, ea, eb, depth) and _alpha(r, b.right, ea, eb, depth)
        case Star(body):
            return _alpha(body, b.body, ea, eb, depth)
        case New(x, body):
            return _alpha(body, b.body, {**ea, x: depth}, {**eb, b.var: depth}, depth + 1)
        case _:
            return True


def _alpha_value(u: Value, v: Value, ea: dict, eb: dict) -> bool:
    if isinstance(u, Var):
        if not isinstance(v, Var):
            return False
        la, lb = ea.get(u.name), eb.get(v.name)
        if la is None and lb is None:
            return u.name == v.name
        return la == lb
    if not isinstance(v, Fun) or u.symbol != v.symbol or len(u.args) != len(v.args):
        return False
    return all(_alpha_value(x, y, ea, eb) for x, y in zip(u.args, v.args))


# ---------------------------------------------------------------------------
# Canonical sequences
# ---------------------------------------------------------------------------


def _leaves(m: Term, out: list) -> None:
    if isinstance(m, Seq):
        _leaves(m.head, out)
        _leaves(m.tail, out)
    else:
        out.append(m)


def canonicalize(m: Term) -> Term:
    """Right-nest every sequence and terminate it with Skip.

    Skip elements inside a sequence are dropped, a lone sum or zero loses
    its trailing skip, and a New in the middle of
    a sequence absorbs the rest of it (``(E X.M);N`` becomes ``E X.(M;N)``,
    renaming X if N mentions it). A canonical chain therefore ends either in
    Skip or in a New whose body continues the chain.
    """
    match m:
        case Seq():
            leaves: list = []
            _leaves(m, leaves)
            return _chain([canonicalize(x) for x in leaves])
        case Sum(l, r):
            return Sum(canonicalize(l), canonicalize(r))
        case Star(b):
            return Star(canonicalize(b))
        case New(x, b):
            return New(x, canonicalize(b))
        case _:
            return m


def _chain(items: list) -> Term:
    items = [x for x in items if not isinstance(x, Skip)]
    for i, it in enumerate(items):
        if isinstance(it, New) and i < len(items) - 1:
            rest = items[i + 1:]
            x, body = it.var, it.body
            rest_fv: set[str] = set()
            for r in rest:
                rest_fv |= free_vars(r)
            if x in rest_fv:
                y = fresh_name()
                body = rename_bound(x, y, body)
                x = y
            inner: list = []
            _leaves(body, inner)
            return _wrap(items[:i], New(x, _chain(inner + rest)))
    if not items:
        return SKIP
    if isinstance(items[-1], New):
        return _wrap(items[:-1], items[-1])
    if len(items) == 1 and isinstance(items[0], (Sum, Zero)):
        return items[0]
    return _wrap(items, SKIP)


def _wrap(prefix: list, end: Term) -> Term:
    out = end
    for t in reversed(prefix):
        out = Seq(t, out)
    return out


def chain_items(m: Term) -> tuple[list, Term]:
    """Split a canonical chain into its items and its terminator."""
    items = []
    while isinstance(m, Seq):
        items.append(m.head)
        m = m.tail
    return items, m


def is_canonical(m: Term) -> bool:
    return canonicalize(m) == m
