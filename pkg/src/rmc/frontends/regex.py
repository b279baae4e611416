"""Regular expressions: encoding, a derivative matcher and language extraction."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Union

from ..machine import Budget, explore
from ..memory import EMPTY_MEMORY, Memory
from ..syntax import DEFAULT_LOC, SKIP, ZERO, Fun, Push, Seq, Star, Sum, Term, canonicalize, dual


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Fail:
    pass


@dataclass(frozen=True)
class Lit:
    symbol: str


@dataclass(frozen=True)
class Cat:
    left: "Regex"
    right: "Regex"


@dataclass(frozen=True)
class Alt:
    left: "Regex"
    right: "Regex"


@dataclass(frozen=True)
class Rep:
    body: "Regex"


Regex = Union[Empty, Fail, Lit, Cat, Alt, Rep]
EPS, NONE = Empty(), Fail()


def encode_regex(e: Regex, loc: str = DEFAULT_LOC) -> Term:
    return canonicalize(_enc(e, loc))


def _enc(e: Regex, loc: str) -> Term:
    match e:
        case Empty():
            return SKIP
        case Fail():
            return ZERO
        case Lit(c):
            return Push(Fun(c, ()), loc)
        case Cat(l, r):
            return Seq(_enc(l, loc), _enc(r, loc))
        case Alt(l, r):
            return Sum(_enc(l, loc), _enc(r, loc))
        case Rep(b):
            return Star(_enc(b, loc))
    raise TypeError(e)


def encode_acceptor(e: Regex, loc: str = DEFAULT_LOC) -> Term:
    return dual(encode_regex(e, loc))


def regex_str(e: Regex) -> str:
    match e:
        case Empty():
            return "1"
        case Fail():
            return "0"
        case Lit(c):
            return c
        case Cat(l, r):
            ls = f"({regex_str(l)})" if isinstance(l, Alt) else regex_str(l)
            rs = f"({regex_str(r)})" if isinstance(r, (Alt, Cat)) else regex_str(r)
            return ls + rs
        case Alt(l, r):
            rs = f"({regex_str(r)})" if isinstance(r, Alt) else regex_str(r)
            return f"{regex_str(l)}|{rs}"
        case Rep(b):
            bs = regex_str(b)
            return (bs if isinstance(b, (Lit, Empty, Fail)) else f"({bs})") + "*"
    raise TypeError(e)


def parse_regex(text: str) -> Regex:
    """Letters are literals, ``1`` is the empty word, ``0`` the empty language."""
    toks = [c for c in text if not c.isspace()]
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def alt():
        nonlocal pos
        e = cat()
        while peek() == "|":
            pos += 1
            e = Alt(e, cat())
        return e

    def cat():
        parts = []
        while peek() is not None and peek() not in "|)":
            parts.append(post())
        if not parts:
            return EPS
        e = parts[0]
        for p in parts[1:]:
            e = Cat(e, p)
        return e

    def post():
        nonlocal pos
        e = atom()
        while peek() == "*":
            pos += 1
            e = Rep(e)
        return e

    def atom():
        nonlocal pos
        c = peek()
        if c is None:
            raise ValueError("unexpected end of regex")
        pos += 1
        if c == "(":
            e = alt()
            if peek() != ")":
                raise ValueError("missing ')' in regex")
            pos += 1
            return e
        if c == "1":
            return EPS
        if c == "0":
            return NONE
        if c.isalpha():
            return Lit(c)
        raise ValueError(f"unexpected {c!r} in regex")

    e = alt()
    if pos != len(toks):
        raise ValueError(f"trailing input in regex at {pos}")
    return e


# ---------------------------------------------------------------------------
# Derivative oracle
# ---------------------------------------------------------------------------


def nullable(e: Regex) -> bool:
    match e:
        case Empty() | Rep():
            return True
        case Fail() | Lit():
            return False
        case Cat(l, r):
            return nullable(l) and nullable(r)
        case Alt(l, r):
            return nullable(l) or nullable(r)
    raise TypeError(e)


def derive(e: Regex, c: str) -> Regex:
    match e:
        case Empty() | Fail():
            return NONE
        case Lit(s):
            return EPS if s == c else NONE
        case Cat(l, r):
            d = Cat(derive(l, c), r)
            return Alt(d, derive(r, c)) if nullable(l) else d
        case Alt(l, r):
            return Alt(derive(l, c), derive(r, c))
        case Rep(b):
            return Cat(derive(b, c), e)
    raise TypeError(e)


def matches(e: Regex, word: str) -> bool:
    for c in word:
        e = derive(e, c)
    return nullable(e)


def oracle_language(e: Regex, alphabet: str, max_len: int) -> set[str]:
    out = set()
    for n in range(max_len + 1):
        for w in itertools.product(alphabet, repeat=n):
            if matches(e, "".join(w)):
                out.add("".join(w))
    return out


# ---------------------------------------------------------------------------
# Machine side
# ---------------------------------------------------------------------------


def word_of(mem: Memory, loc: str = DEFAULT_LOC) -> str:
    return "".join(v.symbol for v in mem.stack(loc))


def memory_of(word: str, loc: str = DEFAULT_LOC) -> Memory:
    return Memory({loc: [Fun(c, ()) for c in word]})


_SEARCH = Budget(max_steps_per_path=10_000, max_solutions=100_000, max_states=400_000)


def machine_language(e: Regex, max_len: int, budget: Budget = _SEARCH) -> set[str]:
    """Words of length up to ``max_len`` returned by running the encoding on the empty memory."""
    res = explore(EMPTY_MEMORY, encode_regex(e), budget, dedup=True,
                  prune=lambda m: m.depth(DEFAULT_LOC) > max_len)
    if not res.exhausted:
        raise RuntimeError("regex search did not finish within budget")
    return {word_of(m) for m, _ in res}


def accepts(e: Regex, word: str, budget: Budget = _SEARCH) -> bool:
    """Run the dual acceptor on ``word``; accept iff some run ends with the empty stack."""
    res = explore(memory_of(word), encode_acceptor(e), budget, dedup=True)
    return any(m.depth(DEFAULT_LOC) == 0 for m, _ in res)


def random_regex(rng: random.Random, size: int, alphabet: str = "ab") -> Regex:
    """A random expression with exactly ``size`` AST nodes."""
    if size <= 1:
        r = rng.random()
        if r < 0.1:
            return EPS
        if r < 0.15:
            return NONE
        return Lit(rng.choice(alphabet))
    op = rng.choice(["cat", "alt", "rep"]) if size >= 3 else "rep"
    if op == "rep":
        return Rep(random_regex(rng, size - 1, alphabet))
    k = rng.randint(1, size - 2)
    ctor = Cat if op == "cat" else Alt
    return ctor(random_regex(rng, k, alphabet), random_regex(rng, size - 1 - k, alphabet))


def regex_size(e: Regex) -> int:
    match e:
        case Cat(l, r) | Alt(l, r):
            return 1 + regex_size(l) + regex_size(r)
        case Rep(b):
            return 1 + regex_size(b)
    return 1
