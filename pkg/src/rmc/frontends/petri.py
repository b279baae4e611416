"""Petri nets: places are locations, tokens are copies of one constant.

Source format, one transition per line::

    t1: p, p -> q
    t2: q ->          # consumes without producing
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass

from ..machine import Budget, explore
from ..memory import Memory
from ..syntax import Fun, Pop, Push, Star, Term, ZERO, canonicalize, seq, sum_of

TOKEN = Fun("o", ())


@dataclass(frozen=True)
class Transition:
    pre: tuple
    post: tuple
    name: str = ""


@dataclass(frozen=True)
class PetriNet:
    places: tuple
    transitions: tuple


Marking = frozenset  # of (place, count) with count > 0


def marking(d: dict) -> Marking:
    return frozenset((p, n) for p, n in d.items() if n > 0)


def parse_petri(text: str) -> PetriNet:
    places: dict[str, None] = {}
    trans = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name = ""
        if ":" in line.split("->", 1)[0]:
            name, line = (s.strip() for s in line.split(":", 1))
        if "->" not in line:
            raise ValueError(f"line {n}: expected 'pre -> post'")
        lhs, rhs = line.split("->", 1)
        pre = tuple(p.strip() for p in lhs.split(",") if p.strip())
        post = tuple(p.strip() for p in rhs.split(",") if p.strip())
        for p in pre + post:
            if not p[:1].islower():
                raise ValueError(f"line {n}: place {p!r} must start with a lowercase letter")
            places.setdefault(p)
        trans.append(Transition(pre, post, name or f"t{len(trans) + 1}"))
    return PetriNet(tuple(places), tuple(trans))


def encode_transition(t: Transition) -> Term:
    return seq(*(Pop(p, TOKEN) for p in t.pre), *(Push(TOKEN, q) for q in t.post))


def encode_petri(net: PetriNet) -> Term:
    if not net.transitions:
        return Star(ZERO)
    return canonicalize(Star(sum_of([encode_transition(t) for t in net.transitions])))


def state_to_memory(m: Marking | dict) -> Memory:
    d = dict(m)
    return Memory({p: [TOKEN] * n for p, n in d.items()})


def memory_to_state(mem: Memory) -> Marking:
    return marking(mem.depths())


def reachable_machine(net: PetriNet, start: Marking, budget: Budget = Budget(max_solutions=100_000, max_states=500_000)) -> set[Marking]:
    res = explore(state_to_memory(start), encode_petri(net), budget, dedup=True)
    if not res.exhausted:
        raise RuntimeError("reachability search ran out of budget")
    return {memory_to_state(mem) for mem, _ in res}


def fire(t: Transition, m: Marking) -> Marking | None:
    c = Counter(dict(m))
    need = Counter(t.pre)
    if any(c[p] < k for p, k in need.items()):
        return None
    c.subtract(need)
    c.update(t.post)
    return marking(c)


def reachable_oracle(net: PetriNet, start: Marking, limit: int = 100_000) -> set[Marking]:
    """Breadth-first search over the marking graph."""
    seen = {start}
    todo = deque([start])
    while todo:
        m = todo.popleft()
        for t in net.transitions:
            n = fire(t, m)
            if n is not None and n not in seen:
                seen.add(n)
                if len(seen) > limit:
                    raise RuntimeError("marking graph too large")
                todo.append(n)
    return seen
