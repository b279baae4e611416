"""The relational machine: small-step transitions, fair exploration and big-step evaluation."""

from __future__ import annotations

from collections import deque
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field

from .memory import Memory, parse_memory
from .parsing import print_term
from .syntax import (
    EMPTY_SUBST,
    SKIP,
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
    apply_subst,
    compose_subst,
    free_vars,
    fresh_name,
    is_fresh_name,
    occurs,
    rename_bound,
    single,
)

__all__ = [
    "Budget",
    "State",
    "Success",
    "Stuck",
    "Next",
    "ResultMultiset",
    "Verdict",
    "step",
    "explore",
    "big_eval",
    "machine_equiv",
    "canonicalize_result",
    "result_set",
    "initial_state",
    "trace",
    "parse_memory",
    "Memory",
]


@dataclass(frozen=True)
class Budget:
    max_steps_per_path: int = 10_000
    max_solutions: int = 100
    max_star_unfold: int = 32
    max_states: int = 200_000

    def __post_init__(self):
        for name in ("max_steps_per_path", "max_solutions", "max_star_unfold", "max_states"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


DEFAULT_BUDGET = Budget()


# ---------------------------------------------------------------------------
# Unifying the head of a stack with a popped value
# ---------------------------------------------------------------------------


def pop_match(top: Value, pat: Value):
    """Decide the pop transitions for stack head ``top`` against pattern ``pat``.

    Returns one of ``("same",)``, ``("bind", subst)``, ``("split", R, T)``
    or ``("stuck", reason)``. When both sides are variables the one with a
    machine-generated name is bound, falling back to the pattern variable.
    """
    if isinstance(top, Var):
        if isinstance(pat, Var):
            if top.name == pat.name:
                return ("same",)
            if is_fresh_name(top.name) and not is_fresh_name(pat.name):
                return ("bind", single(top.name, pat))
            return ("bind", single(pat.name, top))
        if occurs(top.name, pat):
            return ("stuck", "occurs")
        return ("bind", single(top.name, pat))
    if isinstance(pat, Var):
        if occurs(pat.name, top):
            return ("stuck", "occurs")
        return ("bind", single(pat.name, top))
    if top.symbol != pat.symbol:
        return ("stuck", "clash")
    if len(top.args) != len(pat.args):
        return ("stuck", "arity")
    return ("split", top.args, pat.args)


def pops_of(loc: str, values: tuple) -> Term:
    """``a<t_n>;...;a<t_1>`` for ``values = (t_1..t_n)``, with no trailing skip."""
    if not values:
        return SKIP
    out: Term = Pop(loc, values[0])
    for v in values[1:]:
        out = Seq(Pop(loc, v), out)
    return out


# ---------------------------------------------------------------------------
# Small-step machine
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class State:
    memory: Memory
    term: Term
    continuation: tuple = ()
    accum: Subst = EMPTY_SUBST

    def key(self):
        return (self.memory, self.term, self.continuation, self.accum)

    def render(self) -> str:
        k = " ".join(print_term(t) for t in self.continuation) or "ε"
        return f"({self.memory}) | {print_term(self.term)} | {k}"


@dataclass(frozen=True, slots=True)
class Success:
    memory: Memory
    accum: Subst


@dataclass(frozen=True, slots=True)
class Stuck:
    reason: str
    state: State | None = None


@dataclass(frozen=True, slots=True)
class Next:
    states: tuple


def initial_state(memory: Memory, m: Term) -> State:
    return State(memory, m, (), EMPTY_SUBST)


def _bind(state: State, rest: Memory, s: Subst, scope) -> State:
    cont = tuple(apply_subst(s, k) for k in state.continuation)
    acc = compose_subst(s, state.accum)
    if scope is not None:
        acc = acc.restrict(scope)
    return State(rest.apply(s), SKIP, cont, acc)


def step(s: State, scope: frozenset | None = None):
    """One machine transition. ``scope`` limits which variables the accumulator keeps."""
    m = s.term
    match m:
        case Skip():
            if not s.continuation:
                return Success(s.memory, s.accum)
            return Next((State(s.memory, s.continuation[0], s.continuation[1:], s.accum),))
        case Seq(h, t):
            return Next((State(s.memory, h, (t,) + s.continuation, s.accum),))
        case Star(b):
            return Next((
                State(s.memory, SKIP, s.continuation, s.accum),
                State(s.memory, Seq(b, m), s.continuation, s.accum),
            ))
        case Sum(l, r):
            return Next((
                State(s.memory, l, s.continuation, s.accum),
                State(s.memory, r, s.continuation, s.accum),
            ))
        case Zero():
            return Stuck("zero", s)
        case Push(v, loc):
            return Next((State(s.memory.push(loc, v), SKIP, s.continuation, s.accum),))
        case New(x, body):
            return Next((State(s.memory, rename_bound(x, fresh_name(), body), s.continuation, s.accum),))
        case Pop(loc, pat):
            top = s.memory.top(loc)
            if top is None:
                return Stuck("empty_pop", s)
            rest = s.memory.pop(loc)
            r = pop_match(top, pat)
            kind = r[0]
            if kind == "same":
                return Next((State(rest, SKIP, s.continuation, s.accum),))
            if kind == "bind":
                return Next((_bind(s, rest, r[1], scope),))
            if kind == "split":
                return Next((State(rest.push_many(loc, r[1]), pops_of(loc, r[2]), s.continuation, s.accum),))
            return Stuck(r[1], s)
    raise TypeError(f"not a term: {m!r}")


# ---------------------------------------------------------------------------
# Result multisets and fresh-name canonicalisation
# ---------------------------------------------------------------------------


@dataclass
class ResultMultiset:
    elements: list = field(default_factory=list)
    exhausted: bool = True

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def canonical(self) -> list:
        return [canonicalize_result(m, s) for m, s in self.elements]

    def as_set(self) -> frozenset:
        return frozenset(self.canonical())

    def memories(self) -> set:
        return {m for m, _ in self.canonical()}

    def sorted_lines(self) -> list[str]:
        return sorted({f"{m}  |  {s}" for m, s in self.canonical()})


def canonicalize_result(mem: Memory, s: Subst) -> tuple:
    """Rename machine-generated variables by order of first occurrence."""
    ren: dict[str, Value] = {}

    def visit(v: Value):
        if isinstance(v, Var):
            if is_fresh_name(v.name) and v.name not in ren:
                ren[v.name] = Var(f"%{len(ren) + 1}")
        else:
            for a in v.args:
                visit(a)

    for _, vs in mem.items_sorted():
        for v in vs:
            visit(v)
    for k in sorted(s):
        visit(s[k])
    if not ren:
        return (mem, s)
    r = Subst(ren)
    return (mem.apply(r), Subst({k: r.value(v) for k, v in s.items()}))


def result_set(res: ResultMultiset | Iterable) -> frozenset:
    if isinstance(res, ResultMultiset):
        return res.as_set()
    return frozenset(canonicalize_result(m, s) for m, s in res)


def _scope(mem: Memory, m: Term) -> frozenset:
    return frozenset(free_vars(m) | mem.vars())


# ---------------------------------------------------------------------------
# Exploration of the run tree
# ---------------------------------------------------------------------------


def explore(
    mem: Memory,
    m: Term,
    budget: Budget = DEFAULT_BUDGET,
    strategy: str = "bfs",
    dedup: bool = False,
    prune: Callable[[Memory], bool] | None = None,
    on_stuck: Callable[[Stuck], None] | None = None,
) -> ResultMultiset:
    """Enumerate successful runs from ``(mem, m, ε)``.

    ``prune(memory)`` returning true discards a state. With ``dedup`` each
    distinct state is expanded once, which turns the multiset into a set
    but lets searches over finite state spaces terminate.
    """
    if strategy == "iddfs":
        return _explore_iddfs(mem, m, budget, prune, on_stuck)
    if strategy != "bfs":
        raise ValueError(f"unknown strategy {strategy!r}")
    scope = _scope(mem, m)
    out: list = []
    exhausted = True
    frontier = deque([(initial_state(mem, m), 0)])
    seen = set()
    expanded = 0
    while frontier:
        st, depth = frontier.popleft()
        if dedup:
            k = st.key()
            if k in seen:
                continue
            seen.add(k)
        expanded += 1
        if expanded > budget.max_states:
            exhausted = False
            break
        r = step(st, scope)
        if isinstance(r, Success):
            out.append((r.memory, r.accum))
            if len(out) >= budget.max_solutions:
                exhausted = not frontier
                break
        elif isinstance(r, Stuck):
            if on_stuck is not None:
                on_stuck(r)
        else:
            if depth + 1 > budget.max_steps_per_path:
                exhausted = False
                continue
            for nxt in r.states:
                if prune is not None and prune(nxt.memory):
                    continue
                frontier.append((nxt, depth + 1))
    return ResultMultiset(out, exhausted)


def _explore_iddfs(mem, m, budget, prune, on_stuck) -> ResultMultiset:
    scope = _scope(mem, m)
    out: list = []
    limit = 1
    while True:
        cut = False
        found_here: list = []
        stack = [(initial_state(mem, m), 0)]
        expanded = 0
        while stack:
            st, depth = stack.pop()
            expanded += 1
            if expanded > budget.max_states:
                return ResultMultiset(out, False)
            r = step(st, scope)
            if isinstance(r, Success):
                if depth == limit - 1:
                    found_here.append((r.memory, r.accum))
                continue
            if isinstance(r, Stuck):
                if on_stuck is not None and depth == limit - 1:
                    on_stuck(r)
                continue
            if depth + 1 >= limit:
                cut = True
                continue
            kids = [k for k in r.states if prune is None or not prune(k.memory)]
            for k in reversed(kids):
                stack.append((k, depth + 1))
        out.extend(found_here)
        if len(out) >= budget.max_solutions:
            return ResultMultiset(out[: budget.max_solutions], False)
        if not cut:
            return ResultMultiset(out, True)
        if limit >= budget.max_steps_per_path:
            return ResultMultiset(out, False)
        limit += 1


def trace(mem: Memory, m: Term, budget: Budget = DEFAULT_BUDGET) -> list[str]:
    """Transitions of the leftmost successful run, found depth-first.

    If no run succeeds, every visited state is listed instead.
    """
    scope = _scope(mem, m)
    visited: list[str] = []
    path: list[str] = []

    def go(st: State, depth: int) -> bool:
        if depth > budget.max_steps_per_path or len(visited) > budget.max_states:
            return False
        line = st.render()
        visited.append(line)
        path.append(line)
        r = step(st, scope)
        if isinstance(r, Success):
            return True
        if isinstance(r, Next):
            for nxt in r.states:
                if go(nxt, depth + 1):
                    return True
        else:
            visited.append(f"stuck: {r.reason}")
        path.pop()
        return False

    if go(initial_state(mem, m), 0):
        return path + ["success"]
    return visited


# ---------------------------------------------------------------------------
# Big-step evaluation
# ---------------------------------------------------------------------------


class _Eval:
    def __init__(self, budget: Budget):
        self.bound = budget.max_star_unfold
        self.limit_hit = False

    def run(self, mem: Memory, m: Term) -> list:
        match m:
            case Skip():
                return [(mem, EMPTY_SUBST)]
            case Seq(h, t):
                out = []
                for mid, s in self.run(mem, h):
                    t2 = apply_subst(s, t)
                    for end, tau in self.run(mid, t2):
                        out.append((end, compose_subst(tau, s)))
                return out
            case Star(b):
                out = []
                level = [(mem, EMPTY_SUBST)]
                for _ in range(self.bound):
                    out.extend(level)
                    nxt = []
                    for mid, s in level:
                        for end, tau in self.run(mid, apply_subst(s, b)):
                            nxt.append((end, compose_subst(tau, s)))
                    level = nxt
                    if not level:
                        return out
                out.extend(level)
                if level:
                    self.limit_hit = True
                return out
            case Sum(l, r):
                return self.run(mem, l) + self.run(mem, r)
            case Zero():
                return []
            case Push(v, loc):
                return [(mem.push(loc, v), EMPTY_SUBST)]
            case Pop(loc, pat):
                top = mem.top(loc)
                if top is None:
                    return []
                rest = mem.pop(loc)
                r = pop_match(top, pat)
                if r[0] == "same":
                    return [(rest, EMPTY_SUBST)]
                if r[0] == "bind":
                    return [(rest.apply(r[1]), r[1])]
                if r[0] == "split":
                    return self.run(rest.push_many(loc, r[1]), pops_of(loc, r[2]))
                return []
            case New(x, body):
                y = fresh_name()
                return [(end, s.without(y)) for end, s in self.run(mem, rename_bound(x, y, body))]
        raise TypeError(f"not a term: {m!r}")


def big_eval(mem: Memory, m: Term, budget: Budget = DEFAULT_BUDGET) -> ResultMultiset:
    ev = _Eval(budget)
    scope = _scope(mem, m)
    res = ev.run(mem, m)
    return ResultMultiset([(t, s.restrict(scope)) for t, s in res], not ev.limit_hit)


# ---------------------------------------------------------------------------
# Machine equivalence and refinement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    ok: bool
    kind: str
    memory: Memory | None = None
    left_only: frozenset = frozenset()
    right_only: frozenset = frozenset()
    checked: int = 0
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return f"{self.kind} ({self.checked} memories)"
        parts = [f"{self.kind} on memory {self.memory}"]
        if self.left_only:
            parts.append("left only: " + ", ".join(sorted(f"{m} | {s}" for m, s in self.left_only)))
        if self.right_only:
            parts.append("right only: " + ", ".join(sorted(f"{m} | {s}" for m, s in self.right_only)))
        if self.detail:
            parts.append(self.detail)
        return "; ".join(parts)


CONSISTENT = "ConsistentUpToBudget"
COUNTEREXAMPLE = "Counterexample"


def _with_bound(b: Budget, n: int) -> Budget:
    return Budget(b.max_steps_per_path, b.max_solutions, n, b.max_states)


def machine_equiv(
    a: Term,
    b: Term,
    memories: Iterable[Memory],
    budget: Budget = Budget(max_star_unfold=4),
    mode: str = "equiv",
) -> Verdict:
    """Compare result sets of ``a`` and ``b`` on each memory.

    ``mode="refines"`` checks that every result of ``a`` is a result of
    ``b``. When Kleene star cuts a search short the comparison becomes a
    bounded containment: results at unfolding bound n must appear at bound
    2n+2 on the other side.
    """
    if mode not in ("equiv", "refines"):
        raise ValueError(f"unknown mode {mode!r}")
    count = 0
    n = budget.max_star_unfold
    for mem in memories:
        count += 1
        ra, rb = big_eval(mem, a, budget), big_eval(mem, b, budget)
        sa, sb = ra.as_set(), rb.as_set()
        if ra.exhausted and rb.exhausted:
            left = sa - sb
            right = sb - sa if mode == "equiv" else frozenset()
        else:
            big = _with_bound(budget, 2 * n + 2)
            left = sa - big_eval(mem, b, big).as_set()
            right = frozenset()
            if mode == "equiv":
                right = sb - big_eval(mem, a, big).as_set()
        if left or right:
            return Verdict(False, COUNTEREXAMPLE, mem, left, right, count)
    return Verdict(True, CONSISTENT, checked=count)
