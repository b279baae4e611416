"""Horn clauses over algebraic terms, compiled to a goal stack.

A clause ``A :- A1, ..., An`` becomes ``E xs.<A>;[A1];...;[An]`` with
``xs`` the clause's variables, and a query ``Q`` against clauses ``C``
becomes ``[end];[Q];(C1 + ... + Cn)^*;<end>``. The marker ``end`` sits
under the goals, so popping it means every goal was resolved. Run on a
memory holding ``Q`` itself, the surviving memory shows the answer.

Source format: one clause per ``.``-terminated sentence, ``%`` comments,
``[a, b | T]`` list sugar for ``cons``/``nil``, and ``?- goal.`` for the
query.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass

from ..machine import Budget, explore
from ..memory import Memory
from ..syntax import DEFAULT_LOC, Fun, Pop, Push, Star, Subst, Term, Value, Var, canonicalize, dual, new_many, seq, sum_of, value_vars
from ..unify import is_variant, mgu

END = "end"


class ReservedSymbol(ValueError):
    pass


class PrologSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class Clause:
    head: Value
    body: tuple = ()

    def variables(self) -> list[str]:
        seen: dict[str, None] = {}
        for a in (self.head, *self.body):
            for x in _ordered_vars(a):
                seen.setdefault(x)
        return list(seen)

    def __str__(self) -> str:
        return f"{self.head}." if not self.body else f"{self.head} :- {', '.join(map(str, self.body))}."


@dataclass(frozen=True)
class PrologProgram:
    clauses: tuple
    query: Value | None = None


def _ordered_vars(v: Value) -> list[str]:
    if isinstance(v, Var):
        return [v.name]
    return [x for a in v.args for x in _ordered_vars(a)]


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_TOK = re.compile(r"\s+|%[^\n]*|(:-|\?-|[A-Za-z_][A-Za-z0-9_]*|[0-9]+|[(),.\[\]|])")


def _tokens(text: str) -> list[str]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOK.match(text, pos)
        if not m:
            raise PrologSyntaxError(f"unexpected character {text[pos]!r} at offset {pos}")
        if m.group(1):
            out.append(m.group(1))
        pos = m.end()
    return out


class _P:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0
        self.anon = itertools.count()

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        t = self.peek()
        if t is None or (expected is not None and t != expected):
            raise PrologSyntaxError(f"expected {expected or 'a token'}, found {t!r}")
        self.i += 1
        return t

    def term(self) -> Value:
        t = self.peek()
        if t == "[":
            return self.list_()
        t = self.take()
        if t == "_":
            return Var(f"_G{next(self.anon)}")
        if t[0].isupper() or t[0] == "_":
            return Var(t)
        if not (t[0].isalnum()):
            raise PrologSyntaxError(f"unexpected {t!r}")
        if self.peek() == "(":
            self.take("(")
            args = [self.term()]
            while self.peek() == ",":
                self.take(",")
                args.append(self.term())
            self.take(")")
            return Fun(t, tuple(args))
        return Fun(t, ())

    def list_(self) -> Value:
        self.take("[")
        if self.peek() == "]":
            self.take("]")
            return Fun("nil", ())
        items = [self.term()]
        while self.peek() == ",":
            self.take(",")
            items.append(self.term())
        tail: Value = Fun("nil", ())
        if self.peek() == "|":
            self.take("|")
            tail = self.term()
        self.take("]")
        for it in reversed(items):
            tail = Fun("cons", (it, tail))
        return tail

    def goals(self) -> list[Value]:
        out = [self.term()]
        while self.peek() == ",":
            self.take(",")
            out.append(self.term())
        return out


def parse_prolog(text: str) -> PrologProgram:
    p = _P(text)
    clauses, query = [], None
    while p.peek() is not None:
        if p.peek() == "?-":
            p.take()
            goals = p.goals()
            if len(goals) != 1:
                raise PrologSyntaxError("queries are single atoms")
            query = goals[0]
        else:
            head = p.term()
            body = []
            if p.peek() == ":-":
                p.take()
                body = p.goals()
            clauses.append(Clause(head, tuple(body)))
        p.take(".")
    return PrologProgram(tuple(clauses), query)


def parse_goal(text: str) -> Value:
    p = _P(text)
    t = p.term()
    if p.peek() is not None:
        raise PrologSyntaxError(f"trailing input {p.peek()!r}")
    return t


def list_value(items) -> Value:
    out: Value = Fun("nil", ())
    for it in reversed(list(items)):
        out = Fun("cons", (it, out))
    return out


def show(v: Value) -> str:
    """Print with list sugar."""
    if isinstance(v, Fun) and v.symbol in ("cons", "nil"):
        items, cur = [], v
        while isinstance(cur, Fun) and cur.symbol == "cons" and len(cur.args) == 2:
            items.append(show(cur.args[0]))
            cur = cur.args[1]
        if isinstance(cur, Fun) and cur.symbol == "nil" and not cur.args:
            return "[" + ",".join(items) + "]"
        return "[" + ",".join(items) + "|" + show(cur) + "]"
    if isinstance(v, Fun) and v.args:
        return f"{v.symbol}({','.join(show(a) for a in v.args)})"
    return str(v)


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------


def _symbols(v: Value, out: set) -> set:
    if isinstance(v, Fun):
        out.add(v.symbol)
        for a in v.args:
            _symbols(a, out)
    return out


def _check_reserved(atoms) -> None:
    for a in atoms:
        if END in _symbols(a, set()):
            raise ReservedSymbol(f"symbol {END!r} is reserved for the goal-stack marker")


def encode_clause(c: Clause, loc: str = DEFAULT_LOC) -> Term:
    return new_many(c.variables(), seq(Pop(loc, c.head), *(Push(a, loc) for a in c.body)))


def encode_program(program: PrologProgram, loc: str = DEFAULT_LOC) -> Term:
    return Star(sum_of([encode_clause(c, loc) for c in program.clauses]))


def encode_prolog(query: Value, program: PrologProgram, loc: str = DEFAULT_LOC) -> Term:
    _check_reserved([query] + [a for c in program.clauses for a in (c.head, *c.body)])
    marker = Fun(END, ())
    return canonicalize(seq(Push(marker, loc), Push(query, loc), encode_program(program, loc), Pop(loc, marker)))


_SEARCH = Budget(max_steps_per_path=5_000, max_solutions=1_000, max_states=200_000)


def _dedup_variants(vals) -> list[Value]:
    out: list[Value] = []
    for v in vals:
        if not any(is_variant([v], [w]) for w in out):
            out.append(v)
    return out


def solve(query: Value, program: PrologProgram, budget: Budget = _SEARCH) -> tuple[list[Value], bool]:
    """Instances of ``query`` returned by the machine, deduplicated up to renaming.

    The query sits on the initial stack; the term pushes the same atom
    again, so unification during resolution shows up in the output memory.
    """
    term = encode_prolog(query, program)
    res = explore(Memory({DEFAULT_LOC: [query]}), term, budget)
    answers = [mem.stack(DEFAULT_LOC)[-1] for mem, _ in res if mem.depth(DEFAULT_LOC) == 1]
    return _dedup_variants(answers), res.exhausted


# ---------------------------------------------------------------------------
# Reference SLD interpreter
# ---------------------------------------------------------------------------


def _rename(c: Clause, k: int) -> Clause:
    s = Subst({x: Var(f"{x}#{k}") for x in c.variables()})
    return Clause(s.value(c.head), tuple(s.value(b) for b in c.body))


def sld_solve(query: Value, program: PrologProgram, max_depth: int = 50, max_answers: int = 1000) -> tuple[list[Value], bool]:
    """Breadth-first SLD resolution with leftmost goal selection.

    Returns instances of the query and whether the search tree was
    exhausted before ``max_depth`` resolution steps.
    """
    counter = itertools.count()
    frontier = deque([((query,), Subst(), 0)])
    answers: list[Value] = []
    complete = True
    while frontier:
        goals, s, depth = frontier.popleft()
        if not goals:
            answers.append(s.value(query))
            if len(answers) >= max_answers:
                return _dedup_variants(answers), False
            continue
        if depth >= max_depth:
            complete = False
            continue
        g, rest = s.value(goals[0]), goals[1:]
        for c in program.clauses:
            rc = _rename(c, next(counter))
            u = mgu([(g, rc.head)])
            if u is None:
                continue
            s2 = _compose(u, s)
            frontier.append((rc.body + rest, s2, depth + 1))
    return _dedup_variants(answers), complete


def _compose(u: Subst, s: Subst) -> Subst:
    out = {x: u.value(v) for x, v in s.items()}
    for x, v in u.items():
        out.setdefault(x, v)
    return Subst(out)


# ---------------------------------------------------------------------------
# Bottom-up reading through the dual
# ---------------------------------------------------------------------------


def dual_derivable(goal: Value, program: PrologProgram, max_stack: int = 4, budget: Budget = _SEARCH) -> bool:
    """Run the converse of the query term from the empty memory.

    The dual pushes facts, rewrites bodies into heads, then pops the goal
    and the marker, which is bottom-up evaluation. Stacks are bounded so the
    search over ground facts stays finite.
    """
    term = dual(encode_prolog(goal, program))
    res = explore(Memory(), term, budget, dedup=True, prune=lambda m: m.depth(DEFAULT_LOC) > max_stack + 1)
    return any(mem.depth(DEFAULT_LOC) == 0 for mem, _ in res)


def bottom_up_facts(program: PrologProgram, rounds: int = 10) -> set[Value]:
    """Naive least-fixpoint of a ground program."""
    facts: set[Value] = set()
    for _ in range(rounds):
        new = {c.head for c in program.clauses if all(b in facts for b in c.body) and not value_vars(c.head)}
        if new <= facts:
            break
        facts |= new
    return facts
