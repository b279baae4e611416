"""Interaction nets in the term calculus of configurations ``<T | Δ>``.

An equation ``t = u`` of Δ is stored as ``t`` on location ``l`` and ``u``
on location ``r`` at the same height; the interface ``T`` lives on the
default location. A rule ``f(S) >< g(U)`` becomes ``E xs.l<f(S)>;r<g(U)>``:
popping the active pair hands the arguments to the machine's unifier,
which resolves ``R = S`` and ``U = V`` in place.

The encoding treats every variable equation by unification. For that to
agree with the rewriting calculus, new active pairs must arise through
shared wire names between equations, so configurations are written with
agents connected through variables (see ``add_config``).

Source format::

    add(X, X) >< z
    add(Y, s(R)) >< s(add(Y, R))
    ---
    interface: R
    add(s(z), R) = s(A)
    A = z
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from ..machine import Budget, explore
from ..memory import Memory
from ..syntax import DEFAULT_LOC, Fun, Pop, Star, Subst, Term, Value, Var, ZERO, canonicalize, new_many, seq, sum_of, value_vars
from ..unify import is_variant


class RulesetError(ValueError):
    pass


@dataclass(frozen=True)
class InetRule:
    left: Fun
    right: Fun

    def key(self) -> tuple[str, str]:
        return (self.left.symbol, self.right.symbol)

    def mirror(self) -> "InetRule":
        return InetRule(self.right, self.left)

    def variables(self) -> list[str]:
        seen: dict[str, None] = {}
        for v in (self.left, self.right):
            for x in _ordered_vars(v):
                seen.setdefault(x)
        return list(seen)

    def __str__(self) -> str:
        return f"{self.left} >< {self.right}"


@dataclass(frozen=True)
class InteractionSystem:
    rules: tuple

    @staticmethod
    def of(rules, symmetric_closure: bool = True) -> "InteractionSystem":
        """Validate a rule list, adding mirrored rules unless told not to."""
        out: dict[tuple[str, str], InetRule] = {}
        todo = list(rules)
        if symmetric_closure:
            todo += [r.mirror() for r in rules]
        for r in todo:
            _check_rule(r)
            k = r.key()
            if k in out:
                if not _same_rule(out[k], r):
                    raise RulesetError(f"two different rules for the pair {k[0]} >< {k[1]}")
                continue
            out[k] = r
        for (f, g), r in out.items():
            m = out.get((g, f))
            if m is None or not _same_rule(m, r.mirror()):
                raise RulesetError(f"rule for {f} >< {g} has no symmetric counterpart")
        return InteractionSystem(tuple(out[k] for k in _ordered_keys(todo, out)))

    def lookup(self, f: str, g: str) -> InetRule | None:
        for r in self.rules:
            if r.key() == (f, g):
                return r
        return None


def _ordered_keys(todo, out):
    seen: dict = {}
    for r in todo:
        seen.setdefault(r.key())
    return [k for k in seen if k in out]


def _same_rule(a: InetRule, b: InetRule) -> bool:
    return is_variant([a.left, a.right], [b.left, b.right])


def _ordered_vars(v: Value) -> list[str]:
    if isinstance(v, Var):
        return [v.name]
    return [x for a in v.args for x in _ordered_vars(a)]


def _check_rule(r: InetRule) -> None:
    if not isinstance(r.left, Fun) or not isinstance(r.right, Fun):
        raise RulesetError(f"both sides of {r} must be agents")
    counts = Counter(_ordered_vars(r.left) + _ordered_vars(r.right))
    bad = sorted(x for x, n in counts.items() if n != 2)
    if bad:
        raise RulesetError(f"rule {r}: variables {', '.join(bad)} must occur exactly twice")


@dataclass(frozen=True)
class Config:
    interface: tuple
    equations: tuple = field(default_factory=tuple)  # (t, u) pairs, first one on top


def encode_rule(r: InetRule) -> Term:
    return new_many(r.variables(), seq(Pop("l", r.left), Pop("r", r.right)))


def encode_inet(system: InteractionSystem) -> Term:
    if not system.rules:
        return Star(ZERO)
    return canonicalize(Star(sum_of([encode_rule(r) for r in system.rules])))


def config_to_memory(c: Config) -> Memory:
    eqs = list(reversed(c.equations))
    return Memory({
        DEFAULT_LOC: list(c.interface),
        "l": [t for t, _ in eqs],
        "r": [u for _, u in eqs],
    })


def run_machine(system: InteractionSystem, c: Config, budget: Budget = Budget(max_solutions=1000)) -> list[tuple]:
    """Interfaces of successful runs that end with both equation stacks empty."""
    res = explore(config_to_memory(c), encode_inet(system), budget)
    outs = []
    for mem, _ in res:
        if mem.depth("l") == 0 and mem.depth("r") == 0:
            u = mem.stack(DEFAULT_LOC)
            if not any(is_variant(u, w) for w in outs):
                outs.append(u)
    return outs


# ---------------------------------------------------------------------------
# Reference evaluator
# ---------------------------------------------------------------------------


def evaluate(system: InteractionSystem, c: Config, max_steps: int = 10_000) -> tuple:
    """Rewrite ``<T | Δ>`` to ``<U | ε>`` with indirection, interaction and collection."""
    counter = itertools.count()
    interface = list(c.interface)
    delta = list(c.equations)
    for _ in range(max_steps):
        if not delta:
            return tuple(interface)
        idx, eq = _pick(delta)
        del delta[idx]
        t, u = eq
        if isinstance(t, Var) or isinstance(u, Var):
            x, other = (t, u) if isinstance(t, Var) else (u, t)
            if isinstance(other, Var) and other.name == x.name:
                continue
            s = Subst({x.name: other})
            used = any(x.name in value_vars(v) for v in interface) or any(
                x.name in value_vars(a) | value_vars(b) for a, b in delta
            )
            if not used:
                raise RulesetError(f"wire {x} has no other end")
            interface = [s.value(v) for v in interface]
            delta = [(s.value(a), s.value(b)) for a, b in delta]
            continue
        rule = system.lookup(t.symbol, u.symbol)
        if rule is None:
            raise RulesetError(f"no rule for active pair {t.symbol} >< {u.symbol}")
        k = next(counter)
        ren = Subst({x: Var(f"{x}#{k}") for x in rule.variables()})
        left, right = ren.value(rule.left), ren.value(rule.right)
        delta += list(zip(t.args, left.args)) + list(zip(right.args, u.args))
    raise RuntimeError("interaction net did not normalise within the step bound")


def _pick(delta: list) -> tuple[int, tuple]:
    """Prefer variable equations so that wires are resolved before interactions."""
    for i, (t, u) in enumerate(delta):
        if isinstance(t, Var) or isinstance(u, Var):
            return i, (t, u)
    return 0, delta[0]


# ---------------------------------------------------------------------------
# Natural number addition
# ---------------------------------------------------------------------------


def nat(n: int) -> Value:
    v: Value = Fun("z", ())
    for _ in range(n):
        v = Fun("s", (v,))
    return v


def nat_value(v: Value) -> int | None:
    n = 0
    while isinstance(v, Fun) and v.symbol == "s":
        v = v.args[0]
        n += 1
    return n if isinstance(v, Fun) and v.symbol == "z" else None


ADDITION = InteractionSystem.of([
    InetRule(Fun("add", (Var("X"), Var("X"))), Fun("z", ())),
    InetRule(Fun("add", (Var("Y"), Fun("s", (Var("R"),)))), Fun("s", (Fun("add", (Var("Y"), Var("R"))),))),
])


def add_config(m: int, n: int) -> Config:
    """``<R | add(n, R) = s(A1), A1 = s(A2), ..., Am = z>`` computing ``m + n`` at ``R``.

    The first summand is unfolded into one equation per agent so that
    every interaction exposes the next active pair through a shared wire.
    """
    res = Var("R")
    if m == 0:
        return Config((res,), ((Fun("add", (nat(n), res)), Fun("z", ())),))
    wires = [Var(f"A{i}") for i in range(1, m + 1)]
    eqs = [(Fun("add", (nat(n), res)), Fun("s", (wires[0],)))]
    for i in range(1, m):
        eqs.append((wires[i - 1], Fun("s", (wires[i],))))
    eqs.append((wires[-1], Fun("z", ())))
    return Config((res,), tuple(eqs))


def parse_inet(text: str) -> tuple[InteractionSystem, Config | None]:
    from ..parsing import parse_value, parse_values

    rules_part, sep, conf_part = text.partition("---")
    rules = []
    for line in rules_part.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        lhs, arrow, rhs = line.partition("><")
        if not arrow:
            raise RulesetError(f"expected 'f(S) >< g(U)', got {line!r}")
        rules.append(InetRule(parse_value(lhs.strip()), parse_value(rhs.strip())))
    system = InteractionSystem.of(rules)
    if not sep:
        return system, None
    interface: list = []
    eqs = []
    for line in conf_part.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("interface:"):
            interface = parse_values(line.split(":", 1)[1])
            continue
        lhs, eq, rhs = line.partition("=")
        if not eq:
            raise ValueError(f"expected 't = u', got {line!r}")
        eqs.append((parse_value(lhs.strip()), parse_value(rhs.strip())))
    return system, Config(tuple(interface), tuple(eqs))
