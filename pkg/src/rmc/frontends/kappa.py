"""A small stack calculus with pattern abstraction.

``Abs(p, M)`` pops a value matching pattern ``p`` and runs ``M`` with the
pattern's variables bound; ``PushVar(v)`` pushes a value; ``Comp`` runs
its parts left to right. Patterns are variables or ``pair`` constructions.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..syntax import Fun, Pop, Push, Subst, Term, Value, Var, canonicalize, new_many, seq, value_vars


@dataclass(frozen=True)
class Comp:
    items: tuple = ()


@dataclass(frozen=True)
class PushVar:
    value: Value


@dataclass(frozen=True)
class Abs:
    pattern: Value
    body: "KappaTerm"


KappaTerm = Comp | PushVar | Abs


def pair(a: Value, b: Value) -> Fun:
    return Fun("pair", (a, b))


def pattern_vars(p: Value) -> list[str]:
    if isinstance(p, Var):
        return [p.name]
    if isinstance(p, Fun) and p.symbol == "pair" and len(p.args) == 2:
        a, b = pattern_vars(p.args[0]), pattern_vars(p.args[1])
        if set(a) & set(b):
            raise ValueError(f"pattern {p} binds a variable twice")
        return a + b
    raise ValueError(f"{p} is not a pattern (variables and pairs only)")


def _encode(k: KappaTerm) -> Term:
    match k:
        case PushVar(v):
            return Push(v)
        case Comp(items):
            return seq(*(_encode(i) for i in items))
        case Abs(p, body):
            return new_many(pattern_vars(p), seq(Pop("_", p), _encode(body)))
    raise TypeError(k)


def encode_kappa(k: KappaTerm) -> Term:
    return canonicalize(_encode(k))


def let(e: KappaTerm, p: Value, body: KappaTerm) -> KappaTerm:
    """``let e = p in body``: run ``e`` and bind its result by ``p`` in ``body``."""
    return Comp((e, Abs(p, body)))


def run_kappa(k: KappaTerm, stack: tuple) -> tuple | None:
    """Direct evaluator on closed stacks: None when a pattern fails to match."""

    def match(p: Value, v: Value, env: dict) -> bool:
        if isinstance(p, Var):
            env[p.name] = v
            return True
        return isinstance(v, Fun) and v.symbol == p.symbol and len(v.args) == len(p.args) and all(
            match(a, b, env) for a, b in zip(p.args, v.args)
        )

    def go(k: KappaTerm, st: tuple, env: dict) -> tuple | None:
        match k:
            case PushVar(v):
                out = Subst(env).value(v)
                if value_vars(out):
                    raise ValueError(f"unbound variable in {v}")
                return st + (out,)
            case Comp(items):
                for i in items:
                    st = go(i, st, env)
                    if st is None:
                        return None
                return st
            case Abs(p, body):
                if not st:
                    return None
                inner = dict(env)
                for x in pattern_vars(p):
                    inner.pop(x, None)
                if not match(p, st[-1], inner):
                    return None
                return go(body, st[:-1], inner)
        raise TypeError(k)

    return go(k, tuple(stack), {})
