"""Symmetric pattern matching: a finite partial isomorphism as a sum of clauses."""

from __future__ import annotations

from ..machine import Budget, big_eval
from ..memory import Memory
from ..syntax import DEFAULT_LOC, ZERO, Pop, Push, Term, Value, canonicalize, new_many, seq, sum_of, value_vars

IsoClauses = list  # of (lhs, rhs) value pairs


def encode_iso(clauses: IsoClauses) -> Term:
    """Binders are sorted by name, so flipping the clauses and dualizing agree up to alpha."""
    if not clauses:
        return ZERO
    return canonicalize(sum_of([new_many(sorted(value_vars(v) | value_vars(w)), seq(Pop(DEFAULT_LOC, v), Push(w))) for v, w in clauses]))


def flip(clauses: IsoClauses) -> IsoClauses:
    return [(w, v) for v, w in clauses]


def apply_iso(clauses: IsoClauses, v: Value, budget: Budget = Budget()) -> list[Value]:
    """Run ``[v];M`` from the empty memory and return the produced values."""
    res = big_eval(Memory(), canonicalize(seq(Push(v), encode_iso(clauses))), budget)
    return [mem.stack(DEFAULT_LOC)[-1] for mem, _ in res if mem.depth(DEFAULT_LOC) == 1]
