"""A relational stack machine with first-order unification, and tools around it."""

from .memory import EMPTY_MEMORY, Memory, parse_memory
from .parsing import ArityError, ParseError, parse_term, parse_value, print_term
from .syntax import (
    DEFAULT_LOC,
    SKIP,
    ZERO,
    Fun,
    New,
    Pop,
    Push,
    Seq,
    Skip,
    Star,
    Subst,
    Sum,
    Var,
    Zero,
    alpha_eq,
    apply_subst,
    canonicalize,
    compose_subst,
    dual,
    free_vars,
)

__version__ = "0.1.0"

__all__ = [
    "EMPTY_MEMORY", "Memory", "parse_memory",
    "ArityError", "ParseError", "parse_term", "parse_value", "print_term",
    "DEFAULT_LOC", "SKIP", "ZERO", "Fun", "New", "Pop", "Push", "Seq", "Skip", "Star",
    "Subst", "Sum", "Var", "Zero", "alpha_eq", "apply_subst", "canonicalize",
    "compose_subst", "dual", "free_vars",
]
