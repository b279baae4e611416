"""Oriented reduction rules, normalisation and normal-form comparison.

All functions expect terms in canonical sequence form (see
``syntax.canonicalize``) and return canonical terms. Positions are paths
of child indices: Seq and Sum use 0/1 for their two children, Star and
New use 0 for their body.
"""

from __future__ import annotations

import random
from collections import Counter, deque
from dataclasses import dataclass
from enum import Enum

from .syntax import (
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
    Term,
    Value,
    Var,
    Zero,
    apply_subst,
    canonicalize,
    free_vars,
    fresh_name,
    occurs,
    rename_bound,
    seq,
    single,
    value_vars,
)


class RuleId(Enum):
    KA_StarUnfold = "KA_StarUnfold"
    KA_DistL = "KA_DistL"
    KA_DistR = "KA_DistR"
    KA_SumZeroR = "KA_SumZeroR"
    KA_SumZeroL = "KA_SumZeroL"
    KA_SkipSeq = "KA_SkipSeq"
    KA_SeqZeroR = "KA_SeqZeroR"
    KA_SeqZeroL = "KA_SeqZeroL"
    Nu_Drop = "Nu_Drop"
    Nu_Float = "Nu_Float"
    Nu_SumSplit = "Nu_SumSplit"
    Beta_PushPop = "Beta_PushPop"
    Beta_PopPush = "Beta_PopPush"
    Ups_VarVar = "Ups_VarVar"
    Ups_Decompose = "Ups_Decompose"
    Ups_Clash = "Ups_Clash"
    Ups_OccursL = "Ups_OccursL"
    Ups_OccursR = "Ups_OccursR"
    Pi_Permute = "Pi_Permute"


@dataclass(frozen=True)
class Redex:
    rule: RuleId
    position: tuple
    binder: tuple | None = None

    def __str__(self) -> str:
        pos = ".".join(map(str, self.position)) or "ε"
        return f"{self.rule.value}@{pos}"


class StaleRedex(ValueError):
    pass


class NotInNF(ValueError):
    pass


def canonicalize_seq(m: Term) -> Term:
    return canonicalize(m)


# ---------------------------------------------------------------------------
# Paths
# ---------------------------------------------------------------------------


def children(m: Term) -> tuple:
    match m:
        case Seq(h, t):
            return (h, t)
        case Sum(l, r):
            return (l, r)
        case Star(b) | New(_, b):
            return (b,)
    return ()


def subterm_at(m: Term, path: tuple) -> Term:
    for i in path:
        ch = children(m)
        if i >= len(ch):
            raise StaleRedex(f"no child {i} in {type(m).__name__}")
        m = ch[i]
    return m


def replace_at(m: Term, path: tuple, new: Term) -> Term:
    if not path:
        return new
    i, rest = path[0], path[1:]
    match m:
        case Seq(h, t):
            return Seq(replace_at(h, rest, new), t) if i == 0 else Seq(h, replace_at(t, rest, new))
        case Sum(l, r):
            return Sum(replace_at(l, rest, new), r) if i == 0 else Sum(l, replace_at(r, rest, new))
        case Star(b):
            return Star(replace_at(b, rest, new))
        case New(x, b):
            return New(x, replace_at(b, rest, new))
    raise StaleRedex("path runs past a leaf")


def _is_sum_tail(t: Term) -> bool:
    return isinstance(t, Sum) or (isinstance(t, Seq) and isinstance(t.head, Sum) and isinstance(t.tail, Skip))


def _is_zero_tail(t: Term) -> bool:
    return isinstance(t, Zero) or (isinstance(t, Seq) and isinstance(t.head, Zero) and isinstance(t.tail, Skip))


def _sum_of_tail(t: Term) -> Sum:
    return t if isinstance(t, Sum) else t.head


def _next_pop(t: Term):
    """The pop at the head of sequence tail ``t`` and what follows it."""
    if isinstance(t, Seq) and isinstance(t.head, Pop):
        return t.head, t.tail
    if isinstance(t, Pop):
        return t, SKIP
    return None, None


# ---------------------------------------------------------------------------
# Redex search
# ---------------------------------------------------------------------------


def _unify_rule(push: Push, pop: Pop) -> RuleId | None:
    s, u = push.value, pop.value
    if isinstance(s, Var) and isinstance(u, Var):
        return RuleId.Ups_VarVar if s.name == u.name else None
    if isinstance(s, Fun) and isinstance(u, Fun):
        if s.symbol == u.symbol and len(s.args) == len(u.args):
            return RuleId.Ups_Decompose
        return RuleId.Ups_Clash
    if isinstance(s, Fun):
        return RuleId.Ups_OccursL if occurs(u.name, s) else None
    return RuleId.Ups_OccursR if occurs(s.name, u) else None


def _local_redexes(m: Term, path: tuple, out: list) -> None:
    match m:
        case Star():
            out.append(Redex(RuleId.KA_StarUnfold, path))
        case Sum(l, r):
            if isinstance(r, Zero):
                out.append(Redex(RuleId.KA_SumZeroR, path))
            if isinstance(l, Zero):
                out.append(Redex(RuleId.KA_SumZeroL, path))
        case Seq(h, t):
            if isinstance(h, Sum) and not _is_sum_tail(t) and not isinstance(t, Skip):
                out.append(Redex(RuleId.KA_DistL, path))
            if _is_sum_tail(t):
                out.append(Redex(RuleId.KA_DistR, path))
            if isinstance(h, Skip):
                out.append(Redex(RuleId.KA_SkipSeq, path))
            if _is_zero_tail(t):
                out.append(Redex(RuleId.KA_SeqZeroR, path))
            if isinstance(h, Zero) and not isinstance(t, Skip):
                out.append(Redex(RuleId.KA_SeqZeroL, path))
            if isinstance(t, New):
                out.append(Redex(RuleId.Nu_Float, path))
            if isinstance(h, Push):
                p, _ = _next_pop(t)
                if p is not None:
                    if p.loc == h.loc:
                        rule = _unify_rule(h, p)
                        if rule is not None:
                            out.append(Redex(rule, path))
                    else:
                        out.append(Redex(RuleId.Pi_Permute, path))
        case New(x, b):
            if x not in free_vars(b):
                out.append(Redex(RuleId.Nu_Drop, path))
            if isinstance(b, Sum):
                out.append(Redex(RuleId.Nu_SumSplit, path))
            _beta_redexes(x, b, path, out)


def _beta_redexes(x: str, body: Term, path: tuple, out: list) -> None:
    rel = (0,)
    while isinstance(body, New):
        if body.var == x:
            return
        body, rel = body.body, rel + (0,)
    cur, cpath = body, path + rel
    while isinstance(cur, Seq):
        h = cur.head
        if isinstance(h, Push):
            p, _ = _next_pop(cur.tail)
            if p is not None and p.loc == h.loc:
                if p.value == Var(x) and not occurs(x, h.value):
                    out.append(Redex(RuleId.Beta_PushPop, cpath, path))
                elif h.value == Var(x) and not occurs(x, p.value):
                    out.append(Redex(RuleId.Beta_PopPush, cpath, path))
        cur, cpath = cur.tail, cpath + (1,)


def redexes(m: Term) -> list[Redex]:
    """Every redex of ``m``, in pre-order of positions."""
    out: list[Redex] = []

    def walk(n: Term, path: tuple):
        _local_redexes(n, path, out)
        for i, c in enumerate(children(n)):
            walk(c, path + (i,))

    walk(m, ())
    return out


# ---------------------------------------------------------------------------
# Contraction
# ---------------------------------------------------------------------------


def _contract(n: Term, rule: RuleId) -> Term:
    match rule:
        case RuleId.KA_StarUnfold:
            return Sum(SKIP, Seq(n.body, n))
        case RuleId.KA_DistL:
            s = n.head
            return Sum(Seq(s.left, n.tail), Seq(s.right, n.tail))
        case RuleId.KA_DistR:
            s = _sum_of_tail(n.tail)
            return Sum(Seq(n.head, s.left), Seq(n.head, s.right))
        case RuleId.KA_SumZeroR:
            return n.left
        case RuleId.KA_SumZeroL:
            return n.right
        case RuleId.KA_SkipSeq:
            return n.tail
        case RuleId.KA_SeqZeroR | RuleId.KA_SeqZeroL:
            return ZERO
        case RuleId.Nu_Drop:
            return n.body
        case RuleId.Nu_SumSplit:
            return Sum(New(n.var, n.body.left), New(n.var, n.body.right))
        case RuleId.Nu_Float:
            head, nw = n.head, n.tail
            y, body = nw.var, nw.body
            if y in free_vars(head):
                z = fresh_name()
                body, y = rename_bound(y, z, body), z
            return New(y, Seq(head, body))
        case RuleId.Pi_Permute:
            p, rest = _next_pop(n.tail)
            return Seq(p, Seq(n.head, rest))
        case RuleId.Ups_VarVar:
            return _next_pop(n.tail)[1]
        case RuleId.Ups_Decompose:
            p, rest = _next_pop(n.tail)
            loc = n.head.loc
            pushes = [Push(t, loc) for t in n.head.value.args]
            pops = [Pop(loc, s) for s in reversed(p.value.args)]
            return seq(*pushes, *pops, rest)
        case RuleId.Ups_Clash | RuleId.Ups_OccursL | RuleId.Ups_OccursR:
            return ZERO
    raise StaleRedex(f"rule {rule} is not local")


def _check(m: Term, r: Redex) -> None:
    found = [x for x in redexes(m) if x == r]
    if not found:
        raise StaleRedex(f"{r} is not a redex of the term")


def apply_redex(m: Term, r: Redex, check: bool = True) -> Term:
    """Contract ``r`` in ``m`` and re-canonicalise."""
    if check:
        _check(m, r)
    if r.rule in (RuleId.Beta_PushPop, RuleId.Beta_PopPush):
        return canonicalize(_apply_beta(m, r))
    n = subterm_at(m, r.position)
    return canonicalize(replace_at(m, r.position, _contract(n, r.rule)))


def _apply_beta(m: Term, r: Redex) -> Term:
    binder = subterm_at(m, r.binder)
    x = binder.var
    rel = r.position[len(r.binder) + 1:]
    pair = subterm_at(binder.body, rel)
    push, (pop, rest) = pair.head, _next_pop(pair.tail)
    s = single(x, pop.value if r.rule is RuleId.Beta_PopPush else push.value)
    body = replace_at(binder.body, rel, rest)
    depth = 0
    while depth < len(rel) and rel[depth] == 0 and isinstance(subterm_at(body, (0,) * depth), New):
        depth += 1
    prefix = (0,) * depth
    inner = subterm_at(body, prefix)
    body = replace_at(body, prefix, apply_subst(s, inner))
    return replace_at(m, r.binder, New(x, body))


# ---------------------------------------------------------------------------
# Strategies
# ---------------------------------------------------------------------------


def _innermost_leftmost(rs: list[Redex]) -> Redex:
    def inside(p, q):
        return len(q) > len(p) and q[: len(p)] == p

    inner = [r for r in rs if not any(inside(r.position, q.position) for q in rs)]
    return min(inner, key=lambda r: (r.position, r.rule.value))


def normalize(m: Term, fuel: int = 10_000, trace: list | None = None) -> tuple[Term, bool]:
    """Reduce leftmost-innermost until no redex remains or ``fuel`` steps are spent."""
    m = canonicalize(m)
    for _ in range(fuel):
        rs = redexes(m)
        if not rs:
            return m, True
        r = _innermost_leftmost(rs)
        if trace is not None:
            trace.append(r)
        m = apply_redex(m, r, check=False)
    return m, not redexes(m)


def one_step_reducts(m: Term) -> list[tuple[Redex, Term]]:
    return [(r, apply_redex(m, r, check=False)) for r in redexes(m)]


# ---------------------------------------------------------------------------
# Alpha keys and normal forms
# ---------------------------------------------------------------------------


def alpha_key(m: Term) -> str:
    """A string naming the alpha class of ``m``: binders renamed by depth."""
    out: list[str] = []
    _akey(m, {}, 0, out)
    return "".join(out)


def _kval(v: Value, env: dict) -> str:
    if isinstance(v, Var):
        return env.get(v.name, v.name)
    if not v.args:
        return v.symbol
    return v.symbol + "(" + ",".join(_kval(a, env) for a in v.args) + ")"


def _akey(m: Term, env: dict, depth: int, out: list) -> None:
    match m:
        case Push(v, loc):
            out.append(f"[{_kval(v, env)}]{loc}")
        case Pop(loc, v):
            out.append(f"{loc}<{_kval(v, env)}>")
        case Seq(h, t):
            out.append("(")
            _akey(h, env, depth, out)
            out.append(";")
            _akey(t, env, depth, out)
            out.append(")")
        case Sum(l, r):
            out.append("(")
            _akey(l, env, depth, out)
            out.append("+")
            _akey(r, env, depth, out)
            out.append(")")
        case Star(b):
            out.append("(")
            _akey(b, env, depth, out)
            out.append(")^")
        case New(x, b):
            name = f"#{depth}"
            out.append(f"E{name}.")
            _akey(b, {**env, x: name}, depth + 1, out)
        case Skip():
            out.append("*")
        case Zero():
            out.append("0")


@dataclass(frozen=True)
class PrefixNF:
    binders: tuple
    pops: tuple  # (loc, value) in execution order
    pushes: tuple

    def key(self) -> tuple:
        """Binder names replaced by order of first occurrence."""
        bound = set(self.binders)
        ren: dict[str, Var] = {}

        def visit(v):
            if isinstance(v, Var):
                if v.name in bound and v.name not in ren:
                    ren[v.name] = Var(f"#{len(ren)}")
            else:
                for a in v.args:
                    visit(a)

        for _, v in self.pops + self.pushes:
            visit(v)
        s = Subst(ren)
        return (
            tuple((a, s.value(v)) for a, v in self.pops),
            tuple((a, s.value(v)) for a, v in self.pushes),
        )

    def to_term(self) -> Term:
        items = [Pop(a, v) for a, v in self.pops] + [Push(v, a) for a, v in self.pushes]
        body: Term = seq(*items) if len(items) != 1 else items[0]
        for x in reversed(self.binders):
            body = New(x, body)
        return body


def _summands(m: Term) -> list:
    if isinstance(m, Sum):
        return _summands(m.left) + _summands(m.right)
    return [m]


def nf_decompose(m: Term, require_closed: bool = True) -> list[PrefixNF]:
    if isinstance(m, Zero):
        return []
    out = []
    for s in _summands(m):
        binders = []
        while isinstance(s, New):
            binders.append(s.var)
            s = s.body
        items = []
        while isinstance(s, Seq):
            items.append(s.head)
            s = s.tail
        if not isinstance(s, Skip):
            items.append(s)
        pops, pushes = [], []
        for it in items:
            if isinstance(it, Pop) and not pushes:
                pops.append((it.loc, it.value))
            elif isinstance(it, Push):
                pushes.append((it.loc, it.value))
            else:
                raise NotInNF(f"unexpected {type(it).__name__} in summand")
        used: set[str] = set()
        for _, v in pops + pushes:
            used |= value_vars(v)
        if len(set(binders)) != len(binders) or not set(binders) <= used:
            raise NotInNF("binder is unused or repeated")
        if require_closed and not used <= set(binders):
            raise NotInNF("summand has free variables")
        out.append(PrefixNF(tuple(binders), tuple(pops), tuple(pushes)))
    return out


def _summand_key(s: Term):
    try:
        (p,) = nf_decompose(s, require_closed=False)
        return ("nf", p.key())
    except (NotInNF, ValueError):
        return ("term", alpha_key(s))


def nf_equal(a: Term, b: Term) -> bool:
    """Multiset equality of summands, modulo binder permutation and alpha."""
    ka = Counter(_summand_key(s) for s in ([] if isinstance(a, Zero) else _summands(a)))
    kb = Counter(_summand_key(s) for s in ([] if isinstance(b, Zero) else _summands(b)))
    return ka == kb


# ---------------------------------------------------------------------------
# Empirical confluence
# ---------------------------------------------------------------------------


@dataclass
class ConfluenceReport:
    ok: bool
    normal_forms: list
    terms_visited: int
    complete: bool
    paths: int = 0

    def __bool__(self):
        return self.ok


def check_confluence(
    m: Term,
    max_paths: int = 200,
    max_terms: int = 120,
    fuel: int = 5000,
    seed: int = 0,
) -> ConfluenceReport:
    """Compare the normal forms reached by different reduction choices.

    Small reduction graphs are searched exhaustively (up to alpha). When the
    graph has more than ``max_terms`` nodes, ``max_paths`` maximal reduction
    sequences are followed instead, each picking redexes at random.
    """
    m = canonicalize(m)
    seen = {alpha_key(m)}
    queue = deque([m])
    leaves: list[Term] = []
    complete = True
    while queue:
        t = queue.popleft()
        rs = redexes(t)
        if not rs:
            leaves.append(t)
            continue
        for r in rs:
            u = apply_redex(t, r, check=False)
            k = alpha_key(u)
            if k not in seen:
                seen.add(k)
                queue.append(u)
        if len(seen) > max_terms:
            complete = False
            break
    paths = 0
    if not complete:
        rng = random.Random(seed)
        leaves = []
        # Normal form reached from each term already walked through. Meeting
        # such a term ends the current path there; the result is still one
        # maximal reduction sequence, spliced from two sampled ones.
        reached: dict = {}
        for _ in range(max_paths):
            t, walked = m, []
            for _ in range(fuel):
                k = alpha_key(t)
                if k in reached:
                    t = reached[k]
                    break
                walked.append(k)
                rs = redexes(t)
                if not rs:
                    break
                t = apply_redex(t, rng.choice(rs), check=False)
            else:
                if redexes(t):
                    return ConfluenceReport(False, leaves + [t], len(seen), False, paths)
            for k in walked:
                reached[k] = t
            leaves.append(t)
            paths += 1
    distinct = list({alpha_key(x): x for x in leaves}.values())
    ok = all(nf_equal(distinct[0], x) for x in distinct[1:])
    return ConfluenceReport(ok, leaves, len(seen), complete, paths)


def check_local_confluence(m: Term, fuel: int = 2000) -> bool:
    """Every pair of one-step reducts normalises to nf-equal terms."""
    nfs = [normalize(u, fuel)[0] for _, u in one_step_reducts(canonicalize(m))]
    return all(nf_equal(nfs[0], n) for n in nfs[1:])
