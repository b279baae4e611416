"""The acceptance criteria, one test each, at their stated sizes and tolerances."""

import random
from collections import Counter

from rmc import Memory, alpha_eq, dual, parse_term
from rmc.gen import TermGen, TypedGen, random_memories, random_memory, random_value
from rmc.machine import Budget, big_eval, explore, machine_equiv
from rmc.rewrite import check_confluence, nf_decompose, normalize, one_step_reducts
from rmc.semantics import (
    DenotationBounds,
    compare_denotation_machine,
    cap,
    cup,
    delta_n,
    epsilon_n,
    eta_n,
    mu_n,
    seq_compose,
    tensor,
)
from rmc.syntax import EMPTY_SUBST, SKIP, Fun, Seq, Star, Subst, Var, const, has_sum, seq
from rmc.types import Polymorphic, accepts_memory, check_progress, effect, output_depths_ok, principal_type
from rmc.unify import encode_equations, equal_up_to_renaming, equation_vars, mgu

C, D, E = const("c"), const("d"), const("e")


def mem(*vals, loc="_"):
    return Memory({loc: list(vals)})


# 1 -------------------------------------------------------------------------


def test_criterion_01_duality_involution(report):
    rng = random.Random(1)
    gen = TermGen(rng, locs=("_", "a"))
    terms = [gen(rng.randint(1, 14)) for _ in range(1000)]
    bad = [m for m in terms if not alpha_eq(dual(dual(m)), m)]
    report(1, not bad, f"{len(terms) - len(bad)}/1000 terms satisfy dual(dual(M)) = M")


# 2 -------------------------------------------------------------------------


def test_criterion_02_permutation_example(report):
    closed = parse_term("E X Y Z.<X>;<Y>;<Z>;[X];[Z];[Y]")
    out = explore(mem(E, D, C), closed).as_set()
    back = explore(mem(C, E, D), dual(closed)).as_set()
    ok_closed = out == {(mem(C, E, D), EMPTY_SUBST)} and back == {(mem(E, D, C), EMPTY_SUBST)}
    # As written the variables are free, so the run also reports what they matched.
    opened = parse_term("<X>;<Y>;<Z>;[X];[Z];[Y]")
    res = explore(mem(E, D, C), opened).as_set()
    ok_open = {m for m, _ in res} == {mem(C, E, D)} and all(set(s) <= {"X", "Y", "Z"} for _, s in res)
    rev = explore(mem(C, E, D), dual(opened)).as_set()
    ok_open &= {m for m, _ in rev} == {mem(E, D, C)}
    report(2, ok_closed and ok_open,
           "e d c -> {(c e d, {})} and back; the open variant returns the same memories with bindings for X, Y, Z")


# 3 -------------------------------------------------------------------------


def test_criterion_03_matching_and_arbitrary(report):
    m = parse_term("E X.<X>;<X>;[X]")
    on_cc = {mm for mm, _ in explore(mem(C, C), m).as_set()}
    on_dc = explore(mem(D, C), m).as_set()
    report(3, on_cc == {mem(C)} and on_dc == frozenset(), f"on c c: {sorted(map(str, on_cc))}; on d c: {len(on_dc)} results")


# 4 -------------------------------------------------------------------------


def _random_equations(rng):
    names = [f"X{i}" for i in range(1, rng.randint(1, 4) + 1)]
    sig = (("c", 0), ("d", 0), ("f", 1), ("g", 2))
    eqs = []
    for _ in range(rng.randint(1, 3)):
        s = random_value(rng, names, sig, depth=3)
        if rng.random() < 0.5:
            t = random_value(rng, names, sig, depth=3)
        else:  # an instance of s, to get plenty of solvable systems
            t = Subst({x: random_value(rng, names, sig, depth=2) for x in names if rng.random() < 0.5}).value(s)
        eqs.append((s, t))
    return eqs


def test_criterion_04_unification_embeds(report):
    rng = random.Random(4)
    agree = solvable = 0
    for _ in range(200):
        eqs = _random_equations(rng)
        expected = mgu(eqs)
        res = explore(Memory(), encode_equations(eqs))
        sols = list(res)
        names = equation_vars(eqs)
        if expected is None:
            ok = len(sols) == 0 and res.exhausted
        else:
            solvable += 1
            ok = len(sols) == 1 and sols[0][0] == Memory() and equal_up_to_renaming(
                sols[0][1].restrict(names), expected, names)
        agree += ok
    report(4, agree == 200, f"{agree}/200 agree with the reference unifier ({solvable} solvable)")


# 5 -------------------------------------------------------------------------


def test_criterion_05_regex(report):
    import itertools

    from rmc.frontends.regex import accepts, machine_language, oracle_language, random_regex, regex_size

    rng = random.Random(5)
    words = ["".join(w) for n in range(6) for w in itertools.product("ab", repeat=n)]
    good = 0
    for _ in range(100):
        e = random_regex(rng, rng.randint(1, 6))
        assert regex_size(e) <= 6
        lang = oracle_language(e, "ab", 5)
        ok = machine_language(e, 5) == lang
        ok = ok and all(accepts(e, w) == (w in lang) for w in words)
        good += ok
    report(5, good == 100, f"{good}/100 regexes: language and dual acceptor match the derivative matcher")


# 6 -------------------------------------------------------------------------


def test_criterion_06_small_big_agreement(report):
    rng = random.Random(6)
    gen = TermGen(rng, locs=("_", "a"), star=False)
    good = 0
    for _ in range(300):
        m = gen(rng.randint(1, 12))
        ok = True
        for mm in random_memories(rng, 5, locs=("_", "a"), max_depth=3):
            small = Counter(explore(mm, m, Budget(max_solutions=10_000)).canonical())
            big = Counter(big_eval(mm, m).canonical())
            ok &= small == big
        good += ok
    report(6, good == 300, f"{good}/300 star-free terms: explore and big_eval give the same multisets on 5 memories")


# 7 -------------------------------------------------------------------------


def _schemas():
    """(name, builder(rng) -> (lhs, rhs), mode)."""

    def gen(rng, free=("X", "Y"), star=False, size=4):
        return TermGen(rng, free=free, locs=("_", "a"), star=star)(rng.randint(1, size))

    def val(rng, names=("Y",), depth=2):
        return random_value(rng, list(names), depth=depth)

    def loc(rng):
        return rng.choice(["_", "a"])

    from rmc.syntax import ZERO, New, Pop, Push, Subst, Sum, apply_subst

    def beta_push_pop(rng):
        n, m, t, a = gen(rng), gen(rng), val(rng), loc(rng)
        lhs = New("X", seq(n, Push(t, a), Pop(a, Var("X")), m))
        return lhs, apply_subst(Subst({"X": t}), seq(n, m))

    def beta_pop_push(rng):
        n, m, t, a = gen(rng), gen(rng), val(rng), loc(rng)
        lhs = New("X", seq(n, Push(Var("X"), a), Pop(a, t), m))
        return lhs, apply_subst(Subst({"X": t}), seq(n, m))

    def ups_var(rng):
        a, x = loc(rng), Var(rng.choice(["X", "Y"]))
        return seq(Push(x, a), Pop(a, x)), SKIP

    def ups_dec1(rng):
        a, s, t = loc(rng), val(rng, ("X", "Y")), val(rng, ("X", "Y"))
        return seq(Push(Fun("f", (s,)), a), Pop(a, Fun("f", (t,)))), seq(Push(s, a), Pop(a, t))

    def ups_dec2(rng):
        a = loc(rng)
        s1, s2, t1, t2 = (val(rng, ("X", "Y")) for _ in range(4))
        return (seq(Push(Fun("g", (s1, s2)), a), Pop(a, Fun("g", (t1, t2)))),
                seq(Push(s1, a), Push(s2, a), Pop(a, t2), Pop(a, t1)))

    def ups_clash(rng):
        a, s, t1, t2 = loc(rng), val(rng, ("X", "Y")), val(rng, ("X", "Y")), val(rng, ("X", "Y"))
        return seq(Push(Fun("f", (s,)), a), Pop(a, Fun("g", (t1, t2)))), ZERO

    def omega_l(rng):
        a = loc(rng)
        return seq(Push(Fun("f", (Fun("g", (Var("X"), val(rng))),)), a), Pop(a, Var("X"))), ZERO

    def omega_r(rng):
        a = loc(rng)
        return seq(Push(Var("X"), a), Pop(a, Fun("g", (val(rng), Fun("f", (Var("X"),)))))), ZERO

    def nu_drop(rng):
        m = gen(rng, free=("Y",))
        return New("X", m), m

    def nu_left(rng):
        m, n = gen(rng, free=("Y",)), gen(rng)
        return seq(m, New("X", n)), New("X", seq(m, n))

    def nu_right(rng):
        m, n = gen(rng), gen(rng, free=("Y",))
        return seq(New("X", m), n), New("X", seq(m, n))

    def nu_sum(rng):
        m, n = gen(rng), gen(rng)
        return New("X", Sum(m, n)), Sum(New("X", m), New("X", n))

    def nu_swap(rng):
        m = gen(rng, free=("X", "Y", "Z"))
        return New("X", New("Z", m)), New("Z", New("X", m))

    def pi(rng):
        s, t = val(rng, ("X", "Y")), val(rng, ("X", "Y"))
        return seq(Push(s, "a"), Pop("_", t)), seq(Pop("_", t), Push(s, "a"))

    def eta(rng):
        a = loc(rng)
        return New("X", seq(Pop(a, Var("X")), Push(Var("X"), a))), SKIP

    ka = {
        "seq-assoc": lambda r: ((lambda m, n, p: (Seq(m, Seq(n, p)), Seq(Seq(m, n), p)))(gen(r), gen(r), gen(r))),
        "seq-unit-l": lambda r: (lambda m: (Seq(SKIP, m), m))(gen(r)),
        "seq-unit-r": lambda r: (lambda m: (Seq(m, SKIP), m))(gen(r)),
        "sum-comm": lambda r: (lambda m, n: (Sum(m, n), Sum(n, m)))(gen(r), gen(r)),
        "sum-assoc": lambda r: ((lambda m, n, p: (Sum(m, Sum(n, p)), Sum(Sum(m, n), p)))(gen(r), gen(r), gen(r))),
        "sum-idem": lambda r: (lambda m: (Sum(m, m), m))(gen(r)),
        "sum-zero": lambda r: (lambda m: (Sum(m, ZERO), m))(gen(r)),
        "dist-l": lambda r: ((lambda m, n, p: (Seq(Sum(m, n), p), Sum(Seq(m, p), Seq(n, p))))(gen(r), gen(r), gen(r))),
        "dist-r": lambda r: ((lambda m, n, p: (Seq(p, Sum(m, n)), Sum(Seq(p, m), Seq(p, n))))(gen(r), gen(r), gen(r))),
        "zero-l": lambda r: (lambda m: (Seq(ZERO, m), ZERO))(gen(r)),
        "zero-r": lambda r: (lambda m: (Seq(m, ZERO), ZERO))(gen(r)),
        "star-unfold-l": lambda r: (lambda m: (Star(m), Sum(SKIP, Seq(m, Star(m)))))(gen(r, size=3)),
        "star-unfold-r": lambda r: (lambda m: (Star(m), Sum(SKIP, Seq(Star(m), m))))(gen(r, size=3)),
    }
    out = [
        ("beta push-pop", beta_push_pop, "equiv"),
        ("beta pop-push", beta_pop_push, "equiv"),
        ("upsilon var", ups_var, "equiv"),
        ("upsilon decompose/1", ups_dec1, "equiv"),
        ("upsilon decompose/2", ups_dec2, "equiv"),
        ("upsilon clash", ups_clash, "equiv"),
        ("omega left", omega_l, "equiv"),
        ("omega right", omega_r, "equiv"),
        ("nu drop", nu_drop, "equiv"),
        ("nu float left", nu_left, "equiv"),
        ("nu float right", nu_right, "equiv"),
        ("nu sum", nu_sum, "equiv"),
        ("nu swap", nu_swap, "equiv"),
        ("pi", pi, "equiv"),
        ("eta", eta, "refines"),
    ]
    out += [(f"KA {k}", f, "equiv") for k, f in ka.items()]
    return out


def test_criterion_07_axiom_soundness(report):
    rng = random.Random(7)
    budget = Budget(max_star_unfold=3, max_solutions=10_000)
    failures = []
    for name, build, mode in _schemas():
        for _ in range(100):
            lhs, rhs = build(rng)
            mems = random_memories(rng, 3, locs=("_", "a"), max_depth=3)
            v = machine_equiv(lhs, rhs, mems, budget, mode=mode)
            if not v.ok:
                failures.append(f"{name}: {v}")
                break
    report(7, not failures, f"{len(_schemas())} schemas x 100 instances x 3 memories" + ("; " + failures[0] if failures else ""))


def test_criterion_07b_conditional_star_laws(report):
    # M;N <= N  implies  M^*;N <= N,  and dually on the right, on concrete instances.
    cases = [("<c>;[c]", "[c]"), ("E X.<X>;[X]", "[d]"), ("0", "<c>")]
    budget = Budget(max_star_unfold=4)
    mems = [Memory(), mem(C), mem(D, C), mem(Var("A"))]
    ok = True
    for m_src, n_src in cases:
        m, n = parse_term(m_src), parse_term(n_src)
        if machine_equiv(seq(m, n), n, mems, budget, "refines").ok:
            ok &= machine_equiv(seq(Star(m), n), n, mems, budget, "refines").ok
        if machine_equiv(seq(n, m), n, mems, budget, "refines").ok:
            ok &= machine_equiv(seq(n, Star(m)), n, mems, budget, "refines").ok
    report(7, ok, "conditional star laws hold as refinements on sample instances")


# 8 and 9 -------------------------------------------------------------------


def _closed_terms(n=300, seed=8, max_size=25):
    rng = random.Random(seed)
    gen = TermGen(rng, free=(), locs=("_", "a"), star=False)
    return [gen(rng.randint(1, max_size)) for _ in range(n)]


def test_criterion_08_confluence(report):
    bad, exhaustive = [], 0
    for i, m in enumerate(_closed_terms()):
        r = check_confluence(m, max_paths=200, seed=i)
        exhaustive += r.complete
        if not r.ok:
            bad.append(m)
    report(8, not bad, f"{300 - len(bad)}/300 terms confluent ({exhaustive} searched exhaustively, rest by 200 random paths)")


def test_criterion_09_normal_form_shape(report):
    bad = 0
    for m in _closed_terms():
        nf, done = normalize(m)
        try:
            nf_decompose(nf)
        except Exception:
            bad += 1
            continue
        bad += not done
    report(9, bad == 0, f"{300 - bad}/300 normal forms decompose into prefix normal forms")


# 10 ------------------------------------------------------------------------


def test_criterion_10_converse_law(report):
    rng = random.Random(10)
    gen = TermGen(rng, free=(), locs=("_", "a"), star=False)
    budget = Budget(max_solutions=10_000)
    refined = equal = sum_free = 0
    for _ in range(100):
        m = gen(rng.randint(1, 8))
        mmm = seq(m, dual(m), m)
        mems = random_memories(rng, 3, locs=("_", "a"), max_depth=3)
        refined += machine_equiv(m, mmm, mems, budget, "refines").ok
        if not has_sum(m):
            sum_free += 1
            equal += machine_equiv(m, mmm, mems, budget, "equiv").ok
    report(10, refined == 100 and equal == sum_free,
           f"M <= M;M';M on {refined}/100; equality on {equal}/{sum_free} sum-free terms")


# 11 ------------------------------------------------------------------------


def _typed_memory(rng, m, extra):
    need = effect(m).get("_").min_in
    return Memory({"_": [random_value(rng, [], depth=2) for _ in range(need + extra)]})


def test_criterion_11_types(report):
    rng = random.Random(11)
    gen = TypedGen(rng, star=True)
    sr_bad = prog_bad = flip_bad = out_bad = 0
    runs = 0
    for i in range(300):
        m = gen(rng.randint(1, 10))
        e = effect(m)
        for _, n in one_step_reducts(m):
            sr_bad += not e.subset_of(effect(n))
        nf, _ = normalize(m, fuel=50)
        sr_bad += not e.subset_of(effect(nf))
        for extra in (0, 1):
            mm = _typed_memory(rng, m, extra)
            assert accepts_memory(m, mm)
            try:
                res = check_progress(mm, m, Budget(max_states=2_000, max_solutions=200))
            except AssertionError:
                prog_bad += 1
                continue
            runs += 1
            out_bad += not all(output_depths_ok(m, mm, o) for o, _ in res)
        p, q = principal_type(dual(m)), principal_type(m)
        if isinstance(p, Polymorphic):
            flip_bad += not (isinstance(q, Polymorphic) and p.effect == q.effect.dual())
        else:
            flip_bad += p != q.flip()
    ok = sr_bad == prog_bad == flip_bad == out_bad == 0
    report(11, ok, f"300 typed terms: {sr_bad} subject-reduction, {prog_bad} progress ({runs} runs), "
                   f"{out_bad} output-arity, {flip_bad} duality failures")


# 12 ------------------------------------------------------------------------


def test_criterion_12_typed_eta(report):
    rng = random.Random(12)
    eta = parse_term("E X.<X>;[X]")
    mems = [random_memory(rng, max_depth=4) for _ in range(50)]
    mems = [m for m in mems if m.depth("_") >= 1] + [mem(Var("A")), mem(C, Fun("f", (Var("B"),)))]
    on_nonempty = machine_equiv(eta, SKIP, mems)
    on_empty = machine_equiv(eta, SKIP, [Memory()])
    report(12, on_nonempty.ok and not on_empty.ok,
           f"equal on {on_nonempty.checked} non-empty memories; distinguished on the empty memory")


# 13 ------------------------------------------------------------------------


def test_criterion_13_frobenius(report):
    rng = random.Random(13)
    ident = SKIP

    def t(m, mo, n, ni):
        return tensor(m, mo, n, ni)

    d, mu, e, h = delta_n, mu_n, epsilon_n, eta_n
    laws = {
        "frobenius left": (seq_compose(t(d(), 2, ident, 1), t(ident, 1, mu(), 2)), seq_compose(mu(), d()), 2),
        "frobenius right": (seq_compose(t(ident, 1, d(), 1), t(mu(), 1, ident, 1)), seq_compose(mu(), d()), 2),
        "special": (seq_compose(d(), mu()), ident, 1),
        "extra": (seq_compose(h(), e()), ident, 0),
        "monoid assoc": (seq_compose(t(mu(), 1, ident, 1), mu()), seq_compose(t(ident, 1, mu(), 2), mu()), 3),
        "monoid unit l": (seq_compose(t(h(), 1, ident, 1), mu()), ident, 1),
        "monoid unit r": (seq_compose(t(ident, 1, h(), 0), mu()), ident, 1),
        "comonoid coassoc": (seq_compose(d(), t(d(), 2, ident, 1)), seq_compose(d(), t(ident, 1, d(), 1)), 1),
        "comonoid counit l": (seq_compose(d(), t(e(), 0, ident, 1)), ident, 1),
        "comonoid counit r": (seq_compose(d(), t(ident, 1, e(), 1)), ident, 1),
        "snake": (seq_compose(t(ident, 1, cup(), 0), t(cap(), 0, ident, 1)), ident, 1),
        "snake mirrored": (seq_compose(t(cup(), 2, ident, 1), t(ident, 1, cap(), 2)), ident, 1),
    }
    failed = []
    for name, (lhs, rhs, arity) in laws.items():
        mems = [random_memory(rng, depths={"_": arity + rng.randint(0, 1)}) for _ in range(25)]
        if not machine_equiv(lhs, rhs, mems).ok:
            failed.append(name)
    target = parse_term("E X.<X>;<X>;[X];[X]")
    composites = [laws["frobenius left"][0], laws["frobenius right"][0], seq_compose(mu(), d())]
    mems = [random_memory(rng, depths={"_": 2 + rng.randint(0, 1)}) for _ in range(25)]
    for i, c in enumerate(composites):
        if not machine_equiv(c, target, mems).ok:
            failed.append(f"composite {i}")
    report(13, not failed, f"{len(laws)} laws and 3 composites" + (f"; failed: {failed}" if failed else ""))


# 14 ------------------------------------------------------------------------


CONCAT = """
concat([], L, L).
concat([H|T], L, [H|R]) :- concat(T, L, R).
"""


def test_criterion_14_prolog(report):
    from rmc.frontends.prolog import dual_derivable, encode_prolog, list_value, parse_goal, parse_prolog, sld_solve, solve

    prog = parse_prolog(CONCAT)
    fwd, ex1 = solve(parse_goal("concat([a],[b],L)"), prog)
    ok = ex1 and fwd and len(fwd) == 1 and fwd[0].args[2] == list_value([const("a"), const("b")])
    rev_goal = parse_goal("concat(L1,L2,[a,b])")
    rev, ex2 = solve(rev_goal, prog)
    oracle, ex3 = sld_solve(rev_goal, prog)
    from rmc.unify import is_variant

    ok &= ex2 and ex3 and len(rev) == 3 and len(oracle) == 3
    ok &= all(any(is_variant([a], [b]) for b in oracle) for a in rev)
    # The marker: every success ends with it popped and only the instance left.
    term = encode_prolog(rev_goal, prog)
    res = explore(Memory({"_": [rev_goal]}), term)
    ok &= all(m.depth("_") == 1 and "end" not in str(m) for m, _ in res)
    # Without the final marker pop, runs stopping mid-resolution would also succeed.
    partial = explore(Memory({"_": [rev_goal]}), seq(*_chain_without_end(term)), Budget(max_solutions=50))
    ok &= len(partial) > len(res)
    ground = parse_prolog("p(a).\nq(a) :- p(a).")
    ok &= dual_derivable(parse_goal("q(a)"), ground) and not dual_derivable(parse_goal("q(b)"), ground)
    report(14, bool(ok), f"forward: {len(fwd)} answer; reverse: {len(rev)} splits (oracle {len(oracle)}); "
                         "marker protocol and bottom-up dual checked")


def _chain_without_end(term):
    from rmc.syntax import chain_items

    items, end = chain_items(term)
    assert items[-1].__class__.__name__ == "Pop"
    return items[:-1]


# 15 ------------------------------------------------------------------------


def test_criterion_15_turing(report):
    from rmc.frontends.turing import encode_turing, initial_memory, is_halted, parse_turing, run_machine, simulate

    tm = parse_turing("initial: i\nhalt: h\nblank: 0\ni 1 -> i 1 R\ni 0 -> h 1 R\n")
    got = run_machine(tm, "11")
    res = explore(initial_memory(tm, "11"), encode_turing(tm), dedup=True)
    halted = [m for m, _ in res if is_halted(tm, m)]
    ok = got == {"111"} == {simulate(tm, "11")} and len(halted) == 1 and halted[0].stack("q") == (const("h"),)
    report(15, ok, f"machine tapes {sorted(got)}, simulator {simulate(tm, '11')!r}")


# 16 ------------------------------------------------------------------------


def test_criterion_16_petri(report):
    from rmc.frontends.petri import marking, parse_petri, reachable_machine, reachable_oracle

    net = parse_petri("t1: p -> q\nt2: q -> s\nt3: s, s -> p, q\n")
    sizes, ok = [], True
    for k in range(1, 5):
        start = marking({"p": k})
        a, b = reachable_machine(net, start), reachable_oracle(net, start)
        ok &= a == b
        sizes.append(len(a))
    report(16, ok, f"reachable sets from p=1..4 have sizes {sizes} on both sides")


# 17 ------------------------------------------------------------------------


def test_criterion_17_interaction_nets(report):
    from rmc.frontends.inet import ADDITION, add_config, evaluate, nat_value, run_machine

    ok, n_cases = True, 0
    for m in range(4):
        for n in range(3):
            c = add_config(m, n)
            got = run_machine(ADDITION, c)
            want = evaluate(ADDITION, c)
            ok &= len(got) == 1 and got[0] == want and nat_value(want[0]) == m + n
            n_cases += 1
    report(17, ok, f"{n_cases} additions reduce to the evaluator's interface")


# 18 ------------------------------------------------------------------------


def test_criterion_18_gcl(report):
    from rmc.frontends.gcl import MAX_PROGRAM, execute, parse_gcl, run_machine

    prog = parse_gcl(MAX_PROGRAM)
    agree = 0
    for a in range(4):
        for b in range(4):
            cells = {"a": a, "b": b, "c": 0}
            agree += run_machine(prog, cells) == execute(prog, cells)
    loop = parse_gcl("do !a >= !b -> b := !b + 1 od")
    raw = run_machine(loop, {"a": 2, "b": 0}, strict_loops=False)
    strict = run_machine(loop, {"a": 2, "b": 0}, strict_loops=True)
    filtered = strict == execute(loop, {"a": 2, "b": 0}) and strict < raw
    report(18, agree == 16 and filtered, f"{agree}/16 inputs agree; loop exits filtered ({len(raw)} raw -> {len(strict)})")


# 19 ------------------------------------------------------------------------


def test_criterion_19_relational_semantics(report):
    rng = random.Random(19)
    sig = (("c", 0), ("f", 1))
    gen = TypedGen(rng, sig=sig, star=False)
    good, checked = 0, 0
    for _ in range(100):
        m = gen(rng.randint(1, 7))
        v = compare_denotation_machine(m, DenotationBounds(3, 3), signature=sig)
        good += v.ok
        checked += v.checked
    report(19, good == 100, f"{good}/100 terms: denotation equals machine on {checked} input stacks")
