import random

import pytest

from rmc import Memory, alpha_eq, parse_term
from rmc.gen import TypedGen
from rmc.machine import machine_equiv
from rmc.semantics import (
    DenotationBounds,
    UnboundVariable,
    cap,
    compare_denotation_machine,
    cup,
    delta_n,
    denote,
    diagram_term,
    enum_closed_terms,
    epsilon_n,
    eta_n,
    identity,
    intersect,
    mu_n,
    seq_compose,
    sym,
    tensor,
    tensor_right,
    top,
)
from rmc.syntax import SKIP, Fun, Subst, apply_subst, const
from rmc.types import check_type, parse_type, principal_type

C, D = const("c"), const("d")
SIG = {"c": 0, "f": 1}
B = DenotationBounds(2, 2)


def f(x):
    return Fun("f", (x,))


def stacks(n, vals=(C, D)):
    """Every closed default-location memory of depth n over ``vals``."""
    out = [()]
    for _ in range(n):
        out = [s + (v,) for s in out for v in vals]
    return [Memory({"_": s}) for s in out]


class TestEnumeration:
    def test_constant_only(self):
        assert enum_closed_terms({"c": 0}, 1) == [C]

    def test_two_levels(self):
        assert enum_closed_terms(SIG, 2) == [C, f(C)]

    def test_no_constant(self):
        assert enum_closed_terms({"f": 1}, 3) == []

    def test_bounds_positive(self):
        with pytest.raises(ValueError):
            DenotationBounds(0, 1)


class TestDenote:
    def test_skip(self):
        assert denote(SKIP, {}, (C,), B) == {(C,)}

    def test_unit_enumerates_values(self):
        assert denote(parse_term("E X.[X]"), {}, (), B, SIG) == {(C,), (f(C),)}

    def test_pop(self):
        assert denote(parse_term("<c>"), {}, (C,), B, {"c": 0, "d": 0}) == {()}
        assert denote(parse_term("<c>"), {}, (D,), B, {"c": 0, "d": 0}) == set()

    def test_unbound(self):
        with pytest.raises(UnboundVariable):
            denote(parse_term("[X]"), {}, (), B, SIG)

    def test_valuation(self):
        assert denote(parse_term("[f(X)]"), {"X": C}, (), B, SIG) == {(f(C),)}

    def test_star_truncated(self):
        out = denote(parse_term("(<c>;[f(c)] + <f(c)>;[f(f(c))])^*"), {}, (C,), DenotationBounds(3, 1), SIG)
        assert out == {(C,), (f(C),)}

    def test_substitution_matches_valuation(self):
        rng = random.Random(61)
        gen = TypedGen(rng, free=("X",))
        for _ in range(60):
            m = gen(rng.randint(1, 8), delta=0)
            for t in enum_closed_terms(SIG, 2):
                for inp in [(C,), (f(C),), (C, C)]:
                    assert denote(m, {"X": t}, inp, B, SIG) == denote(apply_subst(Subst({"X": t}), m), {}, inp, B, SIG)


class TestCompare:
    def test_diagonal(self):
        assert compare_denotation_machine(parse_term("E X.<X>;[X];[X]"), B, signature={"c": 0}).ok

    def test_zero(self):
        assert compare_denotation_machine(parse_term("0"), B, signature={"c": 0}).ok

    def test_open_outputs_are_closed_up(self):
        assert compare_denotation_machine(parse_term("E X.[f(X)]"), B, signature=SIG).ok

    def test_random_typed(self):
        rng = random.Random(62)
        gen = TypedGen(rng)
        for _ in range(40):
            m = gen(rng.randint(1, 7))
            assert compare_denotation_machine(m, B, signature=SIG).ok, m


class TestDiagrams:
    @pytest.mark.parametrize("name,ty", [
        ("delta", "1 > 2"), ("epsilon", "1 > 0"), ("mu", "2 > 1"), ("eta", "0 > 1"),
        ("sigma", "2 > 2"), ("cup", "0 > 2"), ("cap", "2 > 0"), ("id", "0 > 0"),
    ])
    def test_generator_types(self, name, ty):
        assert principal_type(diagram_term(name)) == parse_type(ty)

    def test_unknown_generator(self):
        with pytest.raises(ValueError):
            diagram_term("nope")

    def test_empty_lift(self):
        m = parse_term("E X.<X>;[f(X)]")
        assert alpha_eq(tensor_right(m, 0), m)

    def test_snake(self):
        wire = seq_compose(tensor(cup(), 2, identity(1), 0), tensor_right(cap(), 1))
        assert check_type(wire, parse_type("1 > 1"))
        assert machine_equiv(wire, SKIP, stacks(1) + stacks(2)).ok

    def test_special_and_extra(self):
        assert machine_equiv(seq_compose(delta_n(1), mu_n(1)), SKIP, stacks(1) + stacks(2)).ok
        assert machine_equiv(seq_compose(eta_n(1), epsilon_n(1)), SKIP, stacks(0) + stacks(1)).ok

    def test_monoid_and_comonoid_units(self):
        mems = stacks(1) + stacks(2)
        assert machine_equiv(seq_compose(tensor_right(eta_n(1), 0), mu_n(1)), SKIP, mems).ok
        assert machine_equiv(seq_compose(delta_n(1), epsilon_n(1)), SKIP, mems).ok

    def test_commutativity(self):
        mems = stacks(2)
        assert machine_equiv(seq_compose(sym(1, 1), mu_n(1)), mu_n(1), mems).ok
        assert machine_equiv(seq_compose(delta_n(1), sym(1, 1)), delta_n(1), stacks(1)).ok

    def test_top_and_intersect(self):
        assert principal_type(top(2, 1)) == parse_type("2 > 1")
        both = intersect(parse_term("E X.<X>;[f(X)]"), parse_term("E X.<X>;[f(X)] + E X.<X>;[X]"), 1, 1)
        assert machine_equiv(both, parse_term("E X.<X>;[f(X)]"), stacks(1)).ok
        assert machine_equiv(seq_compose(top(1, 0), SKIP), epsilon_n(1), stacks(1)).ok
