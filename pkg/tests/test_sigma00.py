import itertools
import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from fippbench.codec import encode_seq, pair
from fippbench.sigma00 import (Add, Compare, Const, FormulaSyntaxError, Member, Mul, Pair, Quant, UnboundSetError,
                               UnboundVariableError, Var, compile_bar, compile_closed, evaluate, forall_f,
                               free_variables, mentions_f, modulus, parse, pretty, term_bound, term_value, threshold)
from fippbench.streams import extend_zero, zeros

from formulas import FREE_VARS, random_formula, random_term, with_prefix


def test_parse_examples():
    assert parse("exists i<5. pair(i,0) in f") == Quant("exists", "i", Const(5), Member(Pair(Var("i"), Const(0))))
    phi = parse("forall i<x. i in f -> i<x", free_vars=["x"])
    assert free_variables(phi) == {"x"}
    with pytest.raises(UnboundSetError):
        parse("i in g")


def test_parse_precedence():
    assert parse("x*x+1 = 2", ["x"]) == Compare("=", Add(Mul(Var("x"), Var("x")), Const(1)), Const(2))
    # implication associates to the right
    phi = parse("0=0 -> 1=1 -> 2=2")
    assert phi.op == "->" and phi.right.op == "->"
    assert parse("!(0=1) & 1=1").op == "&"


@pytest.mark.parametrize("text", ["0 =", "forall i 3. 0=0", "pair(1) in f", "0 = 0 )", "x in f $"])
def test_syntax_errors_carry_a_position(text):
    with pytest.raises(FormulaSyntaxError) as err:
        parse(text)
    assert err.value.position >= 0


def test_unbound_variables():
    with pytest.raises(UnboundVariableError) as err:
        parse("x < y", free_vars=["x"])
    assert err.value.names == ["y"]
    with pytest.raises(UnboundVariableError):
        evaluate(parse("x = 0"), {}, zeros())


def test_evaluate_examples():
    assert evaluate(parse("0 = 0"), {}, zeros())
    assert evaluate(parse("pair(0,1) in f"), {}, extend_zero(encode_seq([1])))
    assert evaluate(parse("forall i<3. pair(i,0) in f"), {}, zeros())
    assert not evaluate(parse("exists i<4. pair(i,1) in f"), {}, zeros())
    assert evaluate(parse("x <= y", ["x", "y"]), {"x": 1, "y": 2}, zeros())
    assert not evaluate(parse("x*x = y + 1", ["x", "y"]), {"x": 2, "y": 2}, zeros())


def test_term_bound_examples():
    assert term_bound(Const(5), 9) == 5
    assert term_bound(Add(Mul(Var("x"), Var("x")), Const(1)), 3) == 10
    assert term_bound(Var("x"), 7) == 7


def test_modulus_examples():
    assert modulus(parse("x < 3 & 0 = 0", ["x"]), 5) == 0
    assert modulus(parse("pair(x,0) in f", ["x"]), 2) == pair(2, 0) + 1
    # the quantifier lifts z to its bound
    assert modulus(parse("exists i<4. pair(i,0) in f"), 0) == pair(4, 0) + 1


def test_mentions_f():
    assert mentions_f(parse("exists i<2. pair(i,0) in f"))
    assert not mentions_f(parse("forall i<2. i < 3"))


@settings(max_examples=200)
@given(seed=st.integers(min_value=0, max_value=2 ** 32))
def test_pretty_reparses(seed):
    phi = random_formula(random.Random(seed), FREE_VARS)
    assert parse(pretty(phi), FREE_VARS) == phi


@settings(max_examples=200)
@given(seed=st.integers(min_value=0, max_value=2 ** 32), z=st.integers(min_value=0, max_value=4))
def test_terms_are_monotone(seed, z):
    rng = random.Random(seed)
    t = random_term(rng, FREE_VARS, depth=2)
    low = {v: rng.randint(0, z) for v in FREE_VARS}
    high = {v: rng.randint(low[v], z) for v in FREE_VARS}
    assert term_value(t, low) <= term_value(t, high) <= term_bound(t, z)


@settings(max_examples=1000, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2 ** 32), z=st.integers(min_value=0, max_value=2))
def test_modulus_soundness(seed, z):
    rng = random.Random(seed)
    phi = random_formula(rng, FREE_VARS)
    y = modulus(phi, z)
    prefix = [rng.randint(0, 1) for _ in range(y)]
    f, g = with_prefix(prefix, rng), with_prefix(prefix, rng)
    for x, w in itertools.product(range(z + 1), repeat=2):
        env = {"x": x, "y": w}
        assert evaluate(phi, env, f) == evaluate(phi, env, g)


def test_bar_examples():
    bar = compile_bar(parse("0=0"))
    assert all(bar.decide(zeros().values(m)) for m in range(6))

    bar = compile_bar(parse("pair(0,1) in f"))
    assert bar.threshold_value() == pair(0, 1) + 1
    one = extend_zero(encode_seq([1]))
    assert all(bar.decide(one.values(m)) for m in range(11))
    assert not all(bar.decide(zeros().values(m)) for m in range(bar.threshold_value() + 1))
    assert bar.holds_along(one) and not bar.holds_along(zeros())


def test_threshold_substitutes_the_quantifier_bound():
    t = threshold(parse("forall i<3. pair(i,0) in f"))
    assert term_value(t, {}) == pair(3, 0) + 1


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2 ** 32))
def test_bar_equivalence(seed):
    phi = random_formula(random.Random(seed), ())
    bar = compile_bar(phi)
    bound = bar.certified_bound()
    for prefix in itertools.product((0, 1), repeat=modulus(phi, 0)):
        f = extend_zero(encode_seq(prefix))
        values = f.values(bound + 1)
        assert evaluate(phi, {}, f) == all(bar.decide(values[:m]) for m in range(bound + 1))


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2 ** 32))
def test_bar_is_stable_past_the_bound(seed):
    phi = random_formula(random.Random(seed), ())
    bar = compile_bar(phi)
    start = max(bar.threshold_value(), modulus(phi, 0))
    g = with_prefix([], random.Random(seed + 1))
    values = g.values(start + 6)
    decisions = {bar.decide(values[:m]) for m in range(start, start + 6)}
    assert len(decisions) == 1


def test_closed_decision_examples():
    assert compile_closed(parse("0=0"), 1).holds(encode_seq([]))
    B = compile_closed(parse("pair(0,0) in f"), 1)
    assert not B.holds(encode_seq([1]))
    assert B.holds(encode_seq([0]))
    # values above n are clamped to n
    assert not compile_closed(parse("pair(0,1) in f"), 1).holds(encode_seq([0]))
    assert compile_closed(parse("pair(0,1) in f"), 1).holds(encode_seq([5]))
    with pytest.raises(ValueError):
        compile_closed(parse("0=0"), -1)


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2 ** 32))
def test_closed_decision_matches_all_functions(seed):
    phi = random_formula(random.Random(seed), (), max_bound=1)
    assert forall_f(phi, 1) == compile_closed(phi, 1).forall_certified()


def test_forall_f_examples():
    assert forall_f(parse("pair(0,0) in f | pair(0,1) in f"), 1)
    assert not forall_f(parse("pair(0,0) in f | pair(0,1) in f"), 2)
    assert not forall_f(parse("exists i<3. pair(i,1) in f"), 1)
