import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from fippbench.codec import FinSet, encode_seq, set_of
from fippbench.setfn import (AllBig, Inconclusive, NotCertifiedError, NotFoundUpTo, Point, RefutedBy, SetFunction,
                             Stable, Unknown, Unstable, Value, Violated, asnis_witness_parity, coloring_F, const_F,
                             cylinder_bigness, eval_setfn, limit_value, parity_min_F, probe_AS, probe_ASNIS,
                             stability_point)
from fippbench.streams import (EvPeriodic, InfiniteSet, canonical_chain_sequence, color_class, evens, naturals,
                               padded_chain, raw_sequence, weak_convergence_check, window_sequence, ConvergedAt)

from formulas import ev_periodic

infinite_sets = st.builds(
    lambda prefix, period: InfiniteSet(EvPeriodic.of(prefix, tuple(period) + (1,), 1)),
    st.lists(st.integers(min_value=0, max_value=1), max_size=4),
    st.lists(st.integers(min_value=0, max_value=1), max_size=3),
)


def test_setfn_examples():
    F = parity_min_F()
    assert eval_setfn(F, encode_seq([])) == 2
    assert F(encode_seq([4, 3, 2])) == 3 + 2 + 2
    assert F(encode_seq([3, 2, 4, 3])) == F(encode_seq([2, 3, 4]))
    assert const_F(3)(encode_seq([9])) == 3
    with pytest.raises(ValueError):
        const_F(-1)


def test_coloring_setfn():
    F = coloring_F(EvPeriodic.of((), (0, 1)))
    assert F(encode_seq([0, 2, 4])) == 3
    assert F(encode_seq([0, 1])) == 0
    assert F(encode_seq([])) == 0


def test_probe_examples():
    assert probe_AS(parity_min_F(), canonical_chain_sequence(evens()), 10) == Stable(0, 2)
    assert probe_AS(parity_min_F(), canonical_chain_sequence(evens()), 1) == Inconclusive(1)
    assert probe_ASNIS(parity_min_F(), asnis_witness_parity(), 3) == Violated(2, 3, 7, 9)


def test_one_late_change_is_not_a_violation():
    # A = {0, 12, 13, ...}: F is 2 up to index 12 and 15 from index 13 on
    chain = canonical_chain_sequence(InfiniteSet(EvPeriodic.of((1,) + (0,) * 11, (1,), 1)))
    assert probe_AS(parity_min_F(), chain, 20) == Inconclusive(20)
    assert probe_AS(parity_min_F(), chain, 30) == Stable(13, 15)


def test_repeated_late_changes_violate():
    chain = canonical_chain_sequence(evens())
    assert probe_AS(coloring_F(EvPeriodic.of((), (0, 1))), chain, 10) == Violated(9, 10, 5, 6)


def test_asnis_witness_converges_to_the_evens():
    seq = asnis_witness_parity()
    assert seq.converges_to == evens()
    assert seq.set_at(2) == FinSet((0, 2, 4, 5))
    assert isinstance(weak_convergence_check(seq, evens(), FinSet((0, 1, 2, 3, 4)), 10), ConvergedAt)


def test_probes_need_guarantees():
    with pytest.raises(NotCertifiedError):
        probe_AS(parity_min_F(), window_sequence(), 10)
    with pytest.raises(NotCertifiedError):
        probe_ASNIS(parity_min_F(), raw_sequence(lambda m: FinSet((m,))), 10)


@settings(max_examples=100, deadline=None)
@given(A=infinite_sets, extra=st.lists(st.integers(min_value=0, max_value=6), max_size=2),
       stride=st.integers(min_value=1, max_value=3), lag=st.integers(min_value=0, max_value=3))
def test_parity_is_stable_along_nested_chains(A, extra, stride, lag):
    chain = padded_chain(A, extra, stride, lag)
    assert isinstance(probe_AS(parity_min_F(), chain, 50), Stable)


@settings(max_examples=100, deadline=None)
@given(f=ev_periodic(n=2))
def test_coloring_setfn_fails_along_its_infinite_classes(f):
    for c in sorted(set(f.period)):
        verdict = probe_AS(coloring_F(f), canonical_chain_sequence(color_class(f, c)), 40)
        assert isinstance(verdict, Violated)
        assert verdict.value_j > verdict.value_i


def test_limit_value():
    assert limit_value(parity_min_F(), naturals(), 10) == Value(3)
    assert limit_value(parity_min_F(), evens(), 10) == Value(2)
    assert limit_value(coloring_F(EvPeriodic.of((), (0, 1))), evens(), 10) == Unstable(10)


def test_stability_point():
    assert stability_point(parity_min_F(), naturals(), 8) == Point(3, 1)
    assert stability_point(const_F(4), evens(), 3) == Point(4, 0)
    assert stability_point(coloring_F(EvPeriodic.of((), (0, 1))), evens(), 8) == NotFoundUpTo(8)


@pytest.mark.parametrize("F, S, k, expected", [
    (const_F(0), FinSet((0,)), 0, AllBig()),
    (const_F(2), FinSet((0, 1)), 1, RefutedBy(encode_seq([0, 1]))),
    (const_F(1), FinSet((0, 2)), 2, AllBig()),
    (parity_min_F(), FinSet((0, 1, 2, 4)), 4, AllBig()),
])
def test_cylinder_examples(F, S, k, expected):
    assert cylinder_bigness(F, S, k, 4) == expected


def _refutes(F, S, k, verdict):
    A = set_of(verdict.witness)
    return A.upto(k) == S and len(A) <= F.on_set(A)


@pytest.mark.parametrize("S, k", [
    (FinSet((0, 2)), 2),
    (FinSet((0, 2, 4, 6)), 6),
    (FinSet((1, 3, 5)), 5),
    (FinSet(()), 3),
])
def test_parity_refutations_are_genuine(S, k):
    F = parity_min_F()
    verdict = cylinder_bigness(F, S, k, 4)
    assert isinstance(verdict, RefutedBy)
    assert _refutes(F, S, k, verdict)


def test_parity_oracle_agrees_with_search():
    F = parity_min_F()
    plain = SetFunction("parity-plain", F.evaluator)
    for bits in range(1 << 5):
        S = FinSet(tuple(i for i in range(5) if bits >> i & 1))
        exact = cylinder_bigness(F, S, 4, 8)
        searched = cylinder_bigness(plain, S, 4, 8)
        if isinstance(exact, RefutedBy):
            assert _refutes(F, S, 4, exact)
        if isinstance(searched, RefutedBy):
            assert not isinstance(exact, AllBig)


def test_cylinder_without_oracle():
    assert cylinder_bigness(SetFunction("zero", lambda A: 0), FinSet((0,)), 0, 3) == Unknown(
        "no refutation with elements ≤ 3")
    verdict = cylinder_bigness(SetFunction("size", len), FinSet((0,)), 0, 3)
    assert verdict == RefutedBy(encode_seq([0]))
    with pytest.raises(ValueError):
        cylinder_bigness(const_F(0), FinSet((5,)), 2, 3)


def test_parity_is_stable_on_the_chain_of_naturals():
    assert probe_ASNIS(parity_min_F(), canonical_chain_sequence(naturals()), 20) == Stable(1, 3)


@settings(max_examples=200, deadline=None)
@given(items=st.lists(st.integers(min_value=0, max_value=20), max_size=8),
       f=ev_periodic(n=1))
def test_set_functions_are_extensional(items, f):
    other = encode_seq(list(reversed(items)) + items[:3])
    for F in (parity_min_F(), const_F(2), coloring_F(f)):
        assert eval_setfn(F, encode_seq(items)) == eval_setfn(F, other)


@settings(max_examples=50, deadline=None)
@given(A=infinite_sets, f=ev_periodic(n=1), extra=st.lists(st.integers(min_value=0, max_value=6), max_size=2),
       stride=st.integers(min_value=1, max_value=3), lag=st.integers(min_value=0, max_value=3),
       c=st.integers(min_value=0, max_value=2))
def test_asnis_stability_carries_over_to_nested_chains(A, f, extra, stride, lag, c):
    certified = [window_sequence(), asnis_witness_parity(), canonical_chain_sequence(A)]
    certified += [canonical_chain_sequence(color_class(f, v)) for v in sorted(set(f.period))]
    chain = padded_chain(A, extra, stride, lag)
    passed = []
    for F in (const_F(c), parity_min_F(), coloring_F(f)):
        if all(not isinstance(probe_ASNIS(F, seq, 30), Violated) for seq in certified):
            passed.append(F.name)
            assert not isinstance(probe_AS(F, chain, 50), Violated)
    assert passed == [f"const:{c}"]


def test_subset_searches_reject_huge_budgets():
    with pytest.raises(ValueError):
        stability_point(parity_min_F(), naturals(), 40)
    with pytest.raises(ValueError):
        cylinder_bigness(SetFunction("zero", lambda A: 0), FinSet((0,)), 0, 17)
    # an oracle answers without searching
    assert cylinder_bigness(const_F(0), FinSet((0,)), 0, 40) == AllBig()
