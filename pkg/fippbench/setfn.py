import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Union

from .codec import CodeLike, FinSet, SeqCode, canon_code, set_of
from .streams import CodeSequence, EvPeriodic, InfiniteSet, canonical_chain_sequence, evens

logger = logging.getLogger(__name__)


class NotCertifiedError(ValueError):
    pass


@dataclass(frozen=True)
class AllBig:
    pass


@dataclass(frozen=True)
class RefutedBy:
    witness: SeqCode


@dataclass(frozen=True)
class Unknown:
    reason: str = ""


CylinderVerdict = Union[AllBig, RefutedBy, Unknown]
CylinderOracle = Callable[[FinSet, int], CylinderVerdict]


@dataclass(frozen=True)
class SetFunction:
    """
    F on finite sets, evaluated on codes through set_of so that it is
    extensional by construction.
    """
    name: str
    evaluator: Callable[[FinSet], int]
    cylinder_oracle: Optional[CylinderOracle] = None

    def __call__(self, l: CodeLike) -> int:
        return self.evaluator(set_of(l))

    def on_set(self, A: FinSet) -> int:
        return self.evaluator(A)


def eval_setfn(F: SetFunction, l: CodeLike) -> int:
    return F(l)


def _min_or_zero(xs: Iterator[int]) -> int:
    # min ∅ := 0
    return min(xs, default=0)


def _parity_value(A: FinSet) -> int:
    return _min_or_zero(x for x in A if x % 2) + _min_or_zero(x for x in A if not x % 2) + 2


def _parity_cylinder(S: FinSet, k: int) -> CylinderVerdict:
    # A = S ∪ T with T ⊆ (k, ∞); min odd / min even come from S when S has them
    if len(S) <= _parity_value(S):
        return RefutedBy(canon_code(S))
    has_odd = any(x % 2 for x in S)
    has_even = any(not x % 2 for x in S)
    if has_odd and has_even:
        return AllBig()
    # one large point of the missing parity pushes F past |S| + 1
    missing = 1 if not has_odd else 0
    q = k + 1
    if q % 2 != missing:
        q += 1
    while True:
        A = S.union((q,))
        if len(A) <= _parity_value(A):
            return RefutedBy(canon_code(A))
        q += 2


def parity_min_F() -> SetFunction:
    """F(A) = min(A ∩ odd) + min(A ∩ even) + 2 with min ∅ := 0."""
    return SetFunction("parity", _parity_value, _parity_cylinder)


def _const_cylinder(c: int) -> CylinderOracle:
    def oracle(S: FinSet, k: int) -> CylinderVerdict:
        if len(S) > c:
            return AllBig()
        return RefutedBy(canon_code(S))
    return oracle


def const_F(c: int) -> SetFunction:
    if c < 0:
        raise ValueError("constant must be a natural")
    return SetFunction(f"const:{c}", lambda A: c, _const_cylinder(c))


def _is_constant_on(f: EvPeriodic, A: FinSet) -> bool:
    return len({f(x) for x in A}) <= 1


def coloring_F(f: EvPeriodic) -> SetFunction:
    """F(A) = min m (|A| ≤ m or f|A not constant) = |A| if f is constant on A, else 0."""
    def value(A: FinSet) -> int:
        return len(A) if _is_constant_on(f, A) else 0

    def oracle(S: FinSet, k: int) -> CylinderVerdict:
        # a non-constant S stays non-constant in every superset, where F = 0
        if not _is_constant_on(f, S):
            return AllBig()
        return RefutedBy(canon_code(S))

    return SetFunction(f"coloring:{f}:{f.n}", value, oracle)


@dataclass(frozen=True)
class Stable:
    index: int
    value: int


@dataclass(frozen=True)
class Violated:
    i: int
    j: int
    value_i: int
    value_j: int


@dataclass(frozen=True)
class Inconclusive:
    depth: int


StabilityVerdict = Union[Stable, Violated, Inconclusive]


def _verdict(values: List[int]) -> StabilityVerdict:
    """
    Stable when the values stop changing in the first half; Violated when
    they change at least twice in the second half; a single late change
    proves nothing either way.
    """
    depth = len(values) - 1
    if depth < 2:
        return Inconclusive(depth)
    changes = [j for j in range(1, len(values)) if values[j] != values[j - 1]]
    late = [j for j in changes if j > depth // 2]
    if not late:
        return Stable(changes[-1] if changes else 0, values[-1])
    if len(late) == 1:
        return Inconclusive(depth)
    j = late[-1]
    return Violated(j - 1, j, values[j - 1], values[j])


def _probe(F: SetFunction, seq: CodeSequence, depth: int) -> StabilityVerdict:
    values = [F(seq(m)) for m in range(depth + 1)]
    verdict = _verdict(values)
    logger.debug("probe %s over %s to depth %d: %s", F.name, seq.name, depth, verdict)
    return verdict


def probe_AS(F: SetFunction, chain: CodeSequence, depth: int) -> StabilityVerdict:
    if not chain.nested:
        raise NotCertifiedError(f"sequence {chain.name} carries no nestedness guarantee")
    return _probe(F, chain, depth)


def probe_ASNIS(F: SetFunction, seq: CodeSequence, depth: int) -> StabilityVerdict:
    if seq.converges_to is None:
        raise NotCertifiedError(f"sequence {seq.name} carries no weak-convergence guarantee")
    return _probe(F, seq, depth)


def asnis_witness_parity() -> CodeSequence:
    """A_{l_m} = (evens ∩ [2m]) ∪ {2m+1}: weakly converges to the evens."""
    return CodeSequence(lambda m: canon_code(FinSet(tuple(range(0, 2 * m + 1, 2)) + (2 * m + 1,))),
                        name="asnis-witness-parity", converges_to=evens())


@dataclass(frozen=True)
class Value:
    value: int


@dataclass(frozen=True)
class Unstable:
    depth: int


def limit_value(F: SetFunction, A: InfiniteSet, depth: int):
    verdict = _probe(F, canonical_chain_sequence(A), depth)
    if isinstance(verdict, Stable):
        return Value(verdict.value)
    return Unstable(depth)


@dataclass(frozen=True)
class Point:
    value: int
    d: int


@dataclass(frozen=True)
class NotFoundUpTo:
    budget: int


# widest search window; every subset of it is visited
MAX_SUBSET_BUDGET = 16


def _check_budget(budget: int) -> None:
    if budget > MAX_SUBSET_BUDGET:
        raise ValueError(f"budget {budget} is over {MAX_SUBSET_BUDGET}: the search visits 2^budget subsets")


def _tails(lo: int, hi: int) -> Iterator[tuple]:
    """Subsets of (lo, hi], smallest first, then lexicographically."""
    pool = range(lo + 1, hi + 1)
    for size in range(len(pool) + 1):
        yield from itertools.combinations(pool, size)


def stability_point(F: SetFunction, A: InfiniteSet, budget: int):
    """
    Least d ≤ budget such that every l with A_l ∩ [d] = A ∩ [d] and elements
    ≤ d + budget has F(l) = F(A ∩ [d]).
    """
    _check_budget(budget)
    for d in range(budget + 1):
        base = A.upto(d)
        c = F.on_set(base)
        if all(F.on_set(base.union(t)) == c for t in _tails(d, d + budget)):
            return Point(c, d)
    return NotFoundUpTo(budget)


def cylinder_bigness(F: SetFunction, S: FinSet, k: int, budget: int) -> CylinderVerdict:
    """
    Does every l with A_l ∩ [k] = S satisfy |A_l| > F(l)? Exact when F has a
    cylinder oracle; otherwise only refutations over (k, k + budget] count.
    """
    if not S.issubset(FinSet(tuple(range(k + 1)))):
        raise ValueError(f"{S} is not a subset of [{k}]")
    if F.cylinder_oracle is not None:
        return F.cylinder_oracle(S, k)
    _check_budget(budget)
    for t in _tails(k, k + budget):
        A = S.union(t)
        if len(A) <= F.on_set(A):
            return RefutedBy(canon_code(A))
    return Unknown(f"no refutation with elements ≤ {k + budget}")
