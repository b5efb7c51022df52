import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Tuple, Union

from .codec import SeqCode, FinSet, CodeLike, as_code, canon_code, set_of, encode_seq


@dataclass(frozen=True)
class EvPeriodic:
    """f : ℕ → [n] given by a finite prefix followed by a repeating period."""
    prefix: Tuple[int, ...]
    period: Tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, 'prefix', tuple(self.prefix))
        object.__setattr__(self, 'period', tuple(self.period))
        if not self.period:
            raise ValueError("period must be nonempty")
        if self.n < 0:
            raise ValueError("bound n must be a natural")
        bad = [v for v in self.prefix + self.period if v < 0 or v > self.n]
        if bad:
            raise ValueError(f"values {bad} outside [{self.n}]")

    @classmethod
    def of(cls, prefix: Iterable[int], period: Iterable[int], n: Optional[int] = None) -> 'EvPeriodic':
        prefix, period = tuple(prefix), tuple(period)
        if n is None:
            n = max(prefix + period, default=0)
        return cls(prefix, period, n)

    def __call__(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def values(self, m: int) -> Tuple[int, ...]:
        return tuple(self(i) for i in range(m))

    def __str__(self) -> str:
        return ",".join(map(str, self.prefix)) + ";" + ",".join(map(str, self.period))


def ev_eval(f: EvPeriodic, i: int) -> int:
    return f(i)


def prefix_code(f: EvPeriodic, m: int) -> SeqCode:
    """f̄m, the code of <f(0),...,f(m-1)>; m = 0 gives the empty sequence."""
    return encode_seq(f.values(m))


def extend_zero(s: Union[CodeLike, Sequence[int]]) -> EvPeriodic:
    """s⌢o, the zero extension of a finite sequence."""
    items = as_code(s).items if isinstance(s, (SeqCode, int)) else tuple(s)
    return EvPeriodic.of(items, (0,))


def zeros(n: int = 1) -> EvPeriodic:
    return EvPeriodic((), (0,), n)


@dataclass(frozen=True)
class InfiniteSet:
    chi: EvPeriodic

    def __post_init__(self):
        if self.chi.n != 1:
            raise ValueError("characteristic function must map into [1]")
        if 1 not in self.chi.period:
            raise ValueError("period holds no 1, so the set is finite")

    def __contains__(self, i: int) -> bool:
        return self.chi(i) == 1

    def upto(self, m: int) -> FinSet:
        """A ∩ [m]."""
        return FinSet(tuple(i for i in range(m + 1) if i in self))

    def __str__(self) -> str:
        return f"chi={self.chi}"


def evens() -> InfiniteSet:
    return InfiniteSet(EvPeriodic((), (1, 0), 1))


def odds() -> InfiniteSet:
    return InfiniteSet(EvPeriodic((), (0, 1), 1))


def naturals() -> InfiniteSet:
    return InfiniteSet(EvPeriodic((), (1,), 1))


def color_class(f: EvPeriodic, c: int) -> InfiniteSet:
    """f^{-1}(c) as an infinite set; c must occur in the period."""
    return InfiniteSet(EvPeriodic.of(
        (1 if v == c else 0 for v in f.prefix),
        (1 if v == c else 0 for v in f.period),
        1,
    ))


def count_witness(A: InfiniteSet, i: int) -> int:
    """Least j with |A ∩ [j-1]| = i."""
    j, seen = 0, 0
    while seen < i:
        if j in A:
            seen += 1
        j += 1
    return j


@dataclass(frozen=True)
class CodeSequence:
    """
    A sequence (l_m) of set codes. Only the constructors below set the
    guarantees: nested means A_{l_m} ⊆ A_{l_{m+1}}; converges_to is the
    infinite set the sequence weakly converges to.
    """
    generator: Callable[[int], SeqCode]
    name: str = "raw"
    nested: bool = False
    converges_to: Optional[InfiniteSet] = None

    def __call__(self, m: int) -> SeqCode:
        return self.generator(m)

    def set_at(self, m: int) -> FinSet:
        return set_of(self.generator(m))


def canonical_chain(A: InfiniteSet, m: int) -> SeqCode:
    return canon_code(A.upto(m))


def canonical_chain_sequence(A: InfiniteSet) -> CodeSequence:
    return CodeSequence(lambda m: canonical_chain(A, m), name=f"chain({A})",
                        nested=True, converges_to=A)


def window_sequence() -> CodeSequence:
    """A_{l_m} = [m] ∪ {m+2}: weakly converges to ℕ without being nested."""
    return CodeSequence(lambda m: canon_code(FinSet(tuple(range(m + 1)) + (m + 2,))),
                        name="window", converges_to=naturals())


def union_with(A: InfiniteSet, extra: Iterable[int]) -> InfiniteSet:
    """A ∪ extra for finitely many extra points."""
    extra = frozenset(extra)
    chi = A.chi
    cut = max(len(chi.prefix), max(extra, default=-1) + 1)
    return InfiniteSet(EvPeriodic(
        tuple(1 if (i in extra or chi(i)) else 0 for i in range(cut)),
        tuple(chi(i) for i in range(cut, cut + len(chi.period))),
        1,
    ))


def padded_chain(A: InfiniteSet, extra: Iterable[int] = (), stride: int = 1, lag: int = 0) -> CodeSequence:
    """A_{l_m} = (A ∩ [lag + stride·m]) ∪ extra; nested with union A ∪ extra."""
    if stride < 1 or lag < 0:
        raise ValueError("stride must be positive and lag a natural")
    extra = FinSet.of(extra)
    return CodeSequence(lambda m: canon_code(A.upto(lag + stride * m).union(extra)),
                        name=f"padded({A},{extra},{stride},{lag})",
                        nested=True, converges_to=union_with(A, extra))


def finite_chain(sets: Sequence[FinSet]) -> CodeSequence:
    """Nested chain that stops growing at its last set (finite union)."""
    sets = list(sets)
    if not sets:
        raise ValueError("finite_chain needs at least one set")
    if any(not a.issubset(b) for a, b in zip(sets, sets[1:])):
        raise ValueError("sets are not nested")
    return CodeSequence(lambda m: canon_code(sets[min(m, len(sets) - 1)]),
                        name="finite-chain", nested=True)


def interleave(s: CodeSequence, t: CodeSequence) -> CodeSequence:
    """l''_{2m} = s_m, l''_{2m+1} = t_m; converges to A when both s and t do."""
    target = None
    if s.converges_to is not None and s.converges_to == t.converges_to:
        target = s.converges_to
    return CodeSequence(lambda m: s(m // 2) if m % 2 == 0 else t(m // 2),
                        name=f"interleave({s.name},{t.name})", converges_to=target)


def raw_sequence(fn: Callable[[int], Union[SeqCode, FinSet]], name: str = "raw") -> CodeSequence:
    def gen(m: int) -> SeqCode:
        v = fn(m)
        return canon_code(v) if isinstance(v, FinSet) else v
    return CodeSequence(gen, name=name)


@dataclass(frozen=True)
class ConvergedAt:
    index: int


@dataclass(frozen=True)
class NoWitnessUpTo:
    budget: int


def weak_convergence_check(seq: CodeSequence, A: InfiniteSet, B: FinSet, budget: int):
    """
    Bounded certificate for ∃i ∀j ≥ i (A_{l_j} ∩ B = A ∩ B): the least i such
    that the equation holds for every i ≤ j ≤ budget.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    target = frozenset(x for x in B if x in A)
    start = None
    for j in range(budget + 1):
        ok = frozenset(x for x in seq.set_at(j) if x in B) == target
        if ok and start is None:
            start = j
        elif not ok:
            start = None
    if start is None:
        return NoWitnessUpTo(budget)
    return ConvergedAt(start)


@dataclass(frozen=True)
class Disagree:
    index: int


@dataclass(frozen=True)
class AgreeUpTo:
    budget: int
    exact: bool = False


def first_disagreement(f: EvPeriodic, g: EvPeriodic) -> Optional[int]:
    """Least m with f(m) ≠ g(m), or None when f = g."""
    span = max(len(f.prefix), len(g.prefix))
    span += len(f.period) * len(g.period) // math.gcd(len(f.period), len(g.period))
    for m in range(span):
        if f(m) != g(m):
            return m
    return None


def baire_dist_exp(f: EvPeriodic, g: EvPeriodic, budget: int):
    m = first_disagreement(f, g)
    if m is None:
        return AgreeUpTo(budget, exact=True)
    if m <= budget:
        return Disagree(m)
    return AgreeUpTo(budget)


def baire_dist(f: EvPeriodic, g: EvPeriodic) -> Fraction:
    m = first_disagreement(f, g)
    return Fraction(0) if m is None else Fraction(1, 2 ** m)


def product_dist(a: CodeLike, b: CodeLike) -> Fraction:
    """Σ 2^{-i} |a(i) - b(i)| / (1 + |a(i) - b(i)|) over the zero extensions."""
    xs, ys = as_code(a).items, as_code(b).items
    total = Fraction(0)
    for i in range(max(len(xs), len(ys))):
        d = abs((xs[i] if i < len(xs) else 0) - (ys[i] if i < len(ys) else 0))
        if d:
            total += Fraction(d, (1 + d) * 2 ** i)
    return total
