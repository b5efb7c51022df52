import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, TypeVar, Union

from .codec import FinSet, SeqCode, canon_code, set_of
from .setfn import AllBig, RefutedBy, SetFunction, cylinder_bigness, parity_min_F
from .streams import EvPeriodic

logger = logging.getLogger(__name__)

T = TypeVar('T')


class CounterexampleViolation(RuntimeError):
    def __init__(self, k: int, color: int, cls: FinSet, value: int):
        super().__init__(f"k={k}: class {cls} of color {color} has {len(cls)} elements, above F = {value}")
        self.k = k
        self.color = color
        self.cls = cls


@dataclass(frozen=True)
class Coloring:
    """f : [k] → [n], stored as its k+1 values."""
    values: Tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, 'values', tuple(self.values))
        if not self.values:
            raise ValueError("a coloring of [k] has k+1 >= 1 values")
        if self.n < 0 or any(v < 0 or v > self.n for v in self.values):
            raise ValueError(f"coloring values {list(self.values)} outside [{self.n}]")

    @property
    def k(self) -> int:
        return len(self.values) - 1

    def __call__(self, i: int) -> int:
        return self.values[i]

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.values)


def counterexample_coloring(k: int) -> Coloring:
    """
    Odd numbers get color 0 and even numbers color 1, except on the last two
    numbers k-1 and k where it is the other way round. For k ≤ 1 the last
    two numbers are 0 and 1.
    """
    if k < 0:
        raise ValueError("k must be a natural")
    last_two = {0, 1} if k <= 1 else {k - 1, k}
    values = []
    for i in range(k + 1):
        odd = i % 2 == 1
        if i in last_two:
            values.append(1 if odd else 0)
        else:
            values.append(0 if odd else 1)
    return Coloring(tuple(values), 1)


def color_classes(f: Coloring) -> Dict[int, FinSet]:
    return {c: FinSet(tuple(i for i, v in enumerate(f.values) if v == c)) for c in range(f.n + 1)}


def largest_class(f: Coloring) -> Tuple[int, FinSet]:
    """The biggest color class; ties go to the smaller color."""
    classes = color_classes(f)
    color = max(classes, key=lambda c: (len(classes[c]), -c))
    return color, classes[color]


def infinite_color_classes(f: EvPeriodic) -> Tuple[int, ...]:
    """Colors taken infinitely often, i.e. the colors of the periodic part."""
    return tuple(sorted(set(f.period)))


@dataclass
class FippReport:
    principle: str
    n: int
    k: Union[int, Tuple[int, int]]
    setfn: str
    verdict: str
    witnesses: List[dict] = field(default_factory=list)
    counterexample: Optional[dict] = None
    exhaustive: bool = True
    rows: List[dict] = field(default_factory=list)
    telemetry: Dict[str, int] = field(default_factory=dict)


def report_to_dict(report: FippReport, max_witnesses: Optional[int] = None) -> dict:
    witnesses = report.witnesses
    if max_witnesses is not None and len(witnesses) > max_witnesses:
        witnesses = witnesses[:max_witnesses]
    out = {
        "principle": report.principle,
        "n": report.n,
        "k": list(report.k) if isinstance(report.k, tuple) else report.k,
        "setfn": report.setfn,
        "verdict": report.verdict,
        "witnesses": witnesses,
        "witness_count": len(report.witnesses),
        "exhaustive": report.exhaustive,
    }
    if report.counterexample is not None:
        out["counterexample"] = report.counterexample
    if report.rows:
        out["rows"] = report.rows
    if report.telemetry:
        out["telemetry"] = report.telemetry
    return out


def verify_fipp1_ce(k_max: int) -> FippReport:
    """
    Check that no color class of counterexample_coloring(k) is big for the parity set
    function, for every k ≤ k_max. A failing row is a bug here, not a
    property of the coloring.
    """
    if k_max < 0:
        raise ValueError("k_max must be a natural")
    F = parity_min_F()
    rows = []
    for k in range(k_max + 1):
        f = counterexample_coloring(k)
        classes = color_classes(f)
        sizes, values = [], []
        for c, cls in classes.items():
            value = F.on_set(cls)
            if len(cls) > value:
                raise CounterexampleViolation(k, c, cls, value)
            sizes.append(len(cls))
            values.append(value)
        rows.append({
            "k": k,
            "coloring": list(f.values),
            "classes": [str(cls) for cls in classes.values()],
            "sizes": sizes,
            "F": values,
        })
    logger.debug("verified %d rows of the parity counterexample", len(rows))
    return FippReport("FIPP1-CE", 1, (0, k_max), F.name, "counterexample-verified", rows=rows)


def _lex_subsets(pool: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """Nonempty increasing tuples over pool in lexicographic order (preorder)."""
    def grow(prefix: Tuple[int, ...], start: int) -> Iterator[Tuple[int, ...]]:
        for i in range(start, len(pool)):
            t = prefix + (pool[i],)
            yield t
            yield from grow(t, i + 1)
    return grow((), 0)


def find_big_monochromatic(values: Sequence[int], F: SetFunction) -> Optional[SeqCode]:
    """
    Lexicographically least A ⊆ [len(values) - 1] on which the coloring is
    constant and |A| > F(A), as a canonical code.
    """
    best = None
    for c in sorted(set(values)):
        pool = [i for i, v in enumerate(values) if v == c]
        for t in _lex_subsets(pool):
            if len(t) > F.on_set(FinSet(t)):
                if best is None or t < best:
                    best = t
                break
    return None if best is None else SeqCode(best)


def is_valid_fipp2_witness(f: Coloring, witness: SeqCode, F: SetFunction) -> bool:
    A = set_of(witness)
    return (len(A) > 0 and all(x <= f.k for x in A)
            and len({f(x) for x in A}) == 1 and len(A) > F(witness))


@dataclass(frozen=True)
class Holds:
    # coloring (or coloring prefix under the fan strategy) -> witness
    witnesses: Dict[Tuple[int, ...], object] = field(compare=False)


@dataclass(frozen=True)
class Fails:
    coloring: Coloring
    refutations: Tuple[SeqCode, ...] = ()


@dataclass(frozen=True)
class Unknown:
    coloring: Coloring
    reason: str = ""


@dataclass(frozen=True)
class Least:
    k: int
    telemetry: Dict[str, int] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class NoneUpTo:
    k_max: int
    telemetry: Dict[str, int] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class UnknownAt:
    k: int


def _by_first_color(n: int, worker: Callable[[int], T], threads: int) -> List[T]:
    """Run worker on each first color; results come back in color order."""
    if threads <= 1:
        return [worker(a) for a in range(n + 1)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, range(n + 1)))


def colorings(n: int, k: int, first: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """All f : [k] → [n] in lexicographic order, optionally with f(0) fixed."""
    heads = range(n + 1) if first is None else (first,)
    for a in heads:
        for rest in itertools.product(range(n + 1), repeat=k):
            yield (a,) + rest


def _fipp2_enumerate(n: int, F: SetFunction, k: int, first: int):
    witnesses = {}
    for values in colorings(n, k, first):
        w = find_big_monochromatic(values, F)
        if w is None:
            return Coloring(values, n), witnesses
        witnesses[values] = w
    return None, witnesses


def _fipp2_fan(n: int, F: SetFunction, k: int, first: int):
    # a qualifying set inside a prefix survives every extension, so the
    # whole cylinder over a secured prefix is settled at once
    witnesses = {}
    stack = [(first,)]
    while stack:
        prefix = stack.pop()
        w = find_big_monochromatic(prefix, F)
        if w is not None:
            witnesses[prefix] = w
            continue
        if len(prefix) == k + 1:
            return Coloring(prefix, n), witnesses
        stack.extend(prefix + (a,) for a in range(n, -1, -1))
    return None, witnesses


def fipp2_check(n: int, F: SetFunction, k: int, strategy: str = "enumerate", threads: int = 1):
    """
    Holds when every f : [k] → [n] has a monochromatic A ⊆ [k] with
    |A| > F(A); Fails carries the lexicographically least coloring without one.
    """
    if n < 0 or k < 0:
        raise ValueError("n and k must be naturals")
    search = {"enumerate": _fipp2_enumerate, "fan": _fipp2_fan}.get(strategy)
    if search is None:
        raise ValueError(f"unknown strategy {strategy!r}")
    witnesses = {}
    for failing, found in _by_first_color(n, lambda a: search(n, F, k, a), threads):
        if failing is not None:
            return Fails(failing)
        witnesses.update(found)
    return Holds(witnesses)


def fipp2_threshold(n: int, F: SetFunction, k_max: int, strategy: str = "enumerate", threads: int = 1):
    """Least k ≤ k_max at which fipp2_check holds."""
    if strategy == "fan":
        from .cub import fipp2_secure_adapter
        from .fan import AllSecured, fan_bound
        result = fan_bound(fipp2_secure_adapter(n, F), k_max + 1)
        logger.debug("fan threshold for n=%d %s: %s", n, F.name, result)
        if isinstance(result, AllSecured):
            return Least(result.z, result.telemetry)
        return NoneUpTo(k_max, result.telemetry)
    for k in range(k_max + 1):
        result = fipp2_check(n, F, k, strategy, threads)
        logger.debug("fipp2 n=%d %s k=%d: %s", n, F.name, k, type(result).__name__)
        if isinstance(result, Holds):
            return Least(k)
    return NoneUpTo(k_max)


@dataclass(frozen=True)
class BigClass:
    color: int
    cls: SeqCode


@dataclass(frozen=True)
class AllRefuted:
    refutations: Tuple[SeqCode, ...]


def fipp3_coloring_verdict(f: Coloring, F: SetFunction, budget: int):
    """
    BigClass when the cylinder over some class f⁻¹(c) is all big (least such
    color); AllRefuted when every cylinder has a refutation; Unknown otherwise.
    """
    refutations = []
    unknown = None
    for c, cls in color_classes(f).items():
        verdict = cylinder_bigness(F, cls, f.k, budget)
        if isinstance(verdict, AllBig):
            return BigClass(c, canon_code(cls))
        if isinstance(verdict, RefutedBy):
            refutations.append(verdict.witness)
        elif unknown is None:
            unknown = f"color {c}: {verdict.reason}"
    if unknown is not None:
        return Unknown(f, unknown)
    return AllRefuted(tuple(refutations))


def fipp3_check(n: int, F: SetFunction, k: int, budget: int, threads: int = 1):
    if n < 0 or k < 0:
        raise ValueError("n and k must be naturals")

    def run(first: int):
        witnesses, unknown = {}, None
        for values in colorings(n, k, first):
            f = Coloring(values, n)
            verdict = fipp3_coloring_verdict(f, F, budget)
            if isinstance(verdict, AllRefuted):
                return Fails(f, verdict.refutations), witnesses, unknown
            if isinstance(verdict, Unknown):
                unknown = unknown or verdict
            else:
                witnesses[values] = verdict
        return None, witnesses, unknown

    witnesses, unknown = {}, None
    for failing, found, undecided in _by_first_color(n, run, threads):
        if failing is not None:
            return failing
        unknown = unknown or undecided
        witnesses.update(found)
    if unknown is not None:
        return unknown
    return Holds(witnesses)


def fipp3_threshold(n: int, F: SetFunction, k_max: int, budget: int, threads: int = 1):
    for k in range(k_max + 1):
        result = fipp3_check(n, F, k, budget, threads)
        logger.debug("fipp3 n=%d %s k=%d: %s", n, F.name, k, type(result).__name__)
        if isinstance(result, Holds):
            return Least(k)
        if isinstance(result, Unknown):
            return UnknownAt(k)
    return NoneUpTo(k_max)


def threshold_grid(ns: Iterable[int], cs: Iterable[int], strategy: str = "enumerate",
                   threads: int = 1) -> List[dict]:
    """FIPP₂ thresholds of const_F(c) next to the pigeonhole value (n+1)·c."""
    from .setfn import const_F
    rows = []
    for n in ns:
        for c in cs:
            expected = (n + 1) * c
            result = fipp2_threshold(n, const_F(c), expected + 1, strategy, threads)
            rows.append({
                "n": n,
                "c": c,
                "threshold": result.k if isinstance(result, Least) else None,
                "expected": expected,
            })
    return rows


def _witness_rows(witnesses: Dict[Tuple[int, ...], object]) -> List[dict]:
    rows = []
    for values, w in witnesses.items():
        if isinstance(w, BigClass):
            rows.append({"coloring": list(values), "color": w.color, "set": list(w.cls.items)})
        else:
            rows.append({"coloring": list(values), "set": list(w.items)})
    return rows


def check_report(principle: str, n: int, F: SetFunction, k: int, result) -> FippReport:
    if isinstance(result, Holds):
        return FippReport(principle, n, k, F.name, "holds", witnesses=_witness_rows(result.witnesses),
                          exhaustive=True)
    if isinstance(result, Fails):
        counter = {"coloring": list(result.coloring.values)}
        if result.refutations:
            counter["refutations"] = [list(w.items) for w in result.refutations]
        return FippReport(principle, n, k, F.name, "fails", counterexample=counter)
    return FippReport(principle, n, k, F.name, "unknown",
                      counterexample={"coloring": list(result.coloring.values), "reason": result.reason},
                      exhaustive=False)


def threshold_report(principle: str, n: int, F: SetFunction, k_max: int, result) -> FippReport:
    if isinstance(result, Least):
        return FippReport(principle, n, result.k, F.name, "least", telemetry=result.telemetry)
    if isinstance(result, UnknownAt):
        return FippReport(principle, n, result.k, F.name, "unknown", exhaustive=False)
    return FippReport(principle, n, (0, k_max), F.name, "none", telemetry=result.telemetry)
