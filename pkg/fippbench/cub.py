"""
Uniform boundedness over [n]^ℕ: prefix-security predicates and their fan
search, associates, a budgeted search for Π⁰₁ predicates and the
counterexamples that defeat uniform bounds.
"""
import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple, Union

from .codec import CodeLike, SeqCode, as_code
from .fan import (AllSecured, BudgetExceeded, FanResult, MonotonicityViolation, NeighborhoodViolation, Prefix,
                  SecurePrefix, fan_bound, leaves, verify_all_secured)
from .fipp import AllRefuted, BigClass, Coloring, fipp3_coloring_verdict, find_big_monochromatic
from .setfn import SetFunction, Value
from .sigma00 import Formula, UnboundVariableError, evaluate, free_variables, modulus
from .streams import EvPeriodic, NoWitnessUpTo

logger = logging.getLogger(__name__)

__all__ = [
    "AllSecured", "BudgetExceeded", "FanResult", "MonotonicityViolation", "NeighborhoodViolation",
    "SecurePrefix", "fan_bound", "verify_all_secured",
    "fipp2_secure_adapter", "fipp3_secure_adapter", "formula_secure_adapter", "tree_exit_adapter",
    "witness_along", "Associate", "neighborhood_normalize", "eval_associate", "associate_of",
    "check_associate", "is_neighborhood", "Pi01Family", "formula_family", "Found", "Refuted",
    "Unknown", "pi01_bound_search", "nocont_demo", "refutes_bound", "comprehension_counter",
]


def _check_range(prefix: Prefix, n: int) -> None:
    if any(a < 0 or a > n for a in prefix):
        raise ValueError(f"prefix {list(prefix)} leaves [{n}]")


def _first_securing(n: int, secures: Callable[[Prefix], bool]) -> Callable[[Prefix], Optional[int]]:
    """Witness |σ|-1 at the shortest securing prefix, inherited by extensions."""
    @lru_cache(maxsize=None)
    def least(prefix: Prefix) -> Optional[int]:
        if not prefix:
            return None
        _check_range(prefix, n)
        parent = least(prefix[:-1])
        if parent is not None:
            return parent
        return len(prefix) - 1 if secures(prefix) else None
    return least


def fipp2_secure_adapter(n: int, F: SetFunction) -> SecurePrefix:
    """σ, read as a coloring of [|σ|-1], is secured once it holds a big monochromatic set."""
    secures = lambda prefix: find_big_monochromatic(prefix, F) is not None
    return SecurePrefix(n, _first_securing(n, secures), name=f"fipp2({n},{F.name})")


def fipp3_secure_adapter(n: int, F: SetFunction, budget: int) -> SecurePrefix:
    """
    σ is secured once some color class has an all-big cylinder. An Unknown
    from the oracle leaves σ unsecured and is counted in the telemetry.
    """
    stats = Counter()

    def verdict(prefix: Prefix):
        v = fipp3_coloring_verdict(Coloring(prefix, n), F, budget)
        if not isinstance(v, (BigClass, AllRefuted)):
            stats["oracle_unknowns"] += 1
        return v

    @lru_cache(maxsize=None)
    def least(prefix: Prefix) -> Optional[int]:
        if not prefix:
            return None
        _check_range(prefix, n)
        parent = least(prefix[:-1])
        v = verdict(prefix)
        if parent is not None:
            # B(f, k) must stay true as k grows
            if isinstance(v, AllRefuted):
                raise MonotonicityViolation(prefix[:-1], prefix, parent, None)
            return parent
        return len(prefix) - 1 if isinstance(v, BigClass) else None

    return SecurePrefix(n, least, name=f"fipp3({n},{F.name})", stats=stats)


def formula_secure_adapter(phi: Formula, n: int, xvars: Sequence[str]) -> SecurePrefix:
    """
    σ is secured with the least z ≤ |σ| such that modulus(phi, z) ≤ |σ| and
    some x⃗ ≤ z satisfies phi on σ⌢o; extensions keep the witness of the
    shortest securing prefix.
    """
    xvars = tuple(xvars)
    missing = free_variables(phi) - set(xvars)
    if missing:
        raise UnboundVariableError(missing)

    def witness(prefix: Prefix) -> Optional[int]:
        f = EvPeriodic.of(prefix, (0,), n)
        for z in range(len(prefix) + 1):
            if modulus(phi, z) > len(prefix):
                break
            for xs in itertools.product(range(z + 1), repeat=len(xvars)):
                if max(xs, default=0) == z:
                    if evaluate(phi, dict(zip(xvars, xs)), f):
                        return z
        return None

    @lru_cache(maxsize=None)
    def least(prefix: Prefix) -> Optional[int]:
        _check_range(prefix, n)
        if prefix:
            parent = least(prefix[:-1])
            if parent is not None:
                return parent
        return witness(prefix)

    return SecurePrefix(n, least, name="formula")


def tree_exit_adapter(in_tree: Callable[[Prefix], bool], n: int) -> SecurePrefix:
    """σ is secured with the least x ≤ |σ| such that σ↾x has left the tree."""
    def query(prefix: Prefix) -> Optional[int]:
        _check_range(prefix, n)
        for x in range(len(prefix) + 1):
            if not in_tree(prefix[:x]):
                return x
        return None
    return SecurePrefix(n, query, name="tree-exit")


def witness_along(pred: SecurePrefix, f: EvPeriodic, depth: int) -> Optional[int]:
    """The witness at the shortest securing prefix of f, looking up to length depth."""
    for m in range(depth + 1):
        w = pred(f.values(m))
        if w is not None:
            return w
    return None


@dataclass(frozen=True)
class Associate:
    """α on codes of [n]-sequences; its first positive value along β is φ(β) + 1."""
    n: int
    alpha: Callable[[Prefix], int]
    name: str = "alpha"

    def __call__(self, s: Union[CodeLike, Sequence[int]]) -> int:
        items = as_code(s).items if isinstance(s, (SeqCode, int)) else tuple(s)
        return self.alpha(items)


def neighborhood_normalize(alpha: Associate) -> Associate:
    """α'(σ) = α(τ) for the shortest τ ⊆ σ with α(τ) > 0, and 0 if there is none."""
    def normalized(items: Prefix) -> int:
        for m in range(len(items) + 1):
            v = alpha(items[:m])
            if v > 0:
                return v
        return 0
    return Associate(alpha.n, normalized, name=f"nbhd({alpha.name})")


def eval_associate(alpha: Associate, f: EvPeriodic, budget: int):
    if any(v > alpha.n for v in f.prefix + f.period):
        raise ValueError(f"{f} leaves [{alpha.n}]")
    for m in range(budget + 1):
        v = alpha(f.values(m))
        if v > 0:
            return Value(v - 1)
    return NoWitnessUpTo(budget)


def associate_of(pred: SecurePrefix) -> Associate:
    def alpha(items: Prefix) -> int:
        w = pred(items)
        return 0 if w is None else w + 1
    return Associate(pred.n, alpha, name=f"assoc({pred.name})")


def check_associate(alpha: Associate, f: EvPeriodic, budget: int) -> bool:
    """α turns positive along f within budget and keeps that value up to budget."""
    first = None
    for m in range(budget + 1):
        v = alpha(f.values(m))
        if first is None:
            if v > 0:
                first = v
        elif v != first:
            return False
    return first is not None


def is_neighborhood(alpha: Associate, seqs: Iterable[Sequence[int]]) -> bool:
    """Positive values persist along every prefix chain of the given sequences."""
    for s in seqs:
        s = tuple(s)
        first = None
        for m in range(len(s) + 1):
            v = alpha(s[:m])
            if first is None:
                if v > 0:
                    first = v
            elif v != first:
                return False
    return True


@dataclass(frozen=True)
class Pi01Family:
    """
    Decidable tests A(σ, x, w) on prefixes; prefix_need(x_max, w_max) is the
    prefix length that settles every test with x ≤ x_max and w ≤ w_max.
    """
    test: Callable[[Prefix, int, int], bool]
    prefix_need: Callable[[int, int], int]
    name: str = "family"


def formula_family(phi: Formula, xvar: str, wvar: str) -> Pi01Family:
    """A(σ, x, w) := phi(σ⌢o, x, w), with the formula's modulus as prefix need."""
    missing = free_variables(phi) - {xvar, wvar}
    if missing:
        raise UnboundVariableError(missing)

    def test(prefix: Prefix, x: int, w: int) -> bool:
        return evaluate(phi, {xvar: x, wvar: w}, EvPeriodic.of(prefix, (0,)))

    return Pi01Family(test, lambda x_max, w_max: modulus(phi, max(x_max, w_max)), name="formula")


@dataclass(frozen=True)
class Found:
    """Only relative to the budgets: not a proof of a uniform bound."""
    z: int
    budget: Dict[str, int] = field(compare=False)
    certified: bool = False


@dataclass(frozen=True)
class Refuted:
    path: Prefix
    # for each x ≤ x_max, the least w ≤ w_max whose test fails
    failures: Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class Unknown:
    reason: str


def pi01_bound_search(family: Pi01Family, n: int, x_max: int, w_max: int, depth: int):
    """
    Over every [n]-prefix of length depth, look for the least x ≤ x_max whose
    tests pass for all w ≤ w_max. Found(z) bounds those x; Refuted gives the
    lexicographically least prefix where every x fails.
    """
    budget = {"x_max": x_max, "w_max": w_max, "depth": depth}
    need = family.prefix_need(x_max, w_max)
    if need > depth:
        return Unknown(f"tests need prefixes of length {need}, depth is {depth}")
    z = 0
    for path in leaves(n, depth):
        failures = []
        for x in range(x_max + 1):
            bad = next((w for w in range(w_max + 1) if not family.test(path, x, w)), None)
            if bad is None:
                z = max(z, x)
                break
            failures.append((x, bad))
        else:
            logger.debug("%s refuted along %s", family.name, path)
            return Refuted(path, tuple(failures))
    logger.debug("%s bounded by %d within %s", family.name, z, budget)
    return Found(z, budget)


def nocont_demo(z: int) -> EvPeriodic:
    """f = 1 on [z], 0 at z+1, then 1 forever: f has a zero, none below z + 1."""
    if z < 0:
        raise ValueError("z must be a natural")
    return EvPeriodic.of((1,) * (z + 1) + (0,), (1,), 1)


def refutes_bound(f: EvPeriodic, z: int, horizon: int) -> bool:
    """f has a zero below horizon + 1 but no zero in [z]."""
    has_zero = any(f(y) == 0 for y in range(horizon + 1))
    return has_zero and all(f(x) != 0 for x in range(z + 1))


def comprehension_counter(test: Callable[[int], bool], z: int) -> EvPeriodic:
    """
    m⌢o with m(x) = 0 iff test(x) for x ≤ z: no x ≤ z satisfies
    ¬[f(x) = 0 ↔ test(x)], so z is no uniform bound for that predicate.
    """
    return EvPeriodic.of(tuple(0 if test(x) else 1 for x in range(z + 1)), (0,), 1)
