"""
Uniform-bound search over the fan [n]^<ℕ.

The search walks the complement of the tree of unsecured prefixes: it
descends while a prefix is unsecured and stops at the first securing
node. Exhausting the tree certifies a uniform witness bound; reaching the
depth budget on an unsecured prefix reports that prefix instead.
"""
import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, Optional, Tuple, Union

logger = logging.getLogger(__name__)

Prefix = Tuple[int, ...]


class NeighborhoodViolation(ValueError):
    def __init__(self, prefix: Prefix, child: Prefix, witness: int, child_witness: Optional[int]):
        super().__init__(f"prefix {list(prefix)} secured with {witness} but extension "
                         f"{list(child)} gives {child_witness}")
        self.prefix = prefix
        self.child = child


class MonotonicityViolation(NeighborhoodViolation):
    pass


@dataclass
class SecurePrefix:
    """
    query(σ) is the securing witness x for the prefix σ ∈ [n]^<ℕ, or None
    while σ is unsecured. A secured prefix must give the same witness to
    every extension.
    """
    n: int
    query: Callable[[Prefix], Optional[int]]
    name: str = "pred"
    stats: Counter = field(default_factory=Counter)

    def __call__(self, prefix: Prefix) -> Optional[int]:
        return self.query(tuple(prefix))


@dataclass(frozen=True)
class AllSecured:
    z: int
    depth: int
    telemetry: Dict[str, int] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class BudgetExceeded:
    path: Prefix
    telemetry: Dict[str, int] = field(default_factory=dict, compare=False)


FanResult = Union[AllSecured, BudgetExceeded]


def _check_children(pred: SecurePrefix, prefix: Prefix, witness: int) -> None:
    for a in range(pred.n + 1):
        child = prefix + (a,)
        got = pred(child)
        if got != witness:
            raise NeighborhoodViolation(prefix, child, witness, got)


def fan_bound(pred: SecurePrefix, depth_budget: int, check: bool = True) -> FanResult:
    """
    Search [n]^<ℕ depth first, branches in increasing order. AllSecured(z,
    depth) means every f : ℕ → [n] is secured by its prefix of length at
    most depth with a witness at most z.

    depth counts prefix length. The FIPP₂ adapter reads σ as a coloring of
    [|σ|-1], so there depth is the threshold plus one.
    """
    if depth_budget < 0:
        raise ValueError("depth budget must be a natural")
    counts = Counter()
    z, deepest = 0, 0
    stack = [()]
    while stack:
        prefix = stack.pop()
        counts["nodes_visited"] += 1
        witness = pred(prefix)
        if witness is not None:
            counts["prunes"] += 1
            if check:
                _check_children(pred, prefix, witness)
            z = max(z, witness)
            deepest = max(deepest, len(prefix))
            continue
        if len(prefix) >= depth_budget:
            telemetry = _telemetry(counts, pred)
            logger.debug("fan search on %s hit budget %d at %s: %s", pred.name, depth_budget, prefix, telemetry)
            return BudgetExceeded(prefix, telemetry)
        # reversed so that branch 0 is popped first
        stack.extend(prefix + (a,) for a in range(pred.n, -1, -1))
    telemetry = _telemetry(counts, pred)
    logger.debug("fan search on %s secured everything: z=%d depth=%d %s", pred.name, z, deepest, telemetry)
    return AllSecured(z, deepest, telemetry)


def _telemetry(counts: Counter, pred: SecurePrefix) -> Dict[str, int]:
    return {
        "nodes_visited": counts["nodes_visited"],
        "prunes": counts["prunes"],
        "oracle_unknowns": pred.stats["oracle_unknowns"],
    }


def leaves(n: int, depth: int) -> Iterator[Prefix]:
    """All [n]-sequences of the given length, lexicographically."""
    return itertools.product(range(n + 1), repeat=depth)


def verify_all_secured(pred: SecurePrefix, result: AllSecured) -> bool:
    """Re-check every leaf of length result.depth for a witness ≤ z."""
    for leaf in leaves(pred.n, result.depth):
        witness = pred(leaf)
        if witness is None or witness > result.z:
            return False
    return True
