import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, List, Sequence, Tuple, Union


def pair(i: int, j: int) -> int:
    """Cantor pairing (i+j)(i+j+1)/2 + i."""
    if i < 0 or j < 0:
        raise ValueError("pair() takes naturals")
    s = i + j
    return s * (s + 1) // 2 + i


def unpair(z: int) -> Tuple[int, int]:
    if z < 0:
        raise ValueError("unpair() takes a natural")
    w = (math.isqrt(8 * z + 1) - 1) // 2
    i = z - w * (w + 1) // 2
    return i, w - i


@dataclass(frozen=True)
class SeqCode:
    """
    Code of a finite sequence under the cons-list bijection:
    <> -> 0, a::rest -> 1 + pair(a, code(rest)).

    The integer is computed on demand: each cons roughly squares the code,
    so codes of long sequences are far too big to build eagerly. Equality
    and hashing go through the items, which is the same thing under the
    bijection.
    """
    items: Tuple[int, ...] = ()

    def __post_init__(self):
        if any(x < 0 for x in self.items):
            raise ValueError("sequence entries must be naturals")

    @cached_property
    def value(self) -> int:
        code = 0
        for a in reversed(self.items):
            code = 1 + pair(a, code)
        return code

    @classmethod
    def from_value(cls, n: int) -> 'SeqCode':
        if n < 0:
            raise ValueError("codes are naturals")
        out = []
        while n > 0:
            a, n = unpair(n - 1)
            out.append(a)
        return cls(tuple(out))

    def __int__(self) -> int:
        return self.value

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, i: int) -> int:
        return self.items[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.items)


CodeLike = Union[SeqCode, int]


def as_code(c: CodeLike) -> SeqCode:
    return c if isinstance(c, SeqCode) else SeqCode.from_value(c)


def encode_seq(s: Iterable[int]) -> SeqCode:
    return SeqCode(tuple(s))


def decode_seq(c: CodeLike) -> List[int]:
    return list(as_code(c).items)


def lh(c: CodeLike) -> int:
    return len(as_code(c))


def entry(c: CodeLike, i: int) -> int:
    """l(i) for i < lh l."""
    code = as_code(c)
    if not 0 <= i < len(code):
        raise ValueError(f"index {i} outside sequence of length {len(code)}")
    return code[i]


def is_initial_segment(s: CodeLike, t: CodeLike) -> bool:
    a, b = as_code(s).items, as_code(t).items
    return len(a) <= len(b) and b[:len(a)] == a


@dataclass(frozen=True)
class FinSet:
    elements: Tuple[int, ...] = ()
    _members: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        els = self.elements
        if any(x < 0 for x in els):
            raise ValueError("set elements must be naturals")
        if any(a >= b for a, b in zip(els, els[1:])):
            raise ValueError("FinSet elements must be strictly increasing")
        object.__setattr__(self, '_members', frozenset(els))

    @classmethod
    def of(cls, items: Iterable[int]) -> 'FinSet':
        return cls(tuple(sorted(set(items))))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self._members

    def issubset(self, other: 'FinSet') -> bool:
        return self._members <= other._members

    def upto(self, k: int) -> 'FinSet':
        """A ∩ [k]; k = -1 gives the empty set."""
        return FinSet(tuple(x for x in self.elements if x <= k))

    def union(self, other: Iterable[int]) -> 'FinSet':
        return FinSet.of(self._members.union(other))

    def __str__(self) -> str:
        return "{" + ",".join(str(x) for x in self.elements) + "}"


EMPTY = FinSet()


def set_of(c: CodeLike) -> FinSet:
    return FinSet.of(as_code(c).items)


def canon_code(A: FinSet) -> SeqCode:
    return SeqCode(A.elements)


def card(A: FinSet) -> int:
    return len(A)


def card_cmp(l: CodeLike, m: int) -> str:
    size = len(set_of(l))
    if size < m:
        return "<"
    if size > m:
        return ">"
    return "="


def initial_segment(i: Union[int, str]) -> FinSet:
    """[i] = {0..i}; the marker "empty" (or -1) stands for [-1] = ∅."""
    if i == "empty" or i == -1:
        return EMPTY
    if not isinstance(i, int) or i < 0:
        raise ValueError(f"bad initial segment bound: {i!r}")
    return FinSet(tuple(range(i + 1)))


def render_seq(s: Sequence[int]) -> str:
    return "⟨" + ",".join(str(x) for x in s) + "⟩"
