import re
from typing import Dict, Optional, Tuple

from .codec import FinSet
from .setfn import SetFunction, coloring_F, const_F, parity_min_F
from .streams import EvPeriodic, InfiniteSet, evens, naturals, odds

_NATS_RE = re.compile(r"^\s*(\d+(?:\s*,\s*\d+)*)?\s*$")
_EV_RE = re.compile(r"^\s*([\d,\s]*);([\d,\s]+)$")
_SETFN_RE = re.compile(r"^\s*(?:const:(\d+)|(parity)|coloring:([\d,\s]*;[\d,\s]+):(\d+))\s*$")
_ENV_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\d+)\s*$")


def parse_nats(s: str) -> Tuple[int, ...]:
    """
    Parse a comma separated list of naturals: "1,0,2". The empty string,
    "<>" and "⟨⟩" give the empty tuple.
    Raises ValueError on invalid input.
    """
    s = s.strip().strip("<>⟨⟩{}")
    m = _NATS_RE.match(s)
    if not m:
        raise ValueError(f"Invalid list of naturals: {s!r}")
    if not m.group(1):
        return ()
    return tuple(int(x) for x in m.group(1).split(","))


def parse_ev_periodic(s: str, n: Optional[int] = None) -> EvPeriodic:
    """
    Parse "prefix;period", e.g. "1,1,0;1" or ";0,1" (empty prefix). The
    bound n defaults to the largest value.
    """
    m = _EV_RE.match(s)
    if not m:
        raise ValueError(f"Invalid eventually periodic function {s!r}, expected PREFIX;PERIOD")
    prefix, period = parse_nats(m.group(1)), parse_nats(m.group(2))
    if not period:
        raise ValueError("Period must be nonempty")
    return EvPeriodic.of(prefix, period, n)


def parse_infinite_set(s: str) -> InfiniteSet:
    """Named sets (evens, odds, naturals) or a characteristic function "PREFIX;PERIOD"."""
    named = {"evens": evens, "odds": odds, "naturals": naturals}
    if s.strip() in named:
        return named[s.strip()]()
    return InfiniteSet(parse_ev_periodic(s, 1))


def parse_finset(s: str) -> FinSet:
    return FinSet.of(parse_nats(s))


def parse_setfn(s: str) -> SetFunction:
    """const:C | parity | coloring:PREFIX;PERIOD:N"""
    m = _SETFN_RE.match(s)
    if not m:
        raise ValueError(f"Invalid set function {s!r}, expected const:C, parity or coloring:PREFIX;PERIOD:N")
    const, parity, coloring, n = m.groups()
    if const is not None:
        return const_F(int(const))
    if parity:
        return parity_min_F()
    return coloring_F(parse_ev_periodic(coloring, int(n)))


def parse_env(pairs) -> Dict[str, int]:
    """["x=3", "y=0"] -> {"x": 3, "y": 0}"""
    env = {}
    for item in pairs or ():
        for part in item.split(","):
            if not part.strip():
                continue
            m = _ENV_RE.match(part)
            if not m:
                raise ValueError(f"Invalid binding {part!r}, expected NAME=NATURAL")
            env[m.group(1)] = int(m.group(2))
    return env
