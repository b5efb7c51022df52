import pytest

from fippbench.codec import FinSet
from fippbench.streams import EvPeriodic, evens
from fippbench.util import parse_env, parse_ev_periodic, parse_finset, parse_infinite_set, parse_nats, parse_setfn


@pytest.mark.parametrize("text, expected", [
    ("1,0,2", (1, 0, 2)),
    (" 3 , 4 ", (3, 4)),
    ("", ()),
    ("<>", ()),
    ("⟨1,2⟩", (1, 2)),
    ("{0,5}", (0, 5)),
])
def test_parse_nats(text, expected):
    assert parse_nats(text) == expected


@pytest.mark.parametrize("text", ["1,,2", "a", "-1", "1 2"])
def test_parse_nats_rejects(text):
    with pytest.raises(ValueError):
        parse_nats(text)


def test_parse_ev_periodic():
    assert parse_ev_periodic("1,1,0;1") == EvPeriodic.of((1, 1, 0), (1,), 1)
    assert parse_ev_periodic(";0,1") == EvPeriodic.of((), (0, 1), 1)
    assert parse_ev_periodic(";0", 3).n == 3
    for bad in ("1,0", "1;", "2;0"):
        with pytest.raises(ValueError):
            parse_ev_periodic(bad, 1)


def test_parse_infinite_set():
    assert parse_infinite_set("evens") == evens()
    assert 4 in parse_infinite_set("0,0;1")
    with pytest.raises(ValueError):
        parse_infinite_set("1;0")


def test_parse_finset():
    assert parse_finset("3,1,3") == FinSet((1, 3))


def test_parse_setfn():
    assert parse_setfn("const:4").name == "const:4"
    assert parse_setfn("parity").name == "parity"
    F = parse_setfn("coloring:;0,1:1")
    assert F.on_set(FinSet((0, 2))) == 2
    with pytest.raises(ValueError):
        parse_setfn("const:x")
    with pytest.raises(ValueError):
        parse_setfn("coloring:;0,2:1")


def test_parse_env():
    assert parse_env(["x=1,y=2", "z = 0"]) == {"x": 1, "y": 2, "z": 0}
    assert parse_env(None) == {}
    with pytest.raises(ValueError):
        parse_env(["x=-1"])
