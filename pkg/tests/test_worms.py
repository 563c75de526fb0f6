import itertools

import pytest

from glp.syntax import BOT, TOP, Dia, Iff, Var, parse, walk
from glp.engine import decide_glp
from glp.worms import (
    NormalForm, Worm, bar_projection, is_worm, normalize_dia0, worm_implies, worms,
)


def test_is_worm():
    assert is_worm(parse("<1><0>T")) == Worm((1, 0))
    assert is_worm(TOP) == Worm(())
    assert is_worm(parse("<0>p0")) is None
    assert str(Worm((1, 0))) == "<1><0>T"


def test_worm_implication_examples():
    assert worm_implies(Worm((0, 0)), Worm((0,)))
    assert worm_implies(Worm((1,)), Worm((0,)))
    assert worm_implies(Worm((0,)), Worm((1,))).is_invalid


def test_linearity_sample():
    ws = [Worm((0, *w.letters)) for w in worms(2, [0, 1])]
    for a, b in itertools.combinations(ws, 2):
        assert worm_implies(a, b) or worm_implies(b, a), (a, b)


@pytest.mark.parametrize("text,expected", [
    ("F", None), ("T", (0,)), ("<0>T", (0, 0)), ("[0]F", (0,)), ("<1>T", (0, 1)),
    ("<1>T & <0><0>T", (0, 1)),
])
def test_normalize_dia0(text, expected):
    f = parse(text)
    r = normalize_dia0(f)
    assert isinstance(r, NormalForm)
    if expected is None:
        assert r.is_bottom and decide_glp(parse(f"~<0>({text})"))
    else:
        assert r.worm == Worm(expected)
        assert decide_glp(Iff(Dia(0, f), r.worm.formula()))


def test_normalize_rejects_variables():
    with pytest.raises(ValueError):
        normalize_dia0(Var(0))


def test_bar_projection():
    assert bar_projection(parse("[1]<0>T & <0>T"), 1) == parse("T & <0>T")
    assert bar_projection(parse("<1>T"), 1) == BOT
    assert bar_projection(parse("[0]F"), 1) == parse("[0]F")
    f = parse("<0>([1]<1>T | <1>[0][1]F) -> [1]<0>T")
    g = bar_projection(f, 1)
    assert all(getattr(h, "k", None) != 1 for h in walk(g))
