import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glp.corpus import j_axiom_instances
from glp.semantics import (
    KripkeModel, ModelError, find_root, inject_violation, is_j_frame, j_closure, random_j_model,
    satisfies, valid_in_model,
)
from glp.syntax import TOP, box_normal, parse

from conftest import formulas

TWO = KripkeModel(("w", "v"), {1: {("w", "v")}}, {})


def test_j_frame_examples():
    assert is_j_frame(TWO).ok
    loop = KripkeModel(("w",), {0: {("w", "w")}})
    assert is_j_frame(loop).conditions == {1}
    bad2 = KripkeModel(("w", "v", "u"), {1: {("w", "v")}, 0: {("w", "u")}})
    assert is_j_frame(bad2).conditions == {2}


def test_satisfies_examples():
    assert satisfies(TWO, "w", parse("[0]p0"))
    assert not satisfies(TWO, "w", parse("[1]p0"))
    assert satisfies(TWO, "v", TOP)
    assert not valid_in_model(TWO, parse("[0]p0 -> [1]p0"))
    with pytest.raises(ModelError):
        satisfies(TWO, "nowhere", TOP)


def test_find_root():
    assert find_root(TWO) == "w"
    assert find_root(KripkeModel(("a", "b"), {})) is None
    assert find_root(KripkeModel(("a",), {})) == "a"


def test_model_validation_and_json():
    with pytest.raises(ModelError):
        KripkeModel(("a",), {0: {("a", "b")}})
    with pytest.raises(ModelError):
        KripkeModel(("a", "a"), {})
    m = KripkeModel(("a", "b"), {0: {("a", "b")}}, {0: {"b"}})
    assert KripkeModel.loads(m.dumps()) == m
    assert m.to_json() == {"worlds": ["a", "b"], "relations": {"0": [["a", "b"]]}, "valuation": {"p0": ["b"]}}
    dot = m.to_dot("a")
    assert "doublecircle" in dot and 'label="0"' in dot


def test_lob_instance_on_random_models(rng):
    lob = parse("[0]([0]F -> F) -> [0]F")
    for _ in range(100):
        assert valid_in_model(random_j_model(rng, max_worlds=4), lob)


def test_soundness_fuzz(rng):
    instances = j_axiom_instances(50, n_modalities=2, seed=7, arg_depth=2)
    for _ in range(200):
        m = random_j_model(rng, max_worlds=6)
        assert is_j_frame(m).ok and find_root(m) is not None
        for rule, f in instances:
            assert valid_in_model(m, f), (rule, f, m)


@pytest.mark.parametrize("condition", [1, 2, 3])
def test_injected_violations_are_flagged(condition, rng):
    hits = 0
    while hits < 25:
        m = inject_violation(random_j_model(rng, max_worlds=6), condition, rng)
        if m is not None:
            assert is_j_frame(m).conditions == {condition}
            hits += 1


def test_closure_matches_frame_check(rng):
    for _ in range(200):
        size = rng.randint(1, 5)
        edges = [(rng.randrange(size), rng.randrange(2), rng.randrange(size)) for _ in range(rng.randint(0, 5))]
        closed = j_closure(edges)
        if any(x == y for x, _, y in closed):
            continue
        from glp.semantics import model_from_edges
        assert is_j_frame(model_from_edges(size, closed)).ok


@settings(max_examples=60)
@given(formulas(10, 2, 2), st.integers(0, 10_000))
def test_dia_duality(f, seed):
    m = random_j_model(random.Random(seed), max_worlds=5)
    for w in m.worlds:
        assert satisfies(m, w, f) == satisfies(m, w, box_normal(f))
