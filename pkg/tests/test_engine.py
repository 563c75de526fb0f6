import itertools

import pytest

from glp.corpus import CorpusConfig, formula_corpus
from glp.engine import (
    EngineConfig, EngineError, Invalid, NoCountermodelWithinCap, ResourceLimitExceeded, decide,
    decide_gl, decide_glp, decide_glps, decide_j, deduces, glp_query, h_formula, m_formula, m_plus,
    r_formula, verify_countermodel,
)
from glp.proofs import check_proof, shipped_proofs
from glp.semantics import find_root, is_j_frame, j_closure, model_from_edges, satisfies
from glp.syntax import TOP, And, Box, ModalityRangeError, Var, conj, parse, variables

p0 = Var(0)


def test_reduction_formulas():
    f = parse("[0]p0 -> [1]p0")
    m = parse("[0]p0 -> [1]p0")
    assert m_formula(f) == m
    assert m_plus(f) == conj([m, Box(0, m), Box(1, m)])
    assert m_formula(parse("[1]p0")) == TOP
    assert m_plus(p0) == And(TOP, Box(0, TOP))
    assert h_formula(parse("[1]([0]p1 -> p1)")) == parse("([1]([0]p1 -> p1) -> [0]p1 -> p1) & ([0]p1 -> p1)")
    assert h_formula(p0) == TOP
    assert h_formula(parse("[0]p0 -> p0")) == parse("[0]p0 -> p0")
    assert r_formula(p0) == parse("[0]p0 -> p0")
    assert r_formula(parse("[0]p0 -> p0")) == parse("([0]([0]p0 -> p0) -> [0]p0 -> p0) & ([0][0]p0 -> [0]p0) & ([0]p0 -> p0)")
    assert r_formula(TOP) == parse("[0]T -> T")


def test_decide_j_examples():
    v = decide_j(parse("[0]p0 -> [1]p0"))
    assert isinstance(v, Invalid)
    m = v.countermodel
    assert len(m.worlds) == 2 and m.rel(1) == {("w0", "w1")} and not m.rel(0)
    assert isinstance(decide_j(parse("[0]p0 -> [1][0]p0")), NoCountermodelWithinCap)
    assert decide_j(TOP)


def test_decide_glp_examples():
    assert decide_glp(parse("[1]([0]p1 -> p1)"))
    v = decide_glp(parse("[1][0]F"))
    assert v.is_invalid and len(v.countermodel.worlds) == 3
    v = decide_glp(parse("[0]F"))
    assert v.is_invalid and v.countermodel.rel(0) == {("w0", "w1")} and len(v.countermodel.worlds) == 2


def test_hand_built_certificate_validates():
    m = model_from_edges(3, [(0, 1, 1), (0, 0, 2), (1, 0, 2)])
    verify_countermodel(m, "w0", glp_query(parse("[1][0]F")))


def test_decide_glps_examples():
    assert decide_glps(parse("[0]p0 -> p0"))
    assert decide_glps(parse("[0][0]p0 -> [0]p0"))
    assert decide_glps(parse("[0]F")).is_invalid


def test_deductions():
    prem = [parse("([0]p1 -> p1) -> p0")]
    assert deduces(prem, parse("([0]p0 -> p0) <-> p0"), "GL")
    assert deduces([p0], parse("[1][0]p0"), "GLP")
    assert deduces([p0], parse("[0]F"), "GLP").is_invalid
    with pytest.raises(EngineError):
        deduces([p0], p0, "J")


def test_input_checks():
    with pytest.raises(ModalityRangeError):
        decide_glp(Box(5, p0))
    with pytest.raises(ModalityRangeError):
        decide_gl(parse("[1]p0"))
    with pytest.raises(EngineError):
        decide("K4", p0)
    with pytest.raises(ValueError):
        EngineConfig(max_worlds=0)


def test_budget_is_enforced():
    f = parse("~(<0>p0 & <0>~p0 & <1>p1 & <1>~p1 & <0>(p0 & p1) & <0>(~p0 & ~p1))")
    with pytest.raises(ResourceLimitExceeded):
        decide_j(f, EngineConfig(budget=3))


def test_certificates_are_rooted_j_models():
    for f in formula_corpus(CorpusConfig(size=80, seed=3)):
        v = decide_glp(f)
        if v.is_invalid:
            m = v.countermodel
            assert is_j_frame(m).ok
            assert find_root(m) == v.refuted_at
            assert not satisfies(m, v.refuted_at, v.query)


def test_cap_monotonicity():
    for f in formula_corpus(CorpusConfig(size=60, seed=11)):
        verdicts = [decide_glp(f, EngineConfig(max_worlds=c)) for c in range(1, 7)]
        first = next((i for i, v in enumerate(verdicts) if v.is_invalid), None)
        if first is not None:
            assert all(v.is_invalid for v in verdicts[first:])
            assert all(v.countermodel == verdicts[first].countermodel for v in verdicts[first:])


def test_proof_search_agreement():
    for pr in shipped_proofs():
        assert check_proof(pr).ok
        assert decide_glp(pr.lines[-1].formula)


# -------------------------------------------------- brute-force oracle


def _rooted_j_frames(size: int, n_mod: int = 2):
    """Every J-frame on worlds 0..size-1 with root 0 (labelled, not up to iso)."""
    pairs = [(x, k, y) for x in range(size) for y in range(size) if x != y for k in range(n_mod)]
    frames = set()
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        edges = frozenset(e for e, b in zip(pairs, bits) if b)
        if j_closure(edges) != edges:
            continue
        if all(any((0, k, x) in edges for k in range(n_mod)) for x in range(1, size)):
            frames.add(edges)
    return frames


FRAMES = {s: _rooted_j_frames(s) for s in (1, 2, 3)}


def _brute_force_refutable(f, max_size: int) -> bool:
    vs = sorted(variables(f))
    for size in range(1, max_size + 1):
        for edges in FRAMES[size]:
            for bits in itertools.product(range(1 << size), repeat=len(vs)):
                val = {v: [w for w in range(size) if b >> w & 1] for v, b in zip(vs, bits)}
                if not satisfies(model_from_edges(size, edges, val), "w0", f):
                    return True
    return False


@pytest.mark.parametrize("cap", [1, 2, 3])
def test_engine_matches_brute_force_on_small_frames(cap):
    corpus = formula_corpus(CorpusConfig(size=250, depth=4, n_vars=2, seed=5))
    cfg = EngineConfig(max_worlds=cap)
    for f in corpus:
        assert decide_j(f, cfg).is_invalid == _brute_force_refutable(f, cap), f
