import pytest

from glp.corpus import CorpusConfig, formula_corpus
from glp.engine import decide_glp
from glp.proofs import box_refl_chain_proof, check_proof, q_k
from glp.syntax import (
    BOT, IDENTITY, TOP, Box, Iff, Implies, Substitution, Var, apply_subst, compose_subst,
    dia_power, is_closed, parse, variables,
)
from glp.unify import (
    NotUnifiable, QFamily, Unifiable, Unknown, UnifyError, chain_assignments,
    check_generality, closed_formulas, is_unifier, least_reflection_rank, q_big,
    q_chain_witness, q_star, reduction_rank, reflection_extension_proves, search_ground_unifier,
)

p0, p1 = Var(0), Var(1)
BOX1 = Box(1, p0)


def test_q_families():
    assert q_k(2) == parse("p0 | [0]p0")
    assert q_big(2) == parse("([0]p0 -> p0) & ([0](p0 | [0]p0) -> p0 | [0]p0)")
    assert q_star(2) == parse("p0 & <0>p0")
    assert QFamily("qstar", 3).formula() == parse("p0 & <0>(p0 & <0>p0)")
    with pytest.raises(ValueError):
        QFamily("q", 0)
    with pytest.raises(ValueError):
        QFamily("qq", 1)


def test_is_unifier_examples():
    assert is_unifier(Substitution({0: parse("[0]p0 -> p0")}), BOX1)
    for k in (1, 2, 3):
        assert is_unifier(Substitution({0: dia_power(0, k)}), BOX1)
    v = is_unifier(Substitution({0: parse("[0]F")}), BOX1)
    assert v.is_invalid and len(v.countermodel.worlds) == 3


def test_generality():
    sigma = Substitution({0: parse("[0]p0 -> p0")})
    assert check_generality(Substitution({0: parse("<0>T")}), sigma, Substitution({0: BOT}))
    assert check_generality(sigma, sigma, IDENTITY)
    bad = check_generality(Substitution({0: TOP}), Substitution({0: BOT}), IDENTITY)
    assert not bad and bad.failures == [0]


def test_generality_preorder_on_corpus():
    unifiers = [QFamily("qbig", k).substitution() for k in (1, 2)] + [Substitution({0: TOP})]
    for s in unifiers:
        assert check_generality(s, s, IDENTITY)
    # Q^1 <= Q^2 via theta1 and T <= Q^1 via theta2 give T <= Q^2 via theta2.theta1
    th1, _ = q_chain_witness(1, 2)
    assert check_generality(unifiers[0], unifiers[1], th1)
    th2 = Substitution({0: TOP})
    assert check_generality(unifiers[2], unifiers[0], th2)
    assert check_generality(unifiers[2], unifiers[1], compose_subst(th2, th1))


def test_q_chain():
    for i, j in [(1, 1), (1, 2), (2, 3)]:
        theta, verdict = q_chain_witness(i, j)
        assert verdict and theta == Substitution({0: q_big(i)})
    with pytest.raises(ValueError):
        q_chain_witness(3, 2)


def test_q_big_are_unifiers_and_chain_proofs_agree():
    for k in (1, 2, 3):
        assert is_unifier(QFamily("qbig", k).substitution(), BOX1)
        f = Box(1, Implies(q_k(k), p0))
        assert decide_glp(f) and check_proof(box_refl_chain_proof(k)).ok


def test_closing_remark_instances():
    for n in (1, 2):
        assert decide_glp(Iff(q_big(n), Implies(q_k(n + 1), p0)))


def test_single_reflection_does_not_give_two_steps():
    for psi in (p0, BOT, parse("[0]p0"), parse("<0>T")):
        v = decide_glp(Implies(Implies(Box(0, psi), psi), dia_power(0, 2)))
        assert v.is_invalid


def test_reflection_ranks():
    assert least_reflection_rank(parse("[0]p1 -> p1"), 3) == 2
    assert least_reflection_rank(TOP, 3) == 1
    assert least_reflection_rank(BOT, 3) is None
    assert reduction_rank(TOP, TOP, 4) == 2
    assert reduction_rank(parse("<0>T"), TOP, 4) == 1
    with pytest.raises(UnifyError):
        reduction_rank(TOP, p0, 3)


def test_reflection_extension():
    assert reflection_extension_proves(parse("[0]p1 -> p1"))
    assert reflection_extension_proves(parse("<0>T"))
    assert reflection_extension_proves(BOT).is_invalid


def test_ground_search_examples():
    r = search_ground_unifier(BOX1)
    assert isinstance(r, Unifiable) and r.witness == Substitution({0: TOP})
    assert isinstance(search_ground_unifier(parse("p0 & ~p0")), NotUnifiable)
    r = search_ground_unifier(p0)
    assert isinstance(r, Unifiable) and r.witness == Substitution({0: TOP})
    r = search_ground_unifier(parse("p0 <-> [0]F"), 3)
    assert isinstance(r, Unifiable) and r.witness[0] == parse("[0]F")


def test_ground_witnesses_are_unifiers():
    for f in formula_corpus(CorpusConfig(size=25, depth=2, seed=9)):
        r = search_ground_unifier(f, 3)
        assert isinstance(r, (Unifiable, NotUnifiable, Unknown))
        if isinstance(r, Unifiable):
            assert all(is_closed(g) for g in r.witness.values())
            assert decide_glp(apply_subst(r.witness, f))


def test_enumeration_order():
    small = list(closed_formulas(2, 1))
    assert small == [BOT, TOP, parse("~F"), parse("~T"), parse("[0]F"), parse("[0]T"), parse("<0>F"), parse("<0>T")]


def test_chain_filter_is_sound():
    # a GLP theorem holds on the chain under every valuation
    for f in formula_corpus(CorpusConfig(size=120, depth=3, seed=4)):
        if decide_glp(f):
            assert len(chain_assignments(f, 4)) == 16 ** len(variables(f))
    assert chain_assignments(parse("p0 & ~p0")) == []



def test_ground_search_unknown_when_witness_is_too_large():
    f = parse("p0 <-> <0><0><0>T")
    assert isinstance(search_ground_unifier(f, 3), Unknown)
    r = search_ground_unifier(f, 4)
    assert isinstance(r, Unifiable) and r.witness[0] == parse("<0><0><0>T")
