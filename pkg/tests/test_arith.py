
from glp.arith import (
    InferenceRule, arith_unifiable, arith_unifiable_glps, is_arith_admissible, rule_derivable,
    unifiability_query,
)
from glp.corpus import CorpusConfig, formula_corpus
from glp.syntax import BOT, TOP, Var, parse

p0 = Var(0)


def test_unifiability_examples():
    assert arith_unifiable(p0, cross_check=True)
    assert arith_unifiable(parse("[1]p0"), cross_check=True)
    ans = arith_unifiable(parse("<0>T"), cross_check=True)
    assert not ans and ans.cap_bounded


def test_query_uses_language_size():
    assert unifiability_query(p0) == parse("<0>T -> ~[0]p0")
    assert unifiability_query(parse("[1]p0")) == parse("<2>T -> ~[0][1]p0")


def test_criteria_agree_on_corpus():
    for f in formula_corpus(CorpusConfig(size=60, depth=3, seed=21)):
        assert arith_unifiable(f).yes == arith_unifiable_glps(f).yes, f


def test_admissibility_examples():
    assert is_arith_admissible(InferenceRule((parse("<0>T"),), BOT))
    assert is_arith_admissible(InferenceRule((p0,), parse("[0]p0")))
    ans = is_arith_admissible(InferenceRule((TOP,), parse("[0]F")))
    assert not ans and ans.basis.is_invalid


def test_identity_rules_are_admissible():
    for f in formula_corpus(CorpusConfig(size=30, depth=3, seed=2)):
        assert is_arith_admissible(InferenceRule((f,), f))


def test_derivable_rules_are_admissible():
    corpus = formula_corpus(CorpusConfig(size=40, depth=2, seed=8))
    checked = 0
    for a, b in zip(corpus, corpus[1:]):
        if rule_derivable([a], b):
            checked += 1
            assert is_arith_admissible(InferenceRule((a,), b))
    assert checked >= 5
