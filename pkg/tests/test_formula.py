import random

import pytest
from hypothesis import given, settings, strategies as st

from hypersat.errors import NotPrenex, QuantifierUnderTemporal
from hypersat.formula import (
    And, Atom, Eventually, Exists, Forall, Globally, Iff, Implies, Next, Not,
    Or, Until, classify_prenex, conj, desugar, dual, free_vars, is_core,
    polarity_analysis, prenex, split_prefix, temporal_depth,
)
from hypersat.syntax import parse_formula

from oracles import random_prenex, random_qf

DET = "forall p. forall q. G (i[p] <-> i[q]) -> G (o[p] <-> o[q])"


def P(text, dialect="hyperctlstar"):
    return parse_formula(text, dialect=dialect)


def test_classify_input_determinism_is_pi1():
    c = classify_prenex(P(DET, "hyperltl"))
    assert (c.kind, c.level) == ("Pi", 1)


def test_classify_single_existential_block():
    c = classify_prenex(P("exists p. a[p]"))
    assert (c.kind, c.level) == ("Sigma", 1)


def test_classify_forall_exists_is_pi2():
    c = classify_prenex(P("forall p1. exists p2. F (x[p1] & X x[p2])"))
    assert (c.kind, c.level) == ("Pi", 2)


def test_classify_counts_blocks_not_quantifiers():
    c = classify_prenex(P("exists a. exists b. forall c. exists d. t[a]"))
    assert (c.kind, c.level, c.blocks) == ("Sigma", 3, 3)


def test_classify_rejects_non_prenex():
    with pytest.raises(NotPrenex):
        classify_prenex(P("forall p. G exists q. a[q]"))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_dual_swaps_kind_keeps_level(seed):
    rng = random.Random(seed)
    f = random_prenex(rng, ["a", "b"], rng.randint(1, 4), 2)
    c, d = classify_prenex(f), classify_prenex(dual(f))
    assert c.level == d.level and {c.kind, d.kind} == {"Sigma", "Pi"}


def test_temporal_depth_examples():
    assert temporal_depth(P("exists p. a[p]")) == 0
    assert temporal_depth(P("exists p. X X a[p]")) == 2
    assert temporal_depth(P("exists x. exists y. F (o[x] & F o[y])")) == 2


def test_depth_of_until_and_globally():
    assert temporal_depth(P("exists p. a[p] U (b[p] U a[p])")) == 2
    assert temporal_depth(P("exists p. G !a[p]")) == 1


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000))
def test_depth_invariant_under_desugaring(seed):
    f = random_qf(random.Random(seed), ["p", "q"], ["a", "b"], 4)
    g = desugar(f)
    assert is_core(g)
    assert temporal_depth(g) == temporal_depth(f)


def test_polarity_examples():
    r = polarity_analysis(P("exists p. a[p]"))
    assert (r.existential, r.universal) == (1, 0)
    r = polarity_analysis(P("!exists p. a[p]"))
    assert (r.existential, r.universal) == (0, 1)
    r = polarity_analysis(P("forall p1. G exists p2. a[p1] & b[p2]"))
    assert (r.existential, r.universal) == (1, 1)


def test_polarity_under_implication_antecedent():
    r = polarity_analysis(P("(exists p. a[p]) -> exists q. b[q]"))
    assert [o.existential for o in r.occurrences] == [False, True]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_outer_negation_swaps_counts(seed):
    rng = random.Random(seed)
    f = random_prenex(rng, ["a"], rng.randint(1, 3), 2)
    r, s = polarity_analysis(f), polarity_analysis(Not(f))
    assert (r.existential, r.universal) == (s.universal, s.existential)
    assert r.existential + r.universal == len(split_prefix(f)[0])


def test_prenex_independent_conjuncts():
    g = prenex(P("(exists p. a[p]) & (forall q. b[q])"))
    assert g == Exists("p", Forall("q", And(Atom("a", "p"), Atom("b", "q"))))


def test_prenex_pushes_negation_through():
    g = prenex(P("forall p. !exists q. a[p] & b[q]"))
    assert g == Forall("p", Forall("q", Not(And(Atom("a", "p"), Atom("b", "q")))))


def test_prenex_of_column_successor_sentence_is_pi2():
    f = P("(exists p. x[p]) & (forall p1. exists p2. F (x[p1] & X x[p2]))")
    c = classify_prenex(prenex(f))
    assert c.kind == "Pi" and c.level == 2


def test_prenex_refuses_quantifier_under_temporal():
    with pytest.raises(QuantifierUnderTemporal):
        prenex(P("forall p. G exists q. a[q]"))


def test_prenex_renames_clashing_variables():
    g = prenex(P("(exists p. a[p]) & (forall p. b[p])"))
    prefix, _ = split_prefix(g)
    assert len({v for _, v in prefix}) == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_prenex_preserves_free_variables(seed):
    rng = random.Random(seed)
    a = random_prenex(rng, ["a"], 2, 2)
    b = Or(Atom("b", "z"), random_qf(rng, ["z"], ["b"], 1))
    f = And(a, b)
    assert free_vars(prenex(f)) == free_vars(f) == {"z"}


def test_conj_of_nothing_is_true():
    from hypersat.formula import TRUE

    assert conj() == TRUE
