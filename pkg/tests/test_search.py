import itertools
import random

import pytest

from hypersat.errors import BadArgument, ResourceLimit
from hypersat.search import BOUND_EXHAUSTED, SAT, SearchBounds, candidate_traces, sat_search
from hypersat.syntax import parse_formula
from hypersat.traces import UPTrace

from oracles import brute_hyperltl, random_prenex


def Q(text):
    return parse_formula(text, "hyperltl")


def all_lassos(alphabet, max_stem, max_loop):
    letters = [frozenset(c) for r in range(len(alphabet) + 1) for c in itertools.combinations(alphabet, r)]
    out = set()
    for s in range(max_stem + 1):
        for p in range(1, max_loop + 1):
            for stem in itertools.product(letters, repeat=s):
                for loop in itertools.product(letters, repeat=p):
                    out.add(UPTrace(stem, loop))
    return out


def test_single_trace_model():
    out = sat_search(Q("exists p. a[p]"), SearchBounds(1, 1, 1, ("a",)))
    assert out.status == SAT and out.sat
    assert out.model.traces == (UPTrace((), (frozenset("a"),)),)


def test_contradiction_exhausts_the_bound():
    out = sat_search(Q("exists p. a[p] & !a[p]"), SearchBounds(2, 1, 1, ("a",)))
    assert out.status == BOUND_EXHAUSTED and out.model is None


def test_two_traces_needed():
    f = Q("exists p. exists q. a[p] & !a[q]")
    out = sat_search(f, SearchBounds(2, 0, 1, ("a",)))
    assert out.sat and len(out.model) == 2
    assert sat_search(f, SearchBounds(1, 0, 1, ("a",))).status == BOUND_EXHAUSTED


def test_candidate_traces_match_brute_enumeration():
    for bounds in (SearchBounds(1, 0, 1, ("a",)), SearchBounds(1, 2, 2, ("a", "b")), SearchBounds(1, 3, 1, ("a",))):
        got = candidate_traces(bounds)
        assert len(got) == len(set(got))
        assert set(got) == all_lassos(bounds.alphabet, bounds.max_stem, bounds.max_loop)


def test_filter_keeps_exactly_the_passing_traces():
    bounds = SearchBounds(1, 2, 1, ("a",))
    body = Q("G (a[u] -> X !a[u])")
    got = set(candidate_traces(bounds, body))
    want = {t for t in all_lassos(("a",), 2, 1) if brute_hyperltl(Q("forall u. G (a[u] -> X !a[u])"), [t])}
    assert got == want


AB = ("a", "b")


def _random_sentence(seed):
    return random_prenex(random.Random(seed), AB, 2, 4)


@pytest.mark.parametrize("seed", range(20))
def test_search_agrees_with_exhaustive_subsets(seed):
    f = _random_sentence(seed)
    bounds = SearchBounds(2, 1, 1, AB)
    pool = sorted(all_lassos(AB, 1, 1), key=lambda t: t.key(AB))
    models = [s for k in (1, 2) for s in itertools.combinations(pool, k) if brute_hyperltl(f, s)]
    out = sat_search(f, bounds)
    assert out.sat == bool(models)
    if out.sat:
        assert brute_hyperltl(f, out.model.traces)
        assert len(out.model) == min(len(s) for s in models)


def test_random_sample_has_both_outcomes():
    got = {sat_search(_random_sentence(s), SearchBounds(2, 1, 1, AB)).status for s in range(20)}
    assert got == {SAT, BOUND_EXHAUSTED}


def test_result_does_not_depend_on_jobs():
    f = Q("exists p. exists q. exists r. a[p] & X a[q] & X X a[r] & !a[q] & !X a[r] & !(a[p] & X a[p])")
    bounds = SearchBounds(3, 2, 1, ("a",))
    one = sat_search(f, bounds, jobs=1)
    two = sat_search(f, bounds, jobs=2)
    assert one.status == two.status
    assert one.model == two.model


def test_larger_bounds_keep_satisfiable_sentences_satisfiable():
    f = Q("exists p. exists q. X a[p] & !X a[q] & G (a[p] -> X !a[p])")
    small = sat_search(f, SearchBounds(2, 1, 2, ("a",)))
    assert small.sat
    for b in (SearchBounds(3, 1, 2, ("a",)), SearchBounds(2, 2, 2, ("a",)), SearchBounds(2, 1, 3, ("a",))):
        assert sat_search(f, b).sat


def test_resource_limits():
    f = Q("exists p. exists q. exists r. a[p] & b[q] & !a[r] & !b[r] & G (a[p] <-> !b[q]) & F (a[r] & b[r])")
    with pytest.raises(ResourceLimit):
        sat_search(f, SearchBounds(3, 2, 2, ("a", "b")), max_candidates=5)
    with pytest.raises(ResourceLimit):
        sat_search(f, SearchBounds(3, 2, 2, ("a", "b")), timeout=0.0)


def test_bad_inputs():
    with pytest.raises(BadArgument):
        SearchBounds(0, 1, 1)
    with pytest.raises(BadArgument):
        sat_search(Q("a[p]"), SearchBounds())


def test_alphabet_defaults_to_the_sentence_propositions():
    out = sat_search(Q("exists p. b[p] & X !b[p]"), SearchBounds(1, 1, 1))
    assert out.sat and out.model.alphabet == ("b",)
    assert out.stats["candidates_examined"] >= 1
