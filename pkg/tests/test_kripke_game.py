import json
import random

import pytest

from hypersat.arith.structures import gen_tf
from hypersat.errors import BadArgument, MalformedSystem, NotHyperCTLStar, UniverseMismatch
from hypersat.formula import Atom, Not
from hypersat.game import (
    FALSIFIER, VERIFIER, build_game, export_game, model_check_game, play_length_bound, solve_game,
)
from hypersat.kripke import (
    LassoPath, PathAssignment, PathUniverse, TransitionSystem, enumerate_lassos,
    eval_hyperctlstar, random_system,
)
from hypersat.syntax import parse_formula

from oracles import brute_lassos, random_hyperctl


def C(text):
    return parse_formula(text, "hyperctlstar")


def single(a=True):
    return TransitionSystem.build({"v": {"a"} if a else set()}, [("v", "v")], "v")


def cycle():
    return TransitionSystem.build({0: {"a"}, 1: set()}, [(0, 1), (1, 0)], 0)


# ------------------------------------------------------------------ systems and lassos

def test_system_requires_successors_and_initial():
    with pytest.raises(MalformedSystem):
        TransitionSystem.build({"u": set(), "v": set()}, [("u", "v")], "u")
    with pytest.raises(MalformedSystem):
        TransitionSystem.build({"u": set()}, [("u", "u")], "w")


def test_single_loop_has_one_lasso():
    assert enumerate_lassos(single(), 0, 1) == [LassoPath((), ("v",))]


def test_cycle_lassos_match_brute_force():
    K = cycle()
    got = enumerate_lassos(K, 1, 2)
    assert set(got) == brute_lassos(K, 1, 2)
    assert {p.first for p in got} == {0, 1}


@pytest.mark.parametrize("seed", range(10))
def test_lassos_match_brute_force_on_random_systems(seed):
    K = random_system(random.Random(seed), 3, ("a",))
    assert set(enumerate_lassos(K, 2, 2)) == brute_lassos(K, 2, 2)


def test_zero_loop_bound_is_an_error():
    with pytest.raises(BadArgument):
        enumerate_lassos(single(), 0, 0)


def test_universe_is_suffix_closed():
    K = gen_tf()
    U = PathUniverse.from_bounds(K, 2, 2)
    for p in U.paths:
        for j in range(p.stem_len + p.period):
            assert p.suffix(j) in U.paths


def test_materialised_suffixes_do_not_change_the_universe():
    K = cycle()
    base = [LassoPath((0,), (1, 0))]
    more = base + [LassoPath((), (1, 0)), LassoPath((), (0, 1))]
    assert PathUniverse.build(K, base) == PathUniverse.build(K, more)


def test_recency_decides_where_nested_quantifiers_start():
    K = cycle()
    U = PathUniverse.from_bounds(K, 1, 2)
    asg = PathAssignment().bind("p", LassoPath((), (1, 0)))
    assert asg.rcnt(K) == 1
    assert not eval_hyperctlstar(C("exists q. a[q]"), K, U, asg)
    assert eval_hyperctlstar(C("exists q. a[q]"), K, U, asg.bind("r", LassoPath((), (0, 1))))
    assert PathAssignment().rcnt(K) == 0


# ------------------------------------------------------------------ denotational semantics

def test_single_vertex_examples():
    K = single()
    U = PathUniverse.from_bounds(K, 0, 1)
    assert eval_hyperctlstar(C("exists p. a[p]"), K, U)
    assert not eval_hyperctlstar(C("exists p. !a[p]"), K, U)


def test_bit_system_has_a_one_successor():
    K = gen_tf()
    U = PathUniverse.from_bounds(K, 2, 2)
    assert eval_hyperctlstar(C("exists p. X (fbt[p] & b1[p])"), K, U)
    assert not eval_hyperctlstar(C("forall p. X b1[p]"), K, U)


def test_nested_quantifier_under_globally():
    K = gen_tf()
    U = PathUniverse.from_bounds(K, 2, 2)
    f = C("forall p. X G exists q. !(b0[q] <-> b1[q])")
    assert eval_hyperctlstar(f, K, U)
    assert model_check_game(f, K, U)


def test_universe_from_another_system_is_refused():
    U = PathUniverse.from_bounds(cycle(), 0, 2)
    with pytest.raises(UniverseMismatch):
        eval_hyperctlstar(C("exists p. a[p]"), single(), U)


def test_temporal_outside_quantifier_is_refused():
    from hypersat.formula import Next

    K = single()
    with pytest.raises(NotHyperCTLStar):
        eval_hyperctlstar(Next(C("exists p. a[p]")), K, PathUniverse.from_bounds(K, 0, 1))


# ------------------------------------------------------------------ game

def test_negation_vertex_has_flipped_unique_successor():
    K = single()
    U = PathUniverse.from_bounds(K, 0, 1)
    g = build_game(C("exists p. !a[p]"), K, U)
    neg = [i for i, v in enumerate(g.vertices) if isinstance(v.formula, Not)]
    assert neg
    for i in neg:
        (w,) = g.succ[i]
        assert g.vertices[w].flip == 1 - g.vertices[i].flip
        assert g.vertices[w].formula == g.vertices[i].formula.arg


def test_terminal_atom_winner_follows_label():
    K = single()
    U = PathUniverse.from_bounds(K, 0, 1)
    g = build_game(C("exists p. a[p]"), K, U)
    terms = [i for i in g.terminal_winner if isinstance(g.vertices[i].formula, Atom)]
    assert terms and all(g.terminal_winner[i] == VERIFIER for i in terms)
    g2 = build_game(C("exists p. a[p]"), single(False), PathUniverse.from_bounds(single(False), 0, 1))
    assert all(w == FALSIFIER for w in g2.terminal_winner.values())


def test_solve_single_vertex_game():
    K = single()
    U = PathUniverse.from_bounds(K, 0, 1)
    sol = solve_game(build_game(C("exists p. a[p]"), K, U))
    assert sol.verifier_wins()
    assert sol.winner[0] == VERIFIER


def test_strategy_leads_to_winning_terminal():
    K = gen_tf()
    U = PathUniverse.from_bounds(K, 2, 2)
    g = build_game(C("exists p. X (fbt[p] & b1[p])"), K, U)
    sol = solve_game(g)
    v = g.initial
    while v not in g.terminal_winner:
        v = sol.strategy[v] if g.owner[v] == VERIFIER else sol.counter_strategy.get(v, g.succ[v][0])
        assert sol.winner[v] == VERIFIER
    assert g.terminal_winner[v] == VERIFIER


def _random_instance(seed):
    rng = random.Random(seed)
    K = random_system(rng, rng.randint(1, 4), ("a", "b"))
    U = PathUniverse.from_bounds(K, 2, 2)
    f = random_hyperctl(rng, ("a", "b"), 3)
    return f, K, U


@pytest.mark.parametrize("seed", range(40))
def test_game_agrees_with_denotational_semantics(seed):
    f, K, U = _random_instance(seed)
    assert model_check_game(f, K, U) == eval_hyperctlstar(f, K, U)


@pytest.mark.parametrize("seed", range(15))
def test_plays_respect_the_length_bound(seed):
    f, K, U = _random_instance(seed)
    g = build_game(f, K, U)
    assert g.longest_play() <= play_length_bound(f)


def test_export_game_is_jsonl():
    K = single()
    U = PathUniverse.from_bounds(K, 0, 1)
    g = build_game(C("exists p. a[p]"), K, U)
    lines = export_game(g, solve_game(g)).splitlines()
    header = json.loads(lines[0])
    assert header["format"] == "game"
    kinds = {json.loads(ln)["kind"] for ln in lines[1:]}
    assert "vertex" in kinds
