"""Acceptance suite: one test per criterion, each timed against its limit.

Every criterion records a ``PASS``/``FAIL`` line that is printed at the end
of the pytest run (see ``conftest.py``) and when this file is run as a
script.
"""
import random
import time

import pytest

from hypersat.arith import parse_arith
from hypersat.arith.ops import (
    ADD, ARGR, MULT, cl_top_member, op_traces, phi_op_conjuncts, t_op_member,
)
from hypersat.arith.structures import bits_trace, gen_phi_set, gen_tsc, tsc_universe
from hypersat.arith.translate import translate_e3a
from hypersat.fo import NONAFFINE_STRETCHES, encode_word, eval_fo, fo_to_hyperltl
from hypersat.formula import Exists, classify_prenex, conj, conjuncts, split_prefix, temporal_depth
from hypersat.game import model_check_game
from hypersat.hierarchy import gen_hierarchy_hard, gen_phi_b, gen_phi_omega, gen_split_combinator
from hypersat.kripke import PathUniverse, eval_hyperctlstar, random_system
from hypersat.search import SearchBounds, sat_search
from hypersat.simplify import simplify
from hypersat.syntax import parse_formula, print_formula
from hypersat.tiling import (
    brute_tiling, check_tiling, constant_tileset, decode_tiling, gen_diagonal_formula,
    gen_quadrant_formula, quadrant_conjuncts, truncated_quadrant_model,
)
from hypersat.traces import (
    TraceAssignment, TraceSet, UPTrace, eval_hyperltl, eval_qf, expansion_table, random_subsets,
    random_trace,
)

from corpus import FO_POOL, STRETCHES, corpus_words
from oracles import random_ast, random_hyperctl, random_prenex, random_qf, unrolled_qf

RESULTS = {}


def record(n, ok, detail, elapsed, limit):
    ok = ok and elapsed < limit
    RESULTS[n] = f"{'PASS' if ok else 'FAIL'} criterion {n:>2}: {detail} ({elapsed:.2f} s, limit {limit:g} s)"
    return ok


class timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def corpus_values():
    """``{(sentence index, word): [value per stretch]}`` over the whole corpus."""
    out = {}
    for k, f in enumerate(FO_POOL):
        g = fo_to_hyperltl(f)
        for w in corpus_words():
            out[(k, w)] = [eval_hyperltl(g, encode_word(w, s)) for s in STRETCHES]
    return out


def test_criterion_01_fo_translation_agrees():
    with timer() as t:
        vals = corpus_values()
        bad = [(k, w) for (k, w), vs in vals.items() if any(v != eval_fo(FO_POOL[k], w) for v in vs)]
    total = len(vals) * len(STRETCHES)
    ok = record(1, not bad, f"FO vs HyperLTL agreement on {total} cases, {len(bad)} disagreements", t.elapsed, 10)
    assert ok, bad[:5]


def test_criterion_02_stretch_invariance():
    with timer() as t:
        vals = corpus_values()
        bad = [key for key, vs in vals.items() if len(set(vs)) != 1]
    ok = record(2, not bad, f"stretch invariance on {len(vals)} word/sentence pairs, {len(bad)} violations",
                t.elapsed, 10)
    assert ok, bad[:5]


def test_criterion_03_simplification_equivalence():
    with timer() as t:
        bad, n = [], 0
        for k, f in enumerate(FO_POOL):
            g = fo_to_hyperltl(f)
            N = temporal_depth(g) + 1
            h = simplify(g)
            if split_prefix(h)[0] != split_prefix(g)[0]:
                bad.append((k, "prefix"))
            before, after = classify_prenex(g), classify_prenex(h)
            if (before.kind, before.level) != (after.kind, after.level):
                bad.append((k, "class"))
            for w in corpus_words():
                want = eval_hyperltl(g, encode_word(w, lambda i: N * (i + 1)))
                for s in NONAFFINE_STRETCHES:
                    n += 1
                    if eval_hyperltl(h, encode_word(w, s)) != want:
                        bad.append((k, w, s.name))
    ok = record(3, not bad, f"simplified sentences equivalent on {n} cases, prefixes kept, {len(bad)} failures",
                t.elapsed, 30)
    assert ok, bad[:5]


def test_criterion_04_game_matches_semantics():
    with timer() as t:
        bad, trues = [], 0
        for seed in range(200):
            rng = random.Random(seed)
            K = random_system(rng, rng.randint(1, 4), ("a", "b"))
            U = PathUniverse.from_bounds(K, 2, 2)
            f = random_hyperctl(rng, ("a", "b"), 3)
            v = eval_hyperctlstar(f, K, U)
            trues += v
            if model_check_game(f, K, U) != v:
                bad.append(seed)
    ok = record(4, not bad and 0 < trues < 200,
                f"game vs denotational on 200 instances ({trues} true), {len(bad)} disagreements", t.elapsed, 30)
    assert ok, bad[:5]


def test_criterion_05_expansion_table_matches_unrolled_oracle():
    with timer() as t:
        bad = []
        for seed in range(500):
            rng = random.Random(10_000 + seed)
            aps = ("a", "b")[: rng.randint(1, 2)]
            vs = ("p", "q", "r")[: rng.randint(1, 3)]
            body = random_qf(rng, vs, aps, 4)
            asg = TraceAssignment.of({v: random_trace(rng, aps, 4, 3) for v in vs})
            table = expansion_table(body, asg, aps)
            want = unrolled_qf(body, asg.as_dict())
            if not table.consistent() or table.value(body, 0) != want or eval_qf(body, asg, aps) != want:
                bad.append(seed)
    ok = record(5, not bad, f"expansion tables vs unrolled evaluator on 500 instances, {len(bad)} mismatches",
                t.elapsed, 20)
    assert ok, bad[:5]


def test_criterion_06_tiling_truncation_pattern():
    want = [True, False, True, True, True, True, True]
    with timer() as t:
        ts = constant_tileset()
        assert brute_tiling(ts, "quadrant", 4)[0]
        patterns = {n: [eval_hyperltl(c, truncated_quadrant_model(ts, n)) for c in quadrant_conjuncts(ts)]
                    for n in (1, 2, 3)}
        bad = {n: p for n, p in patterns.items() if p != want}
    ok = record(6, not bad, "truncated quadrant models n = 1..3 give the expected conjunct pattern"
                if not bad else f"unexpected patterns {bad}", t.elapsed, 5)
    assert ok


def test_criterion_07_diagonal_tiling_search():
    with timer() as t:
        ts = constant_tileset()
        out = sat_search(gen_diagonal_formula(ts, 2), SearchBounds(4, 6, 1))
        grid, cols = decode_tiling(ts, out.model) if out.sat else (None, 0)
        valid = bool(grid) and check_tiling(ts, "diagonal", grid, cols)
    ok = record(7, out.sat and valid,
                f"diagonal formula (height 2): {out.status}, decoded {cols} columns, checker {'accepts' if valid else 'rejects'}",
                t.elapsed, 60)
    assert ok


def test_criterion_08_arithmetic_oracles():
    with timer() as t:
        closure = [UPTrace((), (frozenset([ADD]),)),
                   UPTrace((frozenset([MULT]), frozenset([ARGR, MULT])), (frozenset([MULT]),))]
        examples = [cl_top_member(c) and not t_op_member(c) for c in closure]
        pattern = [eval_hyperltl(c, TraceSet(tuple(op_traces(2)))) for c in phi_op_conjuncts()]
        pattern_ok = [pattern[i] for i in (0, 1, 2, 4, 6)] == [True] * 5 and pattern[3] is False
    ok = record(8, all(examples) and pattern_ok,
                f"closure examples {examples}, truncated operation-set pattern {''.join('TF'[not v] for v in pattern)}",
                t.elapsed, 10)
    assert ok


def test_criterion_09_subset_and_superset_closure():
    with timer() as t:
        bad, down, up = [], 0, 0
        for seed in range(200):
            rng = random.Random(20_000 + seed)
            f = random_prenex(rng, ("a", "b"), rng.randint(1, 2), 3, universal_only=True)
            T = TraceSet(tuple(random_trace(rng, ("a", "b"), 2, 2) for _ in range(4)), ("a", "b"))
            if eval_hyperltl(f, T):
                down += 1
                sub = TraceSet(random_subsets(T, 1, seed)[0], T.alphabet)
                if not eval_hyperltl(f, sub):
                    bad.append(seed)
            else:
                up += 1
                extra = TraceSet(tuple(random_trace(rng, ("a", "b"), 2, 2) for _ in range(2)), ("a", "b"))
                if eval_hyperltl(f, T.union(extra)):
                    bad.append(seed)
    ok = record(9, not bad and down and up,
                f"200 universal cases ({down} subset, {up} superset checks), {len(bad)} violations", t.elapsed, 20)
    assert ok, bad[:5]


def test_criterion_10_translation_smoke_equivalence():
    """The bounded universe holds the fbt paths for {0}, {1}, {} and N and every
    operation trace with arguments at most 2.  The translated body is
    evaluated; the side conditions are reported conjunct by conjunct, and
    only the step conjunct (every operation trace has successors with larger
    arguments) is expected to fail on a finite universe."""
    with timer() as t:
        K = gen_tsc(6)
        numbers = [bits_trace([1]), bits_trace([0, 1]), bits_trace([0]), bits_trace([], (1,))]
        U = tsc_universe(K, numbers, op_traces(2))
        pos = translate_e3a(parse_arith("exists x:num. x + x = x"), "second_order_fb")
        neg = translate_e3a(parse_arith("exists x:num. x + x = x & x < x"), "second_order_fb")
        body_true = eval_hyperctlstar(pos.body, K, U)
        neg_false = not eval_hyperctlstar(neg.body, K, U)
        side = [eval_hyperctlstar(c, K, U) for c in conjuncts(pos.phi0)]
        failing = [i for i, v in enumerate(side) if not v]
        step = [i for i, c in enumerate(conjuncts(pos.phi0)) if "p1" in print_formula(c) and "p2" in print_formula(c)]
    ok = record(10, body_true and neg_false and failing == step,
                f"body {'holds' if body_true else 'fails'}, negated variant {'false' if neg_false else 'true'}, "
                f"side conditions {len(side) - len(failing)}/{len(side)} (failing {failing}, step conjuncts {step})",
                t.elapsed, 30)
    assert ok


def generator_outputs():
    ts = constant_tileset()
    ex = parse_formula("exists p. a[p]", "hyperltl")
    yield gen_quadrant_formula(ts)
    yield gen_diagonal_formula(ts)
    yield gen_diagonal_formula(ts, 2)
    for f in FO_POOL:
        yield fo_to_hyperltl(f)
        yield simplify(fo_to_hyperltl(f))
    yield gen_phi_b(["a", "b"])
    yield gen_split_combinator(ex, parse_formula("forall p. G b[p]", "hyperltl"))
    yield gen_phi_omega()
    yield gen_hierarchy_hard(ex, 1)
    yield conj(phi_op_conjuncts())
    yield conj(gen_phi_set())
    for text in ("exists x:num. x + x = x", "exists F:setset. exists y:set. y in F"):
        variant = "second_order_fb" if "setset" not in text else "third_order"
        yield translate_e3a(parse_arith(text), variant).sentence


def test_criterion_11_round_trips():
    with timer() as t:
        bad = []
        for seed in range(1000):
            f = Exists("p", random_ast(random.Random(30_000 + seed), 6))
            if parse_formula(print_formula(f)) != f:
                bad.append(seed)
        outputs = list(generator_outputs())
        for i, f in enumerate(outputs):
            if parse_formula(print_formula(f), "hyperctlstar") != f:
                bad.append(f"generator {i}")
    ok = record(11, not bad, f"1000 random ASTs and {len(outputs)} generator outputs, {len(bad)} failures",
                t.elapsed, 10)
    assert ok, bad[:5]


if __name__ == "__main__":  # pragma: no cover
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
