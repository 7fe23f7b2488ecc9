"""Rewrite the body of a prenex sentence about word encodings into a
canonical disjunction of position classes.

On an encoding, an assignment of the prefix variables is described up to
indistinguishability by two things: which propositions hold at time 0 on
each trace, and how the marker times of the traces compare (a total
preorder).  For a body of temporal depth ``d`` the truth value is the same
on every assignment of a class once the marker gaps are at least
``N = d + 1``, so the body can be evaluated once per class on a
representative and replaced by the disjunction of the accepted classes.

Each class formula states the letters at time 0 and the marker order.  By
default it also states the pairs that are *not* ordered, which makes the
class formulas mutually exclusive; ``exclusive=False`` omits those
negative conjuncts.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import MalformedFormula, NotPrenex
from .fo import MARKER
from .formula import (
    FALSE, TRUE, And, Atom, Eventually, Not, conj, disj, is_quantifier_free,
    props, split_prefix, temporal_depth,
)
from .traces import TraceAssignment, UPTrace, eval_qf


def ordered_partitions(items):
    """All total preorders on ``items`` as tuples of blocks, lowest block first.

    Blocks keep the input order of their members.  The enumeration order is
    deterministic.
    """
    items = list(items)
    if not items:
        yield ()
        return
    n = len(items)
    # assign each item a rank; ranks must form 0..k-1 without gaps
    for ranks in itertools.product(range(n), repeat=n):
        k = max(ranks) + 1
        if set(ranks) != set(range(k)):
            continue
        yield tuple(tuple(items[i] for i in range(n) if ranks[i] == b) for b in range(k))


@dataclass(frozen=True)
class PositionClass:
    letters: tuple  # per variable: frozenset of propositions at time 0
    blocks: tuple  # ordered partition of the variables by marker time

    def rank(self, var) -> int:
        for b, blk in enumerate(self.blocks):
            if var in blk:
                return b
        raise KeyError(var)


def class_formula(cls: PositionClass, vars_, aps, marker=MARKER, exclusive=True):
    parts = []
    for v, letter in zip(vars_, cls.letters):
        for a in aps:
            parts.append(Atom(a, v) if a in letter else Not(Atom(a, v)))
    for vi in vars_:
        for vj in vars_:
            ordered = cls.rank(vi) <= cls.rank(vj)
            rel = Eventually(And(Atom(marker, vi), Eventually(Atom(marker, vj))))
            if ordered:
                parts.append(rel)
            elif exclusive:
                parts.append(Not(rel))
    return conj(parts)


def representative(cls: PositionClass, vars_, N: int, marker=MARKER) -> TraceAssignment:
    """Letters at time 0; markers of block ``m`` at time ``N (m + 1)``."""
    out = {}
    for v, letter in zip(vars_, cls.letters):
        t = N * (cls.rank(v) + 1)
        stem = [letter] + [frozenset()] * (t - 1) + [frozenset([marker])]
        out[v] = UPTrace(tuple(stem), (frozenset(),))
    return TraceAssignment.of(out)


def position_classes(vars_, aps):
    """Classes consistent with some encoding: variables sharing a marker time
    must also share their letters."""
    aps = sorted(aps)
    letters = [frozenset(c) for r in range(len(aps) + 1) for c in itertools.combinations(aps, r)]
    for blocks in ordered_partitions(vars_):
        # one letter choice per block
        for choice in itertools.product(letters, repeat=len(blocks)):
            per_var = {}
            for blk, letter in zip(blocks, choice):
                for v in blk:
                    per_var[v] = letter
            yield PositionClass(tuple(per_var[v] for v in vars_), blocks)


def simplify_qf(body, vars_, marker=MARKER, exclusive=True, N=None):
    """Class disjunction equivalent to ``body`` on encodings with gaps >= N."""
    if not is_quantifier_free(body):
        raise MalformedFormula("body must be quantifier-free")
    aps = sorted(props(body) - {marker})
    N = temporal_depth(body) + 1 if N is None else N
    vars_ = tuple(vars_)
    alphabet = tuple(sorted(set(aps) | {marker}))
    kept, total = [], 0
    for cls in position_classes(vars_, aps):
        total += 1
        if eval_qf(body, representative(cls, vars_, N, marker), alphabet):
            kept.append(class_formula(cls, vars_, aps, marker, exclusive))
    if not kept:
        return FALSE
    if len(kept) == total:
        return TRUE
    return disj(kept)


def simplify(f, marker=MARKER, exclusive=True):
    """Same prefix as ``f``; the body is replaced by its class disjunction."""
    prefix, body = split_prefix(f)
    if not is_quantifier_free(body):
        raise NotPrenex("simplify expects a prenex sentence")
    vars_ = []
    for _, v in prefix:
        if v not in vars_:
            vars_.append(v)
    from .formula import free_vars

    extra = sorted(free_vars(body) - set(vars_))
    if extra:
        raise MalformedFormula(f"free variables in body: {extra}")
    out = simplify_qf(body, vars_, marker, exclusive)
    from .formula import Exists, Forall

    for q, v in reversed(prefix):
        out = Exists(v, out) if q == "E" else Forall(v, out)
    return out
