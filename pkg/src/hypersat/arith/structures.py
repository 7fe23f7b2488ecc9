"""Sentences and bounded transition systems for representing sets and paths.

* :func:`gen_phi_set` forces a separate initial successor for every set of
  numbers (so models have continuum size).
* :func:`gen_kset` is a finite truncation of the intended model: a binary
  tree of ``fbt`` vertices plus one ``pset`` chain per subset of ``{0..k}``.
* :func:`gen_tf` is the three-vertex system whose paths spell every 0/1
  sequence.
* :func:`gen_prefix_tree` is the tree of prefixes of the closure of the
  operation set, cut at a depth.
* :func:`gen_tsc` glues the last two at their initial vertices.

Propositions ``b0`` and ``b1`` stand for the bits 0 and 1.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..errors import BadArgument, ResourceLimit
from ..formula import (
    And, Atom, Exists, Forall, Globally, Iff, Implies, Next, Not, Or, conj,
)
from ..kripke import LassoPath, PathUniverse, TransitionSystem
from ..traces import UPTrace
from .ops import ADD, ARGL, ARGR, MULT, OP_ALPHABET, RES, is_op_prefix

FBT, PSET, B0, B1 = "fbt", "pset", "b0", "b1"
MAX_VERTICES = 200_000


@dataclass(frozen=True)
class StructureGenConfig:
    depth: int = 2  # tree depth d
    subset_bound: int = 1  # subsets of {0..k}
    path_length: int = 3  # chain positions 0..m

    def __post_init__(self):
        if min(self.depth, self.subset_bound, self.path_length) < 0:
            raise BadArgument("structure bounds must be non-negative")


def gen_phi_set() -> list:
    """The five conjuncts (as a list; use ``conj`` for the sentence)."""
    a = Atom
    p, p0, p1, q = "p", "p0", "p1", "q"
    c1 = Forall(p, And(
        conj(a(FBT, p), Not(a(B0, p)), Not(a(B1, p)), Not(a(PSET, p))),
        Next(Globally(And(Iff(a(PSET, p), Not(a(FBT, p))), Iff(a(B0, p), Not(a(B1, p)))))),
    ))
    c2 = Forall(p, Globally(Implies(a(FBT, p), conj(
        Exists(p0, Next(And(a(FBT, p0), a(B0, p0)))),
        Exists(p1, Next(And(a(FBT, p1), a(B1, p1)))),
        Implies(Or(a(B0, p), a(B1, p)), Forall(q, Next(a(FBT, q)))),
    ))))
    c3 = Forall(p, Globally(Implies(a(PSET, p), Globally(a(PSET, p)))))
    c4 = Forall(p, Implies(Next(a(FBT, p)), Exists(q, Next(And(a(PSET, q), Globally(Iff(a(B0, p), a(B0, q))))))))
    c5 = Forall(p, Globally(Implies(a(PSET, p), Forall(q, Globally(Iff(a(B0, p), a(B0, q)))))))
    return [c1, c2, c3, c4, c5]


def _subset_id(A) -> str:
    return "{" + ",".join(map(str, sorted(A))) + "}"


def gen_kset(cfg: StructureGenConfig = StructureGenConfig(), family_labels: dict | None = None) -> TransitionSystem:
    """Finite stand-in for the continuum-size set structure.

    Tree vertices ``t<u>`` for bit strings ``u`` of length at most ``d``;
    leaves get back-edges to ``t0`` and ``t1`` so every tree vertex keeps a
    0-successor and a 1-successor.  For each ``A`` of ``{0..k}`` a chain
    ``s<i>:<A>`` for ``i <= m`` whose last vertex loops.  When ``d = 0`` the
    root has only the chains as successors.

    ``family_labels`` maps a subset (as a frozenset) to extra propositions on
    its first chain vertex, used to interpret set-of-sets variables.
    """
    d, k, m = cfg.depth, cfg.subset_bound, cfg.path_length
    size = 2 ** (d + 1) + 2 ** (k + 1) * (m + 1)
    if size > MAX_VERTICES:
        raise ResourceLimit(f"K_set truncation would have {size} vertices")
    family_labels = family_labels or {}
    labels, edges = {}, []
    for n in range(d + 1):
        for bits in itertools.product("01", repeat=n):
            u = "".join(bits)
            v = "t" + u
            labels[v] = {FBT} if not u else {FBT, B0 if u[-1] == "0" else B1}
            if n < d:
                edges += [(v, v + "0"), (v, v + "1")]
            elif n > 0:
                edges += [(v, "t0"), (v, "t1")]
    for r in range(k + 2):
        for A in itertools.combinations(range(k + 1), r):
            A = frozenset(A)
            sid = _subset_id(A)
            for i in range(m + 1):
                v = f"s{i}:{sid}"
                labels[v] = {PSET, B1 if i in A else B0}
                if i == 0:
                    labels[v] |= set(family_labels.get(A, ()))
                    edges.append(("t", v))
                edges.append((v, f"s{i + 1}:{sid}" if i < m else v))
    return TransitionSystem.build(labels, edges, "t")


def gen_tf() -> TransitionSystem:
    labels = {"init": set(), "f0": {FBT, B0}, "f1": {FBT, B1}}
    edges = [("init", "f0"), ("init", "f1")] + [(u, w) for u in ("f0", "f1") for w in ("f0", "f1")]
    return TransitionSystem.build(labels, edges, "init")


def _letter_code(letter) -> str:
    return str(sum(1 << i for i, a in enumerate(OP_ALPHABET) if a in letter))


def _word_id(word) -> str:
    return "w" + ".".join(_letter_code(x) for x in word)


def _completion(word):
    """Suffix letters (after ``word``) of some member extending ``word``."""
    L = len(word)
    mode = ADD if ADD in word[0] else MULT
    seen = {a: next((i for i, x in enumerate(word) if a in x), None) for a in (ARGL, ARGR, RES)}
    for n1 in ([seen[ARGL]] if seen[ARGL] is not None else [L, L + 1]):
        for n2 in ([seen[ARGR]] if seen[ARGR] is not None else [L, L + 1]):
            n3 = n1 + n2 if mode == ADD else n1 * n2
            if (seen[RES] is not None and n3 == seen[RES]) or (seen[RES] is None and n3 >= L):
                top = max(n1, n2, n3)
                tail = []
                for i in range(L, top + 1):
                    tail.append(frozenset([mode] + [a for a, n in ((ARGL, n1), (ARGR, n2), (RES, n3)) if n == i]))
                return mode, tail
    raise BadArgument("word has no completion")


def prefix_words(depth: int, membership: str = "cl_top") -> list:
    """All words of length at most ``depth`` accepted by the prefix predicate."""
    if membership != "cl_top":
        raise BadArgument(f"unknown trace family {membership!r}")
    letters = []
    for mode in (ADD, MULT):
        for r in range(4):
            for extra in itertools.combinations((ARGL, ARGR, RES), r):
                letters.append(frozenset((mode,) + extra))
    level, out = [()], [()]
    for _ in range(depth):
        nxt = []
        for w in level:
            for x in letters:
                wx = w + (x,)
                if is_op_prefix(wx):
                    nxt.append(wx)
        if len(out) + len(nxt) > MAX_VERTICES:
            raise ResourceLimit("prefix tree too large")
        out += nxt
        level = nxt
    return out


def gen_prefix_tree(membership: str = "cl_top", depth: int = 3) -> TransitionSystem:
    """Prefix tree of the closure, cut at ``depth``.

    The root (the empty word) is labelled with the empty set, every other
    vertex with the last letter of its word.  A frontier word continues
    along a fresh chain spelling the rest of one member it extends, ending
    in a looping sink labelled with the mode alone.
    """
    if depth < 1:
        raise BadArgument("depth must be at least 1")
    words = prefix_words(depth, membership)
    labels, edges = {}, []
    for w in words:
        v = _word_id(w)
        labels[v] = set(w[-1]) if w else set()
        if w:
            edges.append((_word_id(w[:-1]), v))
    for mode in (ADD, MULT):
        labels[f"sink:{mode}"] = {mode}
        edges.append((f"sink:{mode}", f"sink:{mode}"))
    for w in words:
        if len(w) != depth:
            continue
        mode, tail = _completion(w)
        prev = _word_id(w)
        for i, x in enumerate(tail):
            v = f"{_word_id(w)}~{i}"
            labels[v] = set(x)
            edges.append((prev, v))
            prev = v
        edges.append((prev, f"sink:{mode}"))
    return TransitionSystem.build(labels, edges, _word_id(()))


def gen_tsc(depth: int = 6) -> TransitionSystem:
    """``gen_tf`` and the prefix tree glued at their initial vertices.

    Vertices are renamed ``f:<id>`` and ``c:<id>``; the shared initial
    vertex is ``init``.
    """
    return gen_tf().glue_initial(gen_prefix_tree("cl_top", depth), "f", "c")


def follow_trace(K: TransitionSystem, trace: UPTrace, start=None) -> LassoPath:
    """The path from ``start`` whose later vertices spell ``trace``.

    Position 0 of the trace is read at the successor of ``start``.  Works for
    systems where every vertex has at most one successor per label, which
    holds for all generators in this module.
    """
    v = K.initial if start is None else start
    seq = [v]
    seen = {}
    i = 0
    while True:
        phase = i if i < trace.stem_len else trace.stem_len + (i - trace.stem_len) % trace.period
        key = (v, phase)
        if key in seen:
            j = seen[key]
            return LassoPath(tuple(seq[:j]), tuple(seq[j:-1]))
        seen[key] = len(seq) - 1
        want = trace.at(i)
        nxt = [w for w in K.succ[v] if K.labels[w] == want]
        if not nxt:
            raise BadArgument(f"no successor of {v!r} labelled {sorted(want)}")
        v = nxt[0]
        seq.append(v)
        i += 1


def bits_trace(bits, loop=(0,)) -> UPTrace:
    """0/1 sequence as an ``fbt`` trace, stem ``bits`` then ``loop`` forever."""
    lab = lambda b: frozenset([FBT, B1 if b else B0])
    return UPTrace(tuple(lab(b) for b in bits), tuple(lab(b) for b in loop))


def tsc_universe(K: TransitionSystem, fbt_traces=(), op_traces=()) -> PathUniverse:
    """Suffix-closed universe of the paths spelling the given traces."""
    paths = [follow_trace(K, t) for t in list(fbt_traces) + list(op_traces)]
    return PathUniverse.build(K, paths)
