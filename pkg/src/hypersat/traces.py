"""Ultimately periodic traces, trace sets and the HyperLTL evaluator.

A trace ``stem . loop^omega`` is kept in canonical form: the loop is
primitive and the stem is as short as possible.  Evaluation folds all traces
of an assignment onto one joint lasso of length ``S + P`` (``S`` the longest
stem, ``P`` the lcm of the loop lengths) and runs the kernel on it.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Mapping

import numpy as np

from . import _kernels
from .errors import EmptyModel, MalformedFormula, NotASentence, ResourceLimit
from .formula import (
    And, Atom, Eventually, Exists, FalseF, Forall, Formula, Globally, Iff,
    Implies, Next, Not, Or, TrueF, Until, check_hyperltl, free_vars,
    is_quantifier_free, ordered_free_vars, props, subformulas,
)

Letter = frozenset


def _letter(x) -> frozenset:
    if isinstance(x, str):
        return frozenset([x]) if x else frozenset()
    return frozenset(x)


def primitive_root(seq: tuple) -> tuple:
    n = len(seq)
    for d in range(1, n + 1):
        if n % d == 0 and seq[:d] * (n // d) == seq:
            return seq[:d]
    return seq


def canonical_lasso(stem, loop):
    """Canonical (stem, loop) pair for generic hashable letters."""
    stem, loop = tuple(stem), tuple(loop)
    if not loop:
        raise MalformedFormula("loop must be nonempty")
    loop = primitive_root(loop)
    while stem and stem[-1] == loop[-1]:
        stem = stem[:-1]
        loop = (loop[-1],) + loop[:-1]
    return stem, loop


@dataclass(frozen=True, order=False)
class UPTrace:
    """Ultimately periodic trace; constructed values are always canonical."""

    stem: tuple
    loop: tuple

    def __post_init__(self):
        stem = tuple(_letter(x) for x in self.stem)
        loop = tuple(_letter(x) for x in self.loop)
        stem, loop = canonical_lasso(stem, loop)
        object.__setattr__(self, "stem", stem)
        object.__setattr__(self, "loop", loop)

    @property
    def stem_len(self) -> int:
        return len(self.stem)

    @property
    def period(self) -> int:
        return len(self.loop)

    def __len__(self):  # size used for enumeration order
        return len(self.stem) + len(self.loop)

    def at(self, i: int) -> frozenset:
        if i < len(self.stem):
            return self.stem[i]
        return self.loop[(i - len(self.stem)) % len(self.loop)]

    def suffix(self, j: int) -> "UPTrace":
        if j <= len(self.stem):
            return UPTrace(self.stem[j:], self.loop)
        k = (j - len(self.stem)) % len(self.loop)
        return UPTrace((), self.loop[k:] + self.loop[:k])

    def prefix(self, n: int) -> tuple:
        return tuple(self.at(i) for i in range(n))

    def props(self) -> frozenset:
        return frozenset().union(*self.stem, *self.loop)

    def masks(self, alphabet) -> tuple:
        bit = {p: 1 << i for i, p in enumerate(alphabet)}
        enc = lambda s: sum(bit.get(p, 0) for p in s)
        return tuple(enc(s) for s in self.stem), tuple(enc(s) for s in self.loop)

    def key(self, alphabet) -> tuple:
        """Total order used for deterministic enumeration: size, then codes."""
        st, lp = self.masks(alphabet)
        return (len(self), len(st), st, lp)

    def to_record(self) -> dict:
        return {"stem": [sorted(s) for s in self.stem], "loop": [sorted(s) for s in self.loop]}

    def __str__(self):
        fmt = lambda s: "{" + ",".join(sorted(s)) + "}"
        stem = "".join(fmt(s) for s in self.stem)
        return f"{stem}({''.join(fmt(s) for s in self.loop)})^w"


@dataclass(frozen=True)
class TraceSet:
    """Finite set of ultimately periodic traces over a fixed alphabet."""

    traces: tuple
    alphabet: tuple = ()

    def __post_init__(self):
        traces = tuple(self.traces)
        alpha = set(self.alphabet)
        for t in traces:
            alpha |= t.props()
        alpha = tuple(sorted(alpha))
        uniq = sorted(set(traces), key=lambda t: t.key(alpha))
        object.__setattr__(self, "traces", tuple(uniq))
        object.__setattr__(self, "alphabet", alpha)

    def __len__(self):
        return len(self.traces)

    def __iter__(self):
        return iter(self.traces)

    def __contains__(self, t):
        return t in set(self.traces)

    def union(self, other: "TraceSet") -> "TraceSet":
        return TraceSet(self.traces + other.traces, tuple(set(self.alphabet) | set(other.alphabet)))


@dataclass(frozen=True)
class TraceAssignment:
    """Partial map from trace variables to traces, all read from a common time."""

    items: tuple = ()

    @staticmethod
    def of(mapping: Mapping[str, UPTrace]) -> "TraceAssignment":
        return TraceAssignment(tuple(sorted(mapping.items())))

    def get(self, var):
        for v, t in self.items:
            if v == var:
                return t
        raise KeyError(var)

    def bind(self, var, trace) -> "TraceAssignment":
        rest = tuple((v, t) for v, t in self.items if v != var)
        return TraceAssignment(tuple(sorted(rest + ((var, trace),))))

    def shifted(self, j: int) -> "TraceAssignment":
        return TraceAssignment(tuple((v, t.suffix(j)) for v, t in self.items))

    @property
    def vars(self):
        return tuple(v for v, _ in self.items)

    def as_dict(self):
        return dict(self.items)


def joint_shape(traces: Iterable[UPTrace]) -> tuple:
    traces = list(traces)
    S = max((t.stem_len for t in traces), default=0)
    P = reduce(math.lcm, (t.period for t in traces), 1)
    return S, P


def fold_labels(traces, alphabet, S, P) -> np.ndarray:
    """Bitmask labels ``[len(traces), S + P]`` on the joint lasso."""
    L = S + P
    bit = {p: 1 << i for i, p in enumerate(alphabet)}
    out = np.zeros((len(traces), L), dtype=np.uint64)
    for k, t in enumerate(traces):
        for i in range(L):
            out[k, i] = sum(bit.get(p, 0) for p in t.at(i))
    return out


# ---------------------------------------------------------------- evaluation

MAX_JOINT_LENGTH = 200_000


_PROGRAM_CACHE = {}
_PROGRAM_CACHE_MAX = 512


class _Compiled:
    """Compiled quantifier-free bodies: per-call by identity, shared by value."""

    def __init__(self, alphabet):
        self.alphabet = alphabet
        self.progs = {}

    def get(self, f):
        p = self.progs.get(id(f))
        if p is None:
            key = (f, self.alphabet)
            p = _PROGRAM_CACHE.get(key)
            if p is None:
                p = _kernels.compile_program(f, ordered_free_vars(f) or ("_",), self.alphabet)
                if len(_PROGRAM_CACHE) >= _PROGRAM_CACHE_MAX:
                    _PROGRAM_CACHE.clear()
                _PROGRAM_CACHE[key] = p
            self.progs[id(f)] = p
        return p


def eval_qf(f: Formula, assignment: TraceAssignment, alphabet=None) -> bool:
    """Truth of a quantifier-free formula at time 0 under ``assignment``."""
    alphabet = tuple(sorted(alphabet if alphabet is not None else props(f)))
    prog = _kernels.compile_program(f, ordered_free_vars(f) or ("_",), alphabet)
    return bool(_run(prog, assignment)[prog.root, 0])


def _run(prog, assignment) -> np.ndarray:
    if prog.slots == ("_",):
        traces = [UPTrace((), [()])]
    else:
        traces = [assignment.get(v) for v in prog.slots]
    S, P = joint_shape(traces)
    if S + P > MAX_JOINT_LENGTH:
        raise ResourceLimit(f"joint lasso of length {S + P} is too long")
    labels = fold_labels(traces, prog.alphabet, S, P)[None, :, :]
    return _kernels.eval_program(prog, labels, S)[0]


def eval_hyperltl(f: Formula, T: TraceSet, assignment: TraceAssignment | None = None,
                  allow_empty: bool = False) -> bool:
    """Decide ``T, assignment |= f`` for a HyperLTL formula.

    ``f`` may be any Boolean combination of prenex formulas, as long as no
    quantifier sits below a temporal operator.  Quantifier-free parts are
    handed to the kernel and cached per tuple of traces they depend on.
    """
    check_hyperltl(f)
    assignment = assignment or TraceAssignment()
    missing = free_vars(f) - set(assignment.vars)
    if missing:
        raise NotASentence(f"free variables without a trace: {sorted(missing)}")
    if not len(T) and not allow_empty:
        raise EmptyModel("trace set is empty")
    alphabet = tuple(sorted(set(T.alphabet) | props(f)))
    comp = _Compiled(alphabet)
    cache = {}
    env = dict(assignment.items)

    def qf(g):
        prog = comp.get(g)
        key = (id(g), tuple(env[v] for v in prog.slots if v != "_"))
        r = cache.get(key)
        if r is None:
            r = bool(_run(prog, TraceAssignment.of({v: env[v] for v in prog.slots if v != "_"}))[prog.root, 0])
            cache[key] = r
        return r

    def go(g):
        if is_quantifier_free(g):
            return qf(g)
        if isinstance(g, Exists) or isinstance(g, Forall):
            want = isinstance(g, Exists)
            saved = env.get(g.var, None)
            had = g.var in env
            try:
                for t in T.traces:
                    env[g.var] = t
                    if go(g.body) == want:
                        return want
                return not want
            finally:
                if had:
                    env[g.var] = saved
                else:
                    env.pop(g.var, None)
        if isinstance(g, Not):
            return not go(g.arg)
        if isinstance(g, Or):
            return go(g.left) or go(g.right)
        if isinstance(g, And):
            return go(g.left) and go(g.right)
        if isinstance(g, Implies):
            return (not go(g.left)) or go(g.right)
        if isinstance(g, Iff):
            return go(g.left) == go(g.right)
        raise MalformedFormula(f"unexpected node {g}")  # pragma: no cover

    return go(f)


@dataclass(frozen=True)
class ExpansionTable:
    """Truth value of every subformula at every position of the joint lasso."""

    formula: Formula
    subformulas: tuple
    S: int
    P: int
    table: np.ndarray = field(repr=False)
    assignment: TraceAssignment = None

    @property
    def length(self):
        return self.S + self.P

    def succ(self, i: int) -> int:
        return i + 1 if i + 1 < self.length else self.S

    def fold(self, i: int) -> int:
        return i if i < self.S else self.S + (i - self.S) % self.P

    def value(self, sub: Formula, pos: int) -> bool:
        return bool(self.table[self.subformulas.index(sub), self.fold(pos)])

    def row(self, sub: Formula) -> tuple:
        return tuple(bool(x) for x in self.table[self.subformulas.index(sub)])

    def consistent(self) -> bool:
        return not self.violations()

    def violations(self) -> list:
        """Positions where the local consistency conditions fail."""
        L = self.length
        idx = {g: i for i, g in enumerate(self.subformulas)}
        e = lambda g, j: bool(self.table[idx[g], j])
        bad = []
        for g in self.subformulas:
            for j in range(L):
                v = e(g, j)
                if isinstance(g, Atom):
                    want = g.prop in self.assignment.get(g.var).at(j)
                elif isinstance(g, TrueF):
                    want = True
                elif isinstance(g, FalseF):
                    want = False
                elif isinstance(g, Not):
                    want = not e(g.arg, j)
                elif isinstance(g, Or):
                    want = e(g.left, j) or e(g.right, j)
                elif isinstance(g, And):
                    want = e(g.left, j) and e(g.right, j)
                elif isinstance(g, Implies):
                    want = (not e(g.left, j)) or e(g.right, j)
                elif isinstance(g, Iff):
                    want = e(g.left, j) == e(g.right, j)
                elif isinstance(g, Next):
                    want = e(g.arg, self.succ(j))
                elif isinstance(g, (Until, Eventually, Globally)):
                    want = self._walk(g, j, e)
                else:  # pragma: no cover
                    want = v
                if v != want:
                    bad.append((g, j))
        return bad

    def _walk(self, g, j, e):
        # follow successors for at most L steps; every position is then seen
        L = self.length
        pos = j
        for _ in range(L + 1):
            if isinstance(g, Until):
                if e(g.right, pos):
                    return True
                if not e(g.left, pos):
                    return False
            elif isinstance(g, Eventually):
                if e(g.arg, pos):
                    return True
            else:
                if not e(g.arg, pos):
                    return False
            pos = self.succ(pos)
        return isinstance(g, Globally)


def expansion_table(f: Formula, assignment: TraceAssignment, alphabet=None) -> ExpansionTable:
    """Expansion table of a quantifier-free ``f`` over the traces of ``assignment``."""
    if not is_quantifier_free(f):
        raise MalformedFormula("expansion tables are defined for quantifier-free formulas")
    missing = free_vars(f) - set(assignment.vars)
    if missing:
        raise NotASentence(f"free variables without a trace: {sorted(missing)}")
    traces = [t for _, t in assignment.items]
    S, P = joint_shape(traces)
    if S + P > MAX_JOINT_LENGTH:
        raise ResourceLimit(f"joint lasso of length {S + P} is too long")
    alphabet = tuple(sorted(alphabet if alphabet is not None else props(f)))
    slots = assignment.vars or ("_",)
    prog = _kernels.compile_program(f, slots, alphabet)
    if assignment.vars:
        labels = fold_labels(traces, alphabet, S, P)[None]
    else:
        labels = np.zeros((1, 1, S + P), dtype=np.uint64)
    tab = _kernels.eval_program(prog, labels, S)[0]
    return ExpansionTable(f, prog.nodes, S, P, tab, assignment)


# ---------------------------------------------------------------- subsets

def subset_check(f: Formula, T: TraceSet, subsets: Iterable[Iterable[UPTrace]]) -> dict:
    """Evaluate ``f`` on each nonempty subset; returns ``{frozenset: bool}``."""
    out = {}
    for sub in subsets:
        sub = TraceSet(tuple(sub), T.alphabet)
        out[frozenset(sub.traces)] = eval_hyperltl(f, sub)
    return out


def random_subsets(T: TraceSet, count: int, seed: int = 0) -> list:
    """``count`` nonempty random subsets of ``T`` from a seeded generator."""
    rng = random.Random(seed)
    ts = list(T.traces)
    out = []
    for _ in range(count):
        k = rng.randint(1, len(ts))
        out.append(tuple(rng.sample(ts, k)))
    return out


def random_trace(rng: random.Random, alphabet, max_stem: int, max_loop: int) -> UPTrace:
    letter = lambda: frozenset(p for p in alphabet if rng.random() < 0.5)
    s = rng.randint(0, max_stem)
    p = rng.randint(1, max_loop)
    return UPTrace(tuple(letter() for _ in range(s)), tuple(letter() for _ in range(p)))
