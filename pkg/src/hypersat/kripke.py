"""Finite transition systems, lasso paths and denotational HyperCTL* evaluation.

Path quantifiers range over a finite, suffix-closed universe of lasso paths.
A quantifier chooses a path that starts at the current vertex of the most
recently bound path (or at the initial vertex when nothing is bound yet).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import (
    BadArgument, MalformedSystem, NotASentence, NotHyperCTLStar, ResourceLimit,
    UnboundVariable, UniverseMismatch,
)
from .formula import (
    And, Atom, Eventually, Exists, FalseF, Forall, Formula, Globally, Iff,
    Implies, Next, Not, Or, TrueF, Until, free_vars, props,
    temporal_outside_quantifiers,
)
from .traces import UPTrace, canonical_lasso, joint_shape


def _vkey(v):
    return (0, v, "") if isinstance(v, int) else (1, 0, str(v))


@dataclass(frozen=True)
class TransitionSystem:
    """Labelled directed graph with an initial vertex and no dead ends."""

    vertices: tuple
    label_items: tuple  # ((vertex, frozenset), ...)
    edges: tuple  # ((u, w), ...) sorted, without duplicates
    initial: object

    @staticmethod
    def build(labels: dict, edges, initial) -> "TransitionSystem":
        verts = tuple(sorted(labels, key=_vkey))
        vs = set(verts)
        clean = set()
        for u, w in edges:
            if u not in vs or w not in vs:
                raise MalformedSystem(f"edge ({u!r}, {w!r}) mentions an unknown vertex")
            clean.add((u, w))
        if initial not in vs:
            raise MalformedSystem(f"initial vertex {initial!r} is not a vertex")
        ts = TransitionSystem(
            verts,
            tuple((v, frozenset(labels[v])) for v in verts),
            tuple(sorted(clean, key=lambda e: (_vkey(e[0]), _vkey(e[1])))),
            initial,
        )
        for v in verts:
            if not ts.succ[v]:
                raise MalformedSystem(f"vertex {v!r} has no successor")
        return ts

    @cached_property
    def labels(self) -> dict:
        return dict(self.label_items)

    @cached_property
    def succ(self) -> dict:
        out = {v: [] for v in self.vertices}
        for u, w in self.edges:
            out[u].append(w)
        return {v: tuple(ws) for v, ws in out.items()}

    def edge_list(self):
        return list(self.edges)

    def alphabet(self) -> tuple:
        return tuple(sorted(frozenset().union(*self.labels.values())))

    def has_edge(self, u, w) -> bool:
        return w in self.succ.get(u, ())

    def glue_initial(self, other: "TransitionSystem", tag_self="l", tag_other="r") -> "TransitionSystem":
        """Disjoint union identifying the two initial vertices.

        The glued initial vertex carries the union of both initial labels and
        the successors of both.  Other vertices are renamed ``tag:id``.
        """
        def ren(tag, v, init):
            return "init" if v == init else f"{tag}:{v}"

        labels, edges = {}, []
        for tag, K in ((tag_self, self), (tag_other, other)):
            for v in K.vertices:
                nv = ren(tag, v, K.initial)
                labels[nv] = labels.get(nv, frozenset()) | K.labels[v]
            for u, w in K.edges:
                edges.append((ren(tag, u, K.initial), ren(tag, w, K.initial)))
        return TransitionSystem.build(labels, edges, "init")


@dataclass(frozen=True)
class LassoPath:
    """Ultimately periodic vertex sequence ``stem . loop^omega`` (canonical)."""

    stem: tuple
    loop: tuple

    def __post_init__(self):
        stem, loop = canonical_lasso(self.stem, self.loop)
        object.__setattr__(self, "stem", stem)
        object.__setattr__(self, "loop", loop)

    @property
    def stem_len(self):
        return len(self.stem)

    @property
    def period(self):
        return len(self.loop)

    @property
    def first(self):
        return self.stem[0] if self.stem else self.loop[0]

    def at(self, i: int):
        if i < len(self.stem):
            return self.stem[i]
        return self.loop[(i - len(self.stem)) % len(self.loop)]

    def suffix(self, j: int) -> "LassoPath":
        if j <= len(self.stem):
            return LassoPath(self.stem[j:], self.loop)
        k = (j - len(self.stem)) % len(self.loop)
        return LassoPath((), self.loop[k:] + self.loop[:k])

    def is_path_of(self, K: TransitionSystem) -> bool:
        seq = self.stem + self.loop + self.loop[:1]
        return all(v in K.labels for v in seq) and all(K.has_edge(seq[i], seq[i + 1]) for i in range(len(seq) - 1))

    def trace(self, K: TransitionSystem) -> UPTrace:
        return UPTrace(tuple(K.labels[v] for v in self.stem), tuple(K.labels[v] for v in self.loop))

    def __str__(self):
        stem = " ".join(map(str, self.stem))
        loop = " ".join(map(str, self.loop))
        return f"{stem} ({loop})^w" if stem else f"({loop})^w"


MAX_UNIVERSE = 100_000


def enumerate_lassos(K: TransitionSystem, max_stem: int, max_loop: int, starts=None,
                     cap: int = MAX_UNIVERSE) -> list:
    """All canonical lassos of ``K`` with stem length <= max_stem and loop <= max_loop.

    Raises ``ResourceLimit`` once more than ``cap`` paths have been found.
    """
    if max_loop < 1 or max_stem < 0:
        raise BadArgument("lasso bounds need max_loop >= 1 and max_stem >= 0")
    starts = K.vertices if starts is None else tuple(starts)
    found = set()

    def walk(seq):
        # seq is a path prefix; try closing a loop at every admissible split
        n = len(seq)
        for s in range(max(0, n - max_loop), n):
            if s <= max_stem and K.has_edge(seq[-1], seq[s]):
                found.add(LassoPath(tuple(seq[:s]), tuple(seq[s:])))
                if len(found) > cap:
                    raise ResourceLimit(f"more than {cap} lasso paths")
        if n < max_stem + max_loop:
            for w in K.succ[seq[-1]]:
                seq.append(w)
                walk(seq)
                seq.pop()

    for v in starts:
        walk([v])
    return sorted(found, key=_path_key)


def _path_key(p: LassoPath):
    return (len(p.stem) + len(p.loop), len(p.stem), tuple(map(_vkey, p.stem)), tuple(map(_vkey, p.loop)))


@dataclass(frozen=True)
class PathUniverse:
    """Finite set of lasso paths of a system, closed under suffixes."""

    paths: tuple

    @staticmethod
    def build(K: TransitionSystem, paths) -> "PathUniverse":
        todo = list(paths)
        closed = set()
        while todo:
            p = todo.pop()
            if p in closed:
                continue
            if not p.is_path_of(K):
                raise MalformedSystem(f"{p} is not a path of the system")
            closed.add(p)
            for j in range(1, p.stem_len + p.period):
                q = p.suffix(j)
                if q not in closed:
                    todo.append(q)
        return PathUniverse(tuple(sorted(closed, key=_path_key)))

    @staticmethod
    def from_bounds(K: TransitionSystem, max_stem: int, max_loop: int, starts=None) -> "PathUniverse":
        return PathUniverse.build(K, enumerate_lassos(K, max_stem, max_loop, starts))

    @cached_property
    def by_start(self) -> dict:
        out = {}
        for p in self.paths:
            out.setdefault(p.first, []).append(p)
        return {v: tuple(ps) for v, ps in out.items()}

    def starting_at(self, v) -> tuple:
        return self.by_start.get(v, ())

    def __len__(self):
        return len(self.paths)


@dataclass(frozen=True)
class PathAssignment:
    """Bound path variables in binding order; the last one is the most recent.

    Rebinding a variable removes its old entry, so the order always reflects
    recency.  All paths are read from a common current time.
    """

    items: tuple = ()

    def bind(self, var, path) -> "PathAssignment":
        rest = tuple((v, p) for v, p in self.items if v != var)
        return PathAssignment(rest + ((var, path),))

    def get(self, var) -> LassoPath:
        for v, p in self.items:
            if v == var:
                return p
        raise UnboundVariable(var)

    def rcnt(self, K: TransitionSystem):
        """First vertex of the most recently bound path, or the initial vertex."""
        return self.items[-1][1].first if self.items else K.initial

    def shifted(self, j: int) -> "PathAssignment":
        if j == 0:
            return self
        return PathAssignment(tuple((v, p.suffix(j)) for v, p in self.items))

    def shape(self):
        return joint_shape(p for _, p in self.items)

    @property
    def vars(self):
        return tuple(v for v, _ in self.items)


def check_hyperctlstar(f: Formula) -> None:
    bad = temporal_outside_quantifiers(f)
    if bad:
        raise NotHyperCTLStar(f"temporal operator outside every quantifier: {bad[0]}")


def check_universe(K: TransitionSystem, U: PathUniverse) -> None:
    for p in U.paths:
        if not p.is_path_of(K):
            raise UniverseMismatch(f"{p} is not a path of the system")


def eval_hyperctlstar(f: Formula, K: TransitionSystem, U: PathUniverse,
                      assignment: PathAssignment | None = None) -> bool:
    """Decide ``K, U, assignment |= f`` by direct recursion on the semantics."""
    check_hyperctlstar(f)
    check_universe(K, U)
    assignment = assignment or PathAssignment()
    missing = free_vars(f) - set(assignment.vars)
    if missing:
        raise NotASentence(f"free variables without a path: {sorted(missing)}")
    memo = {}

    def sat(P: PathAssignment, g) -> bool:
        key = (id(g), P)
        r = memo.get(key)
        if r is None:
            r = _sat(P, g)
            memo[key] = r
        return r

    def horizon(P):
        S, Pd = P.shape()
        return S + Pd

    def _sat(P, g):
        if isinstance(g, Atom):
            return g.prop in K.labels[P.get(g.var).first]
        if isinstance(g, TrueF):
            return True
        if isinstance(g, FalseF):
            return False
        if isinstance(g, Not):
            return not sat(P, g.arg)
        if isinstance(g, Or):
            return sat(P, g.left) or sat(P, g.right)
        if isinstance(g, And):
            return sat(P, g.left) and sat(P, g.right)
        if isinstance(g, Implies):
            return (not sat(P, g.left)) or sat(P, g.right)
        if isinstance(g, Iff):
            return sat(P, g.left) == sat(P, g.right)
        if isinstance(g, Next):
            return sat(P.shifted(1), g.arg)
        if isinstance(g, Until):
            for j in range(horizon(P)):
                Pj = P.shifted(j)
                if sat(Pj, g.right):
                    return True
                if not sat(Pj, g.left):
                    return False
            return False
        if isinstance(g, Eventually):
            return any(sat(P.shifted(j), g.arg) for j in range(horizon(P)))
        if isinstance(g, Globally):
            return all(sat(P.shifted(j), g.arg) for j in range(horizon(P)))
        if isinstance(g, (Exists, Forall)):
            cands = U.starting_at(P.rcnt(K))
            if isinstance(g, Exists):
                return any(sat(P.bind(g.var, p), g.body) for p in cands)
            return all(sat(P.bind(g.var, p), g.body) for p in cands)
        raise NotHyperCTLStar(f"unexpected node {g!r}")  # pragma: no cover

    return sat(assignment, f)


def random_system(rng, n_vertices: int, alphabet, edge_prob: float = 0.4) -> TransitionSystem:
    """Random system on vertices ``0..n-1``; every vertex gets a successor."""
    labels = {v: frozenset(p for p in alphabet if rng.random() < 0.5) for v in range(n_vertices)}
    edges = []
    for u in range(n_vertices):
        outs = [w for w in range(n_vertices) if rng.random() < edge_prob]
        if not outs:
            outs = [rng.randrange(n_vertices)]
        edges.extend((u, w) for w in outs)
    return TransitionSystem.build(labels, edges, 0)


def system_alphabet(K: TransitionSystem, f: Formula | None = None) -> tuple:
    extra = props(f) if f is not None else frozenset()
    return tuple(sorted(set(K.alphabet()) | extra))
