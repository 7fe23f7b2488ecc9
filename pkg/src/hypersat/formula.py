"""Temporal hyperproperty formulas: the shared AST and its structural passes.

One frozen dataclass per node kind.  Source spans are carried along for
diagnostics but ignored by equality and hashing, so a parsed formula equals
the same formula built by hand.

Large conjunctions and disjunctions built through :func:`conj` and
:func:`disj` are balanced trees, which keeps recursion depth logarithmic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

from .errors import MalformedFormula, NotPrenex, QuantifierUnderTemporal


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


class Formula:
    """Base class; subclasses are frozen dataclasses."""

    __slots__ = ()

    def children(self) -> tuple:
        return ()

    def __str__(self):
        from .syntax.temporal import print_formula

        return print_formula(self)


def _span():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Atom(Formula):
    prop: str
    var: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class TrueF(Formula):
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class FalseF(Formula):
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula
    span: Optional[SourceSpan] = _span()

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Next(Formula):
    arg: Formula
    span: Optional[SourceSpan] = _span()

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Eventually(Formula):
    arg: Formula
    span: Optional[SourceSpan] = _span()

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Globally(Formula):
    arg: Formula
    span: Optional[SourceSpan] = _span()

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula
    span: Optional[SourceSpan] = _span()

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula
    span: Optional[SourceSpan] = _span()

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula
    span: Optional[SourceSpan] = _span()

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula
    span: Optional[SourceSpan] = _span()

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula
    span: Optional[SourceSpan] = _span()

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula
    span: Optional[SourceSpan] = _span()

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula
    span: Optional[SourceSpan] = _span()

    def children(self):
        return (self.body,)


TRUE = TrueF()
FALSE = FalseF()

UNARY = (Not, Next, Eventually, Globally)
BINARY = (Or, And, Implies, Iff, Until)
QUANTIFIERS = (Exists, Forall)
TEMPORAL = (Next, Eventually, Globally, Until)


# ---------------------------------------------------------------- builders

def _balanced(items, node, unit):
    items = list(items)
    if not items:
        return unit
    while len(items) > 1:
        paired = [node(items[i], items[i + 1]) for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            paired.append(items[-1])
        items = paired
    return items[0]


def conj(*parts: Formula) -> Formula:
    """Conjunction of ``parts``; ``true`` when empty."""
    if len(parts) == 1 and not isinstance(parts[0], Formula):
        parts = tuple(parts[0])
    return _balanced(parts, And, TRUE)


def disj(*parts: Formula) -> Formula:
    if len(parts) == 1 and not isinstance(parts[0], Formula):
        parts = tuple(parts[0])
    return _balanced(parts, Or, FALSE)


def next_n(f: Formula, n: int) -> Formula:
    for _ in range(n):
        f = Next(f)
    return f


def exists_all(vars_: Iterable[str], body: Formula) -> Formula:
    for v in reversed(list(vars_)):
        body = Exists(v, body)
    return body


def forall_all(vars_: Iterable[str], body: Formula) -> Formula:
    for v in reversed(list(vars_)):
        body = Forall(v, body)
    return body


def rebuild(f: Formula, kids) -> Formula:
    """Copy of ``f`` with its children replaced (span dropped)."""
    if isinstance(f, (Atom, TrueF, FalseF)):
        return f
    if isinstance(f, UNARY):
        return type(f)(kids[0])
    if isinstance(f, BINARY):
        return type(f)(kids[0], kids[1])
    if isinstance(f, QUANTIFIERS):
        return type(f)(f.var, kids[0])
    raise MalformedFormula(f"unknown node {f!r}")


def strip_spans(f: Formula) -> Formula:
    return transform(f, lambda g: None)


def transform(f: Formula, pre: Callable[[Formula], Optional[Formula]]) -> Formula:
    """Bottom-up rebuild; ``pre`` may return a replacement to stop descent."""
    memo = {}

    def go(g):
        key = id(g)
        if key in memo:
            return memo[key][1]
        r = pre(g)
        if r is None:
            if isinstance(g, Atom):
                r = Atom(g.prop, g.var)
            elif isinstance(g, TrueF):
                r = TRUE
            elif isinstance(g, FalseF):
                r = FALSE
            else:
                r = rebuild(g, [go(c) for c in g.children()])
        memo[key] = (g, r)
        return r

    return go(f)


# ---------------------------------------------------------------- queries

def iter_nodes(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal (every occurrence, no deduplication)."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(g.children()))


def subformulas(f: Formula) -> list:
    """Distinct subformulas, children before parents."""
    seen = {}
    order = []

    def go(g):
        if g in seen:
            return
        for c in g.children():
            go(c)
        seen[g] = True
        order.append(g)

    go(f)
    return order


def size(f: Formula) -> int:
    return sum(1 for _ in iter_nodes(f))


def props(f: Formula) -> frozenset:
    return frozenset(g.prop for g in iter_nodes(f) if isinstance(g, Atom))


def quantifier_count(f: Formula) -> int:
    return sum(1 for g in iter_nodes(f) if isinstance(g, QUANTIFIERS))


def free_vars(f: Formula) -> frozenset:
    return frozenset(ordered_free_vars(f))


def ordered_free_vars(f: Formula) -> tuple:
    """Free variables in order of first occurrence."""
    out = []

    def go(g, bound):
        if isinstance(g, Atom):
            if g.var not in bound and g.var not in out:
                out.append(g.var)
        elif isinstance(g, QUANTIFIERS):
            go(g.body, bound | {g.var})
        else:
            for c in g.children():
                go(c, bound)

    go(f, frozenset())
    return tuple(out)


def bound_vars(f: Formula) -> frozenset:
    return frozenset(g.var for g in iter_nodes(f) if isinstance(g, QUANTIFIERS))


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def is_quantifier_free(f: Formula) -> bool:
    return not any(isinstance(g, QUANTIFIERS) for g in iter_nodes(f))


def temporal_depth(f: Formula) -> int:
    """Nesting depth of X, U, F and G; quantifiers and connectives are free."""
    memo = {}

    def go(g):
        if g in memo:
            return memo[g]
        kids = [go(c) for c in g.children()]
        d = max(kids, default=0)
        if isinstance(g, TEMPORAL):
            d += 1
        memo[g] = d
        return d

    return go(f)


def height(f: Formula) -> int:
    """Length of the longest root-to-leaf path, counting every node."""
    memo = {}

    def go(g):
        if g in memo:
            return memo[g]
        r = 1 + max((go(c) for c in g.children()), default=0)
        memo[g] = r
        return r

    return go(f)


# ---------------------------------------------------------------- rewriting

def desugar(f: Formula) -> Formula:
    """Rewrite into the core connectives: atoms, constants, !, |, X, U, quantifiers.

    ``F a`` becomes ``!a U a``; ``G a`` becomes ``!F !a``; conjunction,
    implication and equivalence are expressed with negation and disjunction.
    Double negations produced along the way are removed.
    """

    def neg(g):
        return g.arg if isinstance(g, Not) else Not(g)

    def pre(g):
        if isinstance(g, And):
            return neg(Or(neg(go(g.left)), neg(go(g.right))))
        if isinstance(g, Implies):
            return Or(neg(go(g.left)), go(g.right))
        if isinstance(g, Iff):
            a, b = go(g.left), go(g.right)
            return neg(Or(neg(Or(neg(a), b)), neg(Or(neg(b), a))))
        if isinstance(g, Eventually):
            a = go(g.arg)
            return Until(neg(a), a)
        if isinstance(g, Globally):
            a = go(g.arg)
            na = neg(a)
            return neg(Until(neg(na), na))
        return None

    memo = {}

    def go(g):
        if id(g) in memo:
            return memo[id(g)][1]
        r = pre(g)
        if r is None:
            if isinstance(g, Atom):
                r = Atom(g.prop, g.var)
            elif isinstance(g, (TrueF, FalseF)):
                r = TRUE if isinstance(g, TrueF) else FALSE
            else:
                r = rebuild(g, [go(c) for c in g.children()])
        memo[id(g)] = (g, r)
        return r

    return go(f)


def is_core(f: Formula) -> bool:
    core = (Atom, TrueF, FalseF, Not, Or, Next, Until, Exists, Forall)
    return all(isinstance(g, core) for g in iter_nodes(f))


def rename_free(f: Formula, mapping: dict) -> Formula:
    """Rename free occurrences of variables according to ``mapping``."""
    if not mapping:
        return f

    def go(g, bound):
        if isinstance(g, Atom):
            if g.var in mapping and g.var not in bound:
                return Atom(g.prop, mapping[g.var])
            return g
        if isinstance(g, QUANTIFIERS):
            return type(g)(g.var, go(g.body, bound | {g.var}))
        if not g.children():
            return g
        return rebuild(g, [go(c, bound) for c in g.children()])

    return go(f, frozenset())


class FreshNames:
    """Deterministic fresh-name supply using numeric suffixes."""

    def __init__(self, taken: Iterable[str] = ()):
        self.taken = set(taken)

    def fresh(self, base: str) -> str:
        if base not in self.taken:
            self.taken.add(base)
            return base
        root = base
        # strip an existing _<n> suffix so names do not grow without bound
        head, sep, tail = base.rpartition("_")
        if sep and tail.isdigit() and head:
            root = head
        for i in itertools.count(1):
            cand = f"{root}_{i}"
            if cand not in self.taken:
                self.taken.add(cand)
                return cand


def all_vars(f: Formula) -> frozenset:
    return free_vars(f) | bound_vars(f)


def rename_apart(f: Formula, avoid: Iterable[str] = (), names: FreshNames | None = None) -> Formula:
    """Alpha-rename so that every quantifier binds a distinct variable that
    is neither free in ``f`` nor in ``avoid``."""
    names = names or FreshNames(set(avoid) | free_vars(f))

    def go(g, env):
        if isinstance(g, Atom):
            v = env.get(g.var, g.var)
            return g if v == g.var else Atom(g.prop, v)
        if isinstance(g, QUANTIFIERS):
            nv = names.fresh(g.var)
            return type(g)(nv, go(g.body, {**env, g.var: nv}))
        if not g.children():
            return g
        return rebuild(g, [go(c, env) for c in g.children()])

    return go(f, {})


def relativize(f: Formula, guard: Callable[[str], Formula]) -> Formula:
    """Restrict every quantifier to traces satisfying ``guard(var)``.

    ``exists v. body`` becomes ``exists v. guard(v) & body`` and
    ``forall v. body`` becomes ``forall v. guard(v) -> body``.
    """

    def go(g):
        if isinstance(g, Exists):
            return Exists(g.var, And(guard(g.var), go(g.body)))
        if isinstance(g, Forall):
            return Forall(g.var, Implies(guard(g.var), go(g.body)))
        if not g.children():
            return g
        return rebuild(g, [go(c) for c in g.children()])

    return go(f)


# ---------------------------------------------------------------- fragments

def check_hyperltl(f: Formula) -> None:
    """Raise unless no quantifier lies under a temporal operator."""
    for g in iter_nodes(f):
        if isinstance(g, TEMPORAL) and not is_quantifier_free(g):
            raise QuantifierUnderTemporal(f"quantifier under temporal operator in {g}")


def temporal_outside_quantifiers(f: Formula) -> list:
    """Temporal subformula occurrences not inside the scope of any quantifier."""
    bad = []

    def go(g):
        if isinstance(g, QUANTIFIERS):
            return
        if isinstance(g, TEMPORAL):
            bad.append(g)
            return
        for c in g.children():
            go(c)

    go(f)
    return bad


@dataclass(frozen=True)
class PrenexClass:
    kind: str  # "Sigma" or "Pi"
    level: int
    prefix: tuple  # ((quantifier, var), ...) with quantifier in {"E", "A"}
    body: Formula

    @property
    def blocks(self) -> int:
        return len(prefix_blocks(self.prefix))


def split_prefix(f: Formula):
    prefix = []
    while isinstance(f, QUANTIFIERS):
        prefix.append(("E" if isinstance(f, Exists) else "A", f.var))
        f = f.body
    return tuple(prefix), f


def prefix_blocks(prefix) -> list:
    return [k for k, _ in itertools.groupby(q for q, _ in prefix)]


def classify_prenex(f: Formula) -> PrenexClass:
    """Least alternation class of a prenex formula.

    A prefix with m maximal blocks starting with an existential block is in
    Sigma_m (and Pi_{m+1}); starting with a universal block it is Pi_m.
    A formula without quantifiers is reported as Sigma_1.
    """
    prefix, body = split_prefix(f)
    if not is_quantifier_free(body):
        raise NotPrenex("quantifier below the prenex prefix")
    blocks = prefix_blocks(prefix)
    if not blocks:
        return PrenexClass("Sigma", 1, prefix, body)
    kind = "Sigma" if blocks[0] == "E" else "Pi"
    return PrenexClass(kind, len(blocks), prefix, body)


def dual(f: Formula) -> Formula:
    """Prenex formula equivalent to the negation of a prenex ``f``."""
    prefix, body = split_prefix(f)
    out = body.arg if isinstance(body, Not) else Not(body)
    for q, v in reversed(prefix):
        out = Forall(v, out) if q == "E" else Exists(v, out)
    return out


@dataclass(frozen=True)
class QuantifierPolarity:
    var: str
    quantifier: str  # "E" or "A"
    polarity: int  # enclosing negations mod 2
    existential: bool


@dataclass(frozen=True)
class PolarityReport:
    occurrences: tuple

    @property
    def existential(self) -> int:
        return sum(1 for o in self.occurrences if o.existential)

    @property
    def universal(self) -> int:
        return len(self.occurrences) - self.existential


def polarity_analysis(f: Formula) -> PolarityReport:
    """Polarity of every quantifier occurrence.

    Implications and equivalences are first expanded into negation and
    disjunction (equivalence duplicates its operands), then each
    quantifier's polarity is the parity of the negations above it.
    """
    g = _expand_implications(f)
    out = []

    def go(h, pol):
        if isinstance(h, Not):
            go(h.arg, pol ^ 1)
        elif isinstance(h, QUANTIFIERS):
            q = "E" if isinstance(h, Exists) else "A"
            out.append(QuantifierPolarity(h.var, q, pol, (q == "E") == (pol == 0)))
            go(h.body, pol)
        else:
            for c in h.children():
                go(c, pol)

    go(g, 0)
    return PolarityReport(tuple(out))


def _expand_implications(f):
    def pre(g):
        if isinstance(g, Implies):
            return Or(Not(go(g.left)), go(g.right))
        if isinstance(g, Iff):
            a, b = go(g.left), go(g.right)
            return And(Or(Not(a), b), Or(Not(b), a))
        return None

    def go(g):
        return transform(g, pre)

    return go(f)


# ---------------------------------------------------------------- prenex

def _flip(prefix):
    return [("A" if q == "E" else "E", v) for q, v in prefix]


def _blocks_of(prefix):
    out = []
    for q, grp in itertools.groupby(prefix, key=lambda t: t[0]):
        out.append((q, list(grp)))
    return out


def _merge_prefixes(left, right):
    """Interleave two independent prefixes with as few alternations as possible.

    Relative order inside each side is kept.  Among merges with the fewest
    blocks the one taking the left side first wins.
    """
    lb, rb = _blocks_of(left), _blocks_of(right)
    memo = {}

    def best(i, j):
        if (i, j) in memo:
            return memo[(i, j)]
        if i == len(lb) and j == len(rb):
            return (0, ())
        options = []
        if i < len(lb):
            q = lb[i][0]
            if j < len(rb) and rb[j][0] == q:
                n, rest = best(i + 1, j + 1)
                options.append((n + 1, ((q, lb[i][1] + rb[j][1]),) + rest))
            n, rest = best(i + 1, j)
            options.append((n + 1, ((q, lb[i][1]),) + rest))
        if j < len(rb):
            n, rest = best(i, j + 1)
            options.append((n + 1, ((rb[j][0], rb[j][1]),) + rest))
        # merge adjacent equal-kind blocks when counting
        scored = []
        for rank, (_, seq) in enumerate(options):
            merged = _coalesce(seq)
            scored.append((len(merged), rank, merged))
        scored.sort(key=lambda t: (t[0], t[1]))
        r = (scored[0][0], scored[0][2])
        memo[(i, j)] = r
        return r

    _, seq = best(0, 0)
    return [item for _, items in seq for item in items]


def _coalesce(seq):
    out = []
    for q, items in seq:
        if out and out[-1][0] == q:
            out[-1] = (q, out[-1][1] + list(items))
        else:
            out.append((q, list(items)))
    return tuple(out)


def prenex(f: Formula) -> Formula:
    """Equivalent prenex form of a Boolean combination of prenex formulas.

    Bound variables are renamed apart first, negations are pushed through
    the prefix, and the prefixes of the two sides of a binary connective are
    interleaved so that the number of alternations stays small.  The
    transformation relies on models being nonempty.
    """
    check_hyperltl(f)
    f = rename_apart(f)

    def go(g):
        if isinstance(g, QUANTIFIERS):
            q = "E" if isinstance(g, Exists) else "A"
            pre, m = go(g.body)
            return [(q, g.var)] + pre, m
        if isinstance(g, Not):
            pre, m = go(g.arg)
            return _flip(pre), Not(m)
        if isinstance(g, (And, Or)):
            lp, lm = go(g.left)
            rp, rm = go(g.right)
            return _merge_prefixes(lp, rp), type(g)(lm, rm)
        if isinstance(g, Implies):
            lp, lm = go(g.left)
            rp, rm = go(g.right)
            return _merge_prefixes(_flip(lp), rp), Implies(lm, rm)
        if isinstance(g, Iff):
            if is_quantifier_free(g):
                return [], g
            a, b = g.left, g.right
            b2 = rename_apart(b, avoid=all_vars(a) | all_vars(b))
            a2 = rename_apart(a, avoid=all_vars(a) | all_vars(b) | all_vars(b2))
            return go(And(Implies(a, b), Implies(b2, a2)))
        return [], g

    pre, m = go(f)
    out = m
    for q, v in reversed(pre):
        out = Exists(v, out) if q == "E" else Forall(v, out)
    return out


def conjuncts(f: Formula) -> list:
    """Flatten nested conjunctions."""
    out, stack = [], [f]
    while stack:
        g = stack.pop()
        if isinstance(g, And):
            stack.append(g.right)
            stack.append(g.left)
        else:
            out.append(g)
    return out


def disjuncts(f: Formula) -> list:
    out, stack = [], [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Or):
            stack.append(g.right)
            stack.append(g.left)
        else:
            out.append(g)
    return out
