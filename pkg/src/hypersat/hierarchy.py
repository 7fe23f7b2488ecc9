"""Sentences used to show that membership in a quantifier-alternation level is hard.

* :func:`gen_phi_b` defines the bounded trace sets: every trace is a word
  over the base alphabet followed by ``dollar`` forever, all switching at the
  same time.
* :func:`gen_split_combinator` combines a sentence about the left part and
  one about the right part of a split set.
* :func:`gen_phi_omega` pins down the infinite set of traces that carry a
  single ``x`` somewhere and nothing else.
* :func:`gen_hierarchy_hard` assembles the reduction from unsatisfiability.
"""
from __future__ import annotations

from .errors import BadArgument, MissingWitness
from .formula import (
    And, Atom, Eventually, Exists, Forall, Globally, Implies, Next, Not,
    TRUE, Until, all_vars, classify_prenex, conj, free_vars, ordered_free_vars,
    prenex, props, relativize, rename_apart, split_prefix,
)

DOLLAR = "dollar"
X_PROP = "x"


def gen_phi_b(ap) -> "Formula":
    """Universal sentence satisfied exactly by the bounded trace sets."""
    p, q = "p", "q"
    d = lambda v: Atom(DOLLAR, v)
    body = conj(
        Until(Not(d(p)), Globally(d(p))),
        conj(Globally(Not(And(Atom(a, p), d(p)))) for a in sorted(ap)),
        Eventually(conj(Not(d(p)), Not(d(q)), Next(d(p)), Next(d(q)))),
    )
    return Forall(p, Forall(q, body))


def is_bounded(T) -> bool:
    """Direct check: some ``b >= 1`` with every trace in ``(2^AP)^b . {dollar}^omega``.

    The sentence from :func:`gen_phi_b` needs a position before the dollars
    start, so a set of dollar-only traces (``b = 0``) counts as unbounded here.
    """
    bs = set()
    for t in T.traces:
        if t.loop != (frozenset([DOLLAR]),):
            return False
        if any(DOLLAR in s for s in t.stem):
            return False
        bs.add(t.stem_len)
    return len(bs) == 1 and min(bs) >= 1


def _relativize_right(f):
    guard = lambda v: Eventually(Globally(Not(Atom(DOLLAR, v))))
    prefix, body = split_prefix(f)
    fv = ordered_free_vars(body)
    if fv:
        v = fv[0]
        body = Until(Atom(DOLLAR, v), And(Not(Atom(DOLLAR, v)), body))
    out = body
    for q, v in reversed(prefix):
        out = Exists(v, out) if q == "E" else Forall(v, out)
    return relativize(out, guard)


def _relativize_left(f):
    return relativize(f, lambda v: Eventually(Globally(Atom(DOLLAR, v))))


def gen_split_combinator(left, right):
    """Prenex sentence true on a split set iff its left part satisfies
    ``left`` and its right part (with the dollar prefix removed) satisfies
    ``right``.  Both inputs must be prenex sentences."""
    for f in (left, right):
        classify_prenex(f)
        if free_vars(f):
            raise BadArgument("split combinator needs sentences")
    r = _relativize_right(right)
    l = rename_apart(_relativize_left(left), avoid=all_vars(r))
    return prenex(And(l, r))


def split_set(left_traces, right_traces, b: int, alphabet=()):
    """Split trace set from a bounded left part and an arbitrary right part.

    ``left_traces`` are word prefixes of length ``b``; right traces get the
    ``{dollar}^b`` prefix.
    """
    from .traces import TraceSet, UPTrace

    out = []
    for w in left_traces:
        w = tuple(frozenset(x) for x in w)
        if len(w) != b:
            raise BadArgument("left traces must have length b")
        out.append(UPTrace(w, (frozenset([DOLLAR]),)))
    for t in right_traces:
        stem = (frozenset([DOLLAR]),) * b + t.stem
        out.append(UPTrace(stem, t.loop))
    return TraceSet(tuple(out), tuple(alphabet) + (DOLLAR,))


def gen_phi_omega(ap=()):
    """Sentence whose only model is ``{ empty^n {x} empty^omega : n >= 0 }``.

    Each trace carries ``x`` exactly once and no proposition of ``ap``; a
    trace with ``x`` at time 0 exists; every trace has a successor with
    ``x`` one step later.
    """
    x = lambda v: Atom(X_PROP, v)
    once = Until(Not(x("p")), And(x("p"), Next(Globally(Not(x("p"))))))
    clean = Globally(conj(Not(Atom(a, "p")) for a in sorted(ap))) if ap else TRUE
    shape = Forall("p", And(once, clean) if ap else once)
    start = Exists("p", x("p"))
    succ = Forall("p1", Exists("p2", Eventually(And(x("p1"), Next(x("p2"))))))
    return conj(shape, start, succ)


def omega_truncation(n: int):
    """The first ``n`` traces ``empty^k {x} empty^omega`` for ``k < n``."""
    from .traces import TraceSet, UPTrace

    ts = [UPTrace((frozenset(),) * k + (frozenset([X_PROP]),), (frozenset(),)) for k in range(n)]
    return TraceSet(tuple(ts), (X_PROP,))


def _in_sigma(f, level):
    c = classify_prenex(prenex(f))
    return (c.kind == "Sigma" and c.level <= level) or (c.kind == "Pi" and c.level < level)


def gen_hierarchy_hard(phi, n: int, witness=None):
    """Sentence equivalent to a Sigma_n sentence iff ``phi`` is unsatisfiable.

    For ``n = 1`` the result forces infinitely many traces: quantifiers of
    the omega sentence are restricted to traces with ``x`` and those of
    ``phi`` to traces without it.  For ``n > 1`` a caller-supplied
    ``witness`` (a Sigma_{n+1} sentence with only bounded models that is not
    equivalent to any Sigma_n sentence) is combined with ``phi`` through the
    split combinator.
    """
    if n < 1:
        raise BadArgument("n must be at least 1")
    if n == 1:
        if X_PROP in props(phi):
            raise BadArgument(f"proposition {X_PROP!r} is reserved")
        omega = relativize(gen_phi_omega(sorted(props(phi))), lambda v: Eventually(Atom(X_PROP, v)))
        body = relativize(phi, lambda v: Globally(Not(Atom(X_PROP, v))))
        body = rename_apart(body, avoid=all_vars(omega))
        return prenex(And(omega, body))
    if witness is None:
        raise MissingWitness("n > 1 needs a witness sentence")
    if not _in_sigma(witness, n + 1):
        raise BadArgument(f"witness is not a Sigma_{n + 1} sentence")
    return gen_split_combinator(prenex(witness), prenex(phi))
