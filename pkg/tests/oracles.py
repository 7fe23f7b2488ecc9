"""Independent reference implementations and random generators for tests.

Nothing here calls the compiled kernels or the library evaluators; the
oracles work on plain Python lists so they can check those routes.
"""
from __future__ import annotations

import itertools
import math
import random
from functools import reduce

from hypersat.formula import (
    FALSE, TRUE, And, Atom, Eventually, Exists, FalseF, Forall, Globally, Iff,
    Implies, Next, Not, Or, TrueF, Until,
)
from hypersat.traces import UPTrace

# ------------------------------------------------------------------ LTL bodies


def unrolled_rows(body, traces: dict):
    """Truth of ``body`` at positions ``0 .. 2(S+P)-1`` of the joint word.

    The last ``P`` positions lie in the periodic part, so Until is first
    solved there by walking round the period, then backwards to position 0.
    """
    ts = list(traces.values())
    S = max((t.stem_len for t in ts), default=0)
    P = reduce(math.lcm, (t.period for t in ts), 1)
    N = 2 * (S + P)
    tail = N - P  # >= S

    def nxt(i):
        return i + 1 if i + 1 < N else tail

    def ev(g):
        if isinstance(g, Atom):
            t = traces[g.var]
            return [g.prop in t.at(i) for i in range(N)]
        if isinstance(g, TrueF):
            return [True] * N
        if isinstance(g, FalseF):
            return [False] * N
        if isinstance(g, Not):
            return [not x for x in ev(g.arg)]
        if isinstance(g, (Or, And, Implies, Iff)):
            a, b = ev(g.left), ev(g.right)
            op = {Or: lambda x, y: x or y, And: lambda x, y: x and y,
                  Implies: lambda x, y: (not x) or y, Iff: lambda x, y: x == y}[type(g)]
            return [op(x, y) for x, y in zip(a, b)]
        if isinstance(g, Next):
            a = ev(g.arg)
            return [a[nxt(i)] for i in range(N)]
        if isinstance(g, Eventually):
            return until([True] * N, ev(g.arg))
        if isinstance(g, Globally):
            return [not x for x in until([True] * N, [not y for y in ev(g.arg)])]
        if isinstance(g, Until):
            return until(ev(g.left), ev(g.right))
        raise TypeError(g)

    def until(a, b):
        v = [False] * N
        for i in range(tail, N):  # walk the period forward
            j = i
            for _ in range(P):
                if b[j]:
                    v[i] = True
                    break
                if not a[j]:
                    break
                j = nxt(j)
        for i in range(tail - 1, -1, -1):
            v[i] = b[i] or (a[i] and v[i + 1])
        return v

    return ev(body)


def unrolled_qf(body, traces: dict) -> bool:
    return unrolled_rows(body, traces)[0]


def brute_hyperltl(f, traces) -> bool:
    """Prenex HyperLTL by enumerating assignments, body by :func:`unrolled_qf`."""
    traces = list(traces)

    def go(g, env):
        if isinstance(g, Exists):
            return any(go(g.body, {**env, g.var: t}) for t in traces)
        if isinstance(g, Forall):
            return all(go(g.body, {**env, g.var: t}) for t in traces)
        return unrolled_qf(g, env) if env else unrolled_qf(g, {"_": UPTrace((), (frozenset(),))})

    return go(f, {})


# ------------------------------------------------------------------ arithmetic traces

OPS = ("add", "argl", "argr", "mult", "res")


def brute_op_trace(mode, n1, n2, n3):
    top = max(n1, n2, n3)
    stem = []
    for i in range(top + 1):
        s = {mode}
        for a, n in (("argl", n1), ("argr", n2), ("res", n3)):
            if n == i:
                s.add(a)
        stem.append(frozenset(s))
    return UPTrace(tuple(stem), (frozenset([mode]),))


def brute_top(m):
    """All members with both arguments at most ``m``."""
    out = set()
    for mode in ("add", "mult"):
        for n1 in range(m + 1):
            for n2 in range(m + 1):
                n3 = n1 + n2 if mode == "add" else n1 * n2
                out.add(brute_op_trace(mode, n1, n2, n3))
    return out


def _positions(t, a):
    L = t.stem_len + t.period
    pos = [i for i in range(L) if a in t.at(i)]
    return pos, any(a in x for x in t.loop)


def brute_top_member(t) -> bool:
    modes = [m for m in ("add", "mult") if all(m in t.at(i) for i in range(t.stem_len + t.period))]
    if len(modes) != 1:
        return False
    other = "mult" if modes[0] == "add" else "add"
    if any(other in t.at(i) for i in range(t.stem_len + t.period)):
        return False
    ns = []
    for a in ("argl", "argr", "res"):
        pos, looped = _positions(t, a)
        if looped or len(pos) != 1:
            return False
        ns.append(pos[0])
    n1, n2, n3 = ns
    return n3 == (n1 + n2 if modes[0] == "add" else n1 * n2)


def brute_prefix_extends(word) -> bool:
    """Some member trace starts with ``word`` (search over all small positions)."""
    n = len(word)
    for mode in ("add", "mult"):
        for n1 in range(2 * n + 3):
            for n2 in range(2 * n + 3):
                n3 = n1 + n2 if mode == "add" else n1 * n2
                t = brute_op_trace(mode, n1, n2, n3)
                if all(t.at(i) == word[i] for i in range(n)):
                    return True
    return False


def brute_cl_member(t, depth=None) -> bool:
    """Every prefix up to ``depth`` extends to a member."""
    depth = depth or 2 * (t.stem_len + t.period) + 4
    return all(brute_prefix_extends(t.prefix(k)) for k in range(depth + 1))


def op_alphabet_traces(max_stem, max_loop):
    """All canonical traces over the five operation propositions within bounds."""
    letters = [frozenset(c) for r in range(6) for c in itertools.combinations(OPS, r)]
    seen = set()
    for s in range(max_stem + 1):
        for p in range(1, max_loop + 1):
            for stem in itertools.product(letters, repeat=s):
                for loop in itertools.product(letters, repeat=p):
                    t = UPTrace(stem, loop)
                    if t not in seen:
                        seen.add(t)
                        yield t


# ------------------------------------------------------------------ systems

def brute_lassos(K, max_stem, max_loop):
    """Lassos by checking every vertex sequence of the allowed lengths."""
    from hypersat.kripke import LassoPath

    out = set()
    vs = list(K.vertices)
    for s in range(max_stem + 1):
        for p in range(1, max_loop + 1):
            for seq in itertools.product(vs, repeat=s + p):
                full = list(seq) + [seq[s]]
                if all(K.has_edge(full[i], full[i + 1]) for i in range(len(full) - 1)):
                    out.add(LassoPath(tuple(seq[:s]), tuple(seq[s:])))
    return out


# ------------------------------------------------------------------ random generators

def random_qf(rng: random.Random, vars_, aps, depth: int):
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.06:
            return TRUE
        if r < 0.12:
            return FALSE
        return Atom(rng.choice(aps), rng.choice(vars_))
    k = rng.randrange(10)
    sub = lambda: random_qf(rng, vars_, aps, depth - 1)
    if k == 0:
        return Not(sub())
    if k == 1:
        return Next(sub())
    if k == 2:
        return Eventually(sub())
    if k == 3:
        return Globally(sub())
    return [Or, And, Implies, Iff, Until, Until][k - 4](sub(), sub())


def random_trace(rng, aps, max_stem, max_loop):
    letter = lambda: frozenset(a for a in aps if rng.random() < 0.5)
    return UPTrace(tuple(letter() for _ in range(rng.randint(0, max_stem))),
                   tuple(letter() for _ in range(rng.randint(1, max_loop))))


def random_prenex(rng, aps, n_quant, depth, universal_only=False, existential_only=False):
    vars_ = [f"p{i}" for i in range(n_quant)]
    body = random_qf(rng, vars_, aps, depth)
    for v in reversed(vars_):
        if universal_only:
            body = Forall(v, body)
        elif existential_only:
            body = Exists(v, body)
        else:
            body = (Exists if rng.random() < 0.5 else Forall)(v, body)
    return body


def random_hyperctl(rng, aps, depth, max_quant=3):
    """Random HyperCTL* sentence: quantifiers may sit under temporal operators,
    every temporal operator and atom is in the scope of a quantifier."""
    budget = [max_quant]
    counter = itertools.count()

    def quant(bound, d):
        budget[0] -= 1
        v = f"q{next(counter)}"
        return (Exists if rng.random() < 0.5 else Forall)(v, go(bound + [v], d - 1))

    def go(bound, d):
        if d <= 0 or rng.random() < 0.2:
            return Atom(rng.choice(aps), rng.choice(bound))
        if budget[0] > 0 and rng.random() < 0.2:
            return quant(bound, d)
        k = rng.randrange(9)
        sub = lambda: go(bound, d - 1)
        if k == 0:
            return Not(sub())
        if k == 1:
            return Next(sub())
        if k == 2:
            return Eventually(sub())
        if k == 3:
            return Globally(sub())
        return [Or, And, Implies, Iff, Until][k - 4](sub(), sub())

    return quant([], depth)


def random_ast(rng, depth, vars_=("p", "q", "r"), aps=("a", "b", "c"), quantifiers=True):
    """Arbitrary formula (not necessarily well formed) for printer round trips."""
    if depth == 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.1:
            return TRUE
        if r < 0.2:
            return FALSE
        return Atom(rng.choice(aps), rng.choice(vars_))
    k = rng.randrange(11 if quantifiers else 9)
    sub = lambda: random_ast(rng, depth - 1, vars_, aps, quantifiers)
    if k < 4:
        return [Not, Next, Eventually, Globally][k](sub())
    if k < 9:
        return [Or, And, Implies, Iff, Until][k - 4](sub(), sub())
    return [Exists, Forall][k - 9](rng.choice(vars_), sub())
