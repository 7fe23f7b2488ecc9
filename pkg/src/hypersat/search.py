"""Bounded search for finite models made of ultimately periodic traces.

Candidate traces are all canonical lassos with bounded stem and loop over
the given alphabet.  Top-level conjuncts of the form ``forall p. body`` or
``forall p. forall q. body`` (quantifier-free bodies) prune them first:
single traces must satisfy the one-variable conjuncts, and every pair
(including a trace with itself) the two-variable ones.  Candidate sets are
then tried in a fixed order: fewer traces first, then smaller total size,
then lexicographically by trace order.  The first set that satisfies the
sentence is returned after an independent re-check.

Running out of candidates says nothing about unsatisfiability.
"""
from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import BadArgument, ResourceLimit
from .formula import (
    Forall, check_hyperltl, conj, conjuncts, free_vars, is_quantifier_free,
    is_sentence, props, rename_free,
)
from .traces import TraceAssignment, TraceSet, UPTrace, eval_hyperltl, eval_qf

SAT, BOUND_EXHAUSTED = "SAT", "BOUND_EXHAUSTED"
CHUNK = 1 << 15


@dataclass(frozen=True)
class SearchBounds:
    max_traces: int = 2
    max_stem: int = 2
    max_loop: int = 1
    alphabet: tuple = ()

    def __post_init__(self):
        if self.max_traces < 1 or self.max_loop < 1 or self.max_stem < 0:
            raise BadArgument("bounds need max_traces, max_loop >= 1 and max_stem >= 0")
        object.__setattr__(self, "alphabet", tuple(sorted(set(self.alphabet))))


@dataclass
class SearchOutcome:
    status: str
    model: TraceSet | None = None
    stats: dict = field(default_factory=dict)

    @property
    def sat(self) -> bool:
        return self.status == SAT


def _universal_filters(f):
    """One- and two-variable universal conjuncts, renamed to ``u``/``w``."""
    one, two = [], []
    for c in conjuncts(f):
        if not isinstance(c, Forall):
            continue
        if is_quantifier_free(c.body) and free_vars(c.body) <= {c.var}:
            one.append(rename_free(c.body, {c.var: "u"}))
        elif isinstance(c.body, Forall) and is_quantifier_free(c.body.body):
            v, w = c.var, c.body.var
            if v == w:
                if free_vars(c.body.body) <= {w}:
                    one.append(rename_free(c.body.body, {w: "u"}))
                continue
            if free_vars(c.body.body) <= {v, w}:
                two.append(rename_free(c.body.body, {v: "u", w: "w"}))
    return one, two


def _primitive_mask(codes, p):
    """Rows whose length-``p`` loop (last ``p`` columns) is primitive."""
    loop = codes[:, -p:]
    ok = np.ones(len(codes), dtype=bool)
    for d in range(1, p):
        if p % d == 0:
            ok &= ~np.all(loop == np.roll(loop, -d, axis=1), axis=1)
    return ok


def candidate_traces(bounds: SearchBounds, filter_formula=None, stats=None) -> list:
    """Canonical traces within bounds that satisfy ``filter_formula`` (free
    variable ``u``), sorted by the trace key."""
    alphabet = bounds.alphabet
    nlet = 1 << len(alphabet)
    prog = None
    if filter_formula is not None:
        prog = _kernels.compile_program(filter_formula, ("u",), alphabet)
    out = []
    examined = 0
    for s in range(bounds.max_stem + 1):
        for p in range(1, bounds.max_loop + 1):
            L = s + p
            total = nlet ** L
            for start in range(0, total, CHUNK):
                idx = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
                codes = np.empty((len(idx), L), dtype=np.uint64)
                rest = idx.copy()
                for col in range(L - 1, -1, -1):
                    codes[:, col] = (rest % nlet).astype(np.uint64)
                    rest //= nlet
                keep = _primitive_mask(codes, p)
                if s:
                    keep &= codes[:, s - 1] != codes[:, L - 1]
                codes = codes[keep]
                examined += len(codes)
                if prog is not None and len(codes):
                    res = _kernels.eval_program(prog, np.ascontiguousarray(codes[:, None, :]), s)
                    codes = codes[res[:, prog.root, 0].astype(bool)]
                for row in codes:
                    letters = [frozenset(a for i, a in enumerate(alphabet) if int(c) >> i & 1) for c in row]
                    out.append(UPTrace(tuple(letters[:s]), tuple(letters[s:])))
    if stats is not None:
        stats["traces_examined"] = examined
    out.sort(key=lambda t: t.key(alphabet))
    return out


def _compat(traces, two, alphabet):
    n = len(traces)
    ok = [[True] * n for _ in range(n)]
    if not two:
        return ok
    body = conj(two)
    for i in range(n):
        for j in range(n):
            a = TraceAssignment.of({"u": traces[i], "w": traces[j]})
            if not eval_qf(body, a, alphabet):
                ok[i][j] = False
    return ok


def _combos(sizes, ok, k):
    """Index tuples of length ``k``, pairwise compatible, in (sum, lex) order."""
    n = len(sizes)
    if k > n:
        return
    lo = sum(sorted(sizes)[:k])
    hi = sum(sorted(sizes)[-k:])
    for target in range(lo, hi + 1):
        stack = []

        def go(start, acc):
            if len(stack) == k:
                if acc == target:
                    yield tuple(stack)
                return
            need = k - len(stack)
            for i in range(start, n - need + 1):
                if acc + sizes[i] * need > target:
                    break  # sizes are sorted, later ones are no smaller
                if not ok[i][i] or any(not (ok[i][j] and ok[j][i]) for j in stack):
                    continue
                stack.append(i)
                yield from go(i + 1, acc + sizes[i])
                stack.pop()

        yield from go(0, 0)


def _check_batch(args):
    f, alphabet, batch = args
    for pos, ts in enumerate(batch):
        if eval_hyperltl(f, TraceSet(tuple(ts), alphabet)):
            return pos
    return None


def sat_search(f, bounds: SearchBounds, jobs: int = 1, timeout: float | None = None,
               max_candidates: int | None = None) -> SearchOutcome:
    """Return the first satisfying candidate set, or ``BOUND_EXHAUSTED``.

    ``ResourceLimit`` is raised when ``timeout`` seconds or
    ``max_candidates`` candidate sets are used up before the search ends.
    The result does not depend on ``jobs``.
    """
    check_hyperltl(f)
    if not is_sentence(f):
        raise BadArgument("sat_search needs a sentence")
    if not bounds.alphabet:
        bounds = SearchBounds(bounds.max_traces, bounds.max_stem, bounds.max_loop, tuple(props(f)))
    alphabet = bounds.alphabet
    t0 = time.monotonic()
    stats = {"jobs": jobs}
    one, two = _universal_filters(f)
    traces = candidate_traces(bounds, conj(one) if one else None, stats)
    stats["candidate_traces"] = len(traces)
    ok = _compat(traces, two, alphabet)
    sizes = [len(t) for t in traces]
    examined = 0

    def out_of_time():
        return timeout is not None and time.monotonic() - t0 > timeout

    def finish(status, model=None):
        stats["candidates_examined"] = examined
        stats["elapsed"] = round(time.monotonic() - t0, 4)
        return SearchOutcome(status, model, stats)

    def sets():
        for k in range(1, bounds.max_traces + 1):
            for combo in _combos(sizes, ok, k):
                yield [traces[i] for i in combo]

    gen = sets()
    batch_size = 64
    pool = ProcessPoolExecutor(jobs) if jobs > 1 else None
    try:
        while True:
            round_ = [b for b in (list(itertools.islice(gen, batch_size)) for _ in range(max(jobs, 1))) if b]
            if not round_:
                return finish(BOUND_EXHAUSTED)
            if pool is None:
                hits = [_check_batch((f, alphabet, b)) for b in round_]
            else:
                hits = list(pool.map(_check_batch, [(f, alphabet, b) for b in round_]))
            for b, hit in zip(round_, hits):
                if hit is not None and (max_candidates is None or examined + hit < max_candidates):
                    examined += hit + 1
                    model = TraceSet(tuple(b[hit]), alphabet)
                    with _kernels.using_backend("python"):  # re-check on the other backend
                        if not eval_hyperltl(f, model):
                            raise AssertionError("search produced a non-model")
                    return finish(SAT, model)
                examined += len(b)
                if max_candidates is not None and examined >= max_candidates:
                    raise ResourceLimit(f"candidate cap {max_candidates} reached")
            if out_of_time():
                raise ResourceLimit(f"timeout after {timeout} s")
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
