"""Three-valued evaluation of arithmetic sentences over small domains.

Number quantifiers range over ``0..domain_bound``, sets over subsets of
``0..set_universe_bound`` (functions and relations likewise have support in
that range).  Every value tried is a genuine object (a finite set is a set),
so a witness for ``exists`` or a counterexample for ``forall`` settles the
answer.  Otherwise the quantifier is only decided when its range is exact:
a number quantifier guarded by an upper bound, as in
``forall j:num. j <= i -> ...``.  Anything else is ``unknown``.

If the first pass gives ``unknown``, the number bound is doubled once and
the evaluation repeated.
"""
from __future__ import annotations

import itertools

from ..errors import BadArgument, ResourceLimit, SortError
from .ast import (
    AAnd, AExists, AFalse, AForall, AIff, AImplies, ANot, AOr, ATrue, Add,
    App, Eq, In, Le, Lt, Mul, Num, PairIn, Var, aconjuncts, arith_free_vars,
)

TRUE, FALSE, UNKNOWN = "true", "false", "unknown"
MAX_RANGE = 1 << 16


def _not(v):
    return None if v is None else not v


def _and(a, b):
    if a is False or b is False:
        return False
    if a is None or b is None:
        return None
    return True


def _or(a, b):
    return _not(_and(_not(a), _not(b)))


class _Ctx:
    def __init__(self, nb, sb):
        self.nb, self.sb = nb, sb

    def domain(self, sort):
        k = self.sb
        if sort == "num":
            return range(self.nb + 1)
        if sort == "set":
            return self._subsets(range(k + 1))
        if sort == "func":
            size = (self.nb + 1) ** (k + 1)
            self._check(size)
            return itertools.product(range(self.nb + 1), repeat=k + 1)
        if sort == "rel":
            return self._subsets([(a, b) for a in range(k + 1) for b in range(k + 1)])
        if sort == "setset":
            sets = list(self._subsets(range(k + 1)))
            return self._subsets(sets)
        raise SortError(f"unknown sort {sort!r}")

    def _check(self, size):
        if size > MAX_RANGE:
            raise ResourceLimit(f"quantifier domain of size {size} exceeds {MAX_RANGE}")

    def _subsets(self, items):
        items = list(items)
        self._check(2 ** len(items))
        return (frozenset(c) for r in range(len(items) + 1) for c in itertools.combinations(items, r))


def _term(t, env):
    if isinstance(t, Num):
        return t.value
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Add):
        return _term(t.left, env) + _term(t.right, env)
    if isinstance(t, Mul):
        return _term(t.left, env) * _term(t.right, env)
    if isinstance(t, App):
        f, n = env[t.func], _term(t.arg, env)
        return f[n] if n < len(f) else 0
    raise SortError(f"bad term {t!r}")


def _upper_bound(var, guard, env):
    """Exclusive upper bound on ``var`` implied by ``guard``, if visible."""
    best = None
    for c in aconjuncts(guard):
        if isinstance(c, (Le, Lt)) and c.left == Var(var):
            t = c.right
            if var in _term_vars(t):
                continue
            v = _term(t, env) + (1 if isinstance(c, Le) else 0)
            best = v if best is None else min(best, v)
    return best


def _term_vars(t):
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, App):
        return {t.func} | _term_vars(t.arg)
    if isinstance(t, (Add, Mul)):
        return _term_vars(t.left) | _term_vars(t.right)
    return set()


def _eval(f, env, ctx):
    if isinstance(f, ATrue):
        return True
    if isinstance(f, AFalse):
        return False
    if isinstance(f, Eq):
        return _term(f.left, env) == _term(f.right, env)
    if isinstance(f, Lt):
        return _term(f.left, env) < _term(f.right, env)
    if isinstance(f, Le):
        return _term(f.left, env) <= _term(f.right, env)
    if isinstance(f, In):
        if isinstance(f.elem, Var) and isinstance(env.get(f.elem.name), frozenset):
            return env[f.elem.name] in env[f.container]
        return _term(f.elem, env) in env[f.container]
    if isinstance(f, PairIn):
        return (_term(f.first, env), _term(f.second, env)) in env[f.rel]
    if isinstance(f, ANot):
        return _not(_eval(f.arg, env, ctx))
    if isinstance(f, AAnd):
        a = _eval(f.left, env, ctx)
        return False if a is False else _and(a, _eval(f.right, env, ctx))
    if isinstance(f, AOr):
        a = _eval(f.left, env, ctx)
        return True if a is True else _or(a, _eval(f.right, env, ctx))
    if isinstance(f, AImplies):
        a = _eval(f.left, env, ctx)
        return True if a is False else _or(_not(a), _eval(f.right, env, ctx))
    if isinstance(f, AIff):
        a, b = _eval(f.left, env, ctx), _eval(f.right, env, ctx)
        return None if a is None or b is None else a == b
    if isinstance(f, (AExists, AForall)):
        exists = isinstance(f, AExists)
        exact = False
        dom = None
        if f.sort == "num":
            guard_of = AAnd if exists else AImplies
            if isinstance(f.body, guard_of):
                ub = _upper_bound(f.var, f.body.left, env)
                if ub is not None:
                    ctx._check(ub)
                    dom, exact = range(max(ub, 0)), True
        if dom is None:
            dom = ctx.domain(f.sort)
        unknown = False
        for val in dom:
            r = _eval(f.body, {**env, f.var: val}, ctx)
            if r is exists:
                return exists
            if r is None:
                unknown = True
        if unknown or not exact:
            return None
        return not exists
    raise SortError(f"bad formula {f!r}")


def eval_bounded_arith(phi, domain_bound: int = 4, set_universe_bound: int = 3, env: dict | None = None) -> str:
    """``"true"``, ``"false"`` or ``"unknown"``."""
    if domain_bound < 1 or set_universe_bound < 1:
        raise BadArgument("bounds must be at least 1")
    env = dict(env or {})
    missing = arith_free_vars(phi) - set(env)
    if missing:
        raise SortError(f"free variables without values: {sorted(missing)}")
    r = _eval(phi, env, _Ctx(domain_bound, set_universe_bound))
    if r is None:
        try:
            r = _eval(phi, env, _Ctx(2 * domain_bound, set_universe_bound))
        except ResourceLimit:
            r = None
    return UNKNOWN if r is None else (TRUE if r else FALSE)
