"""First-order logic over finite words, word encodings and the FO-to-HyperLTL
translation.

A word ``w`` of length ``n`` is encoded as ``n`` traces.  Trace ``k`` carries
the letter ``w[k]`` at time 0 and a marker proposition ``o`` at time
``f(k)`` for a stretch function ``f`` (positive, strictly increasing); every
other position is empty.  The order of word positions then becomes the order
of marker times.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import BadArgument, EmptyWord, NotPrenex, NotStrictlyIncreasing, ParseError
from .formula import And as HAnd, Atom, Eventually, Exists, Forall, Implies as HImplies, Not as HNot, Or as HOr
from .syntax.lexer import TokenStream, tokenize

MARKER = "o"


class FOFormula:
    __slots__ = ()

    def __str__(self):
        return print_fo(self)


@dataclass(frozen=True)
class FAtom(FOFormula):
    prop: str
    var: str


@dataclass(frozen=True)
class FLe(FOFormula):
    left: str
    right: str


@dataclass(frozen=True)
class FTrue(FOFormula):
    pass


@dataclass(frozen=True)
class FFalse(FOFormula):
    pass


@dataclass(frozen=True)
class FNot(FOFormula):
    arg: FOFormula


@dataclass(frozen=True)
class FOr(FOFormula):
    left: FOFormula
    right: FOFormula


@dataclass(frozen=True)
class FAnd(FOFormula):
    left: FOFormula
    right: FOFormula


@dataclass(frozen=True)
class FImplies(FOFormula):
    left: FOFormula
    right: FOFormula


@dataclass(frozen=True)
class FExists(FOFormula):
    var: str
    body: FOFormula


@dataclass(frozen=True)
class FForall(FOFormula):
    var: str
    body: FOFormula


_FQ = (FExists, FForall)
_FBIN = (FOr, FAnd, FImplies)


def fo_free_vars(f: FOFormula, bound=frozenset()) -> frozenset:
    if isinstance(f, FAtom):
        return frozenset() if f.var in bound else frozenset([f.var])
    if isinstance(f, FLe):
        return frozenset(v for v in (f.left, f.right) if v not in bound)
    if isinstance(f, (FTrue, FFalse)):
        return frozenset()
    if isinstance(f, FNot):
        return fo_free_vars(f.arg, bound)
    if isinstance(f, _FBIN):
        return fo_free_vars(f.left, bound) | fo_free_vars(f.right, bound)
    return fo_free_vars(f.body, bound | {f.var})


def fo_quantifier_depth(f: FOFormula) -> int:
    if isinstance(f, (FAtom, FLe, FTrue, FFalse)):
        return 0
    if isinstance(f, FNot):
        return fo_quantifier_depth(f.arg)
    if isinstance(f, _FBIN):
        return max(fo_quantifier_depth(f.left), fo_quantifier_depth(f.right))
    return 1 + fo_quantifier_depth(f.body)


def fo_props(f: FOFormula) -> frozenset:
    if isinstance(f, FAtom):
        return frozenset([f.prop])
    if isinstance(f, (FLe, FTrue, FFalse)):
        return frozenset()
    if isinstance(f, FNot):
        return fo_props(f.arg)
    if isinstance(f, _FBIN):
        return fo_props(f.left) | fo_props(f.right)
    return fo_props(f.body)


def eval_fo(f: FOFormula, w, env=None) -> bool:
    """``w |= f`` with positions ``0..len(w)-1`` and ``env`` for free variables."""
    env = dict(env or {})
    if not w:
        raise EmptyWord("words must be nonempty")

    def go(g):
        if isinstance(g, FAtom):
            return g.prop in w[env[g.var]]
        if isinstance(g, FLe):
            return env[g.left] <= env[g.right]
        if isinstance(g, FTrue):
            return True
        if isinstance(g, FFalse):
            return False
        if isinstance(g, FNot):
            return not go(g.arg)
        if isinstance(g, FOr):
            return go(g.left) or go(g.right)
        if isinstance(g, FAnd):
            return go(g.left) and go(g.right)
        if isinstance(g, FImplies):
            return (not go(g.left)) or go(g.right)
        want = isinstance(g, FExists)
        old = env.get(g.var)
        had = g.var in env
        try:
            for i in range(len(w)):
                env[g.var] = i
                if go(g.body) == want:
                    return want
            return not want
        finally:
            if had:
                env[g.var] = old
            else:
                env.pop(g.var, None)

    return go(f)


def fo_split_prefix(f: FOFormula):
    prefix = []
    while isinstance(f, _FQ):
        prefix.append(("E" if isinstance(f, FExists) else "A", f.var))
        f = f.body
    return prefix, f


def _fo_qf(f):
    if isinstance(f, _FQ):
        return False
    if isinstance(f, FNot):
        return _fo_qf(f.arg)
    if isinstance(f, _FBIN):
        return _fo_qf(f.left) and _fo_qf(f.right)
    return True


def fo_to_hyperltl(f: FOFormula, marker: str = MARKER):
    """Translate a prenex FO sentence into a HyperLTL sentence over encodings.

    Each FO variable becomes a trace variable of the same name; ``a(x)``
    becomes ``a[x]`` (read at time 0) and ``x <= y`` becomes
    ``F (o[x] & F o[y])``.
    """
    prefix, body = fo_split_prefix(f)
    if not _fo_qf(body):
        raise NotPrenex("FO formula must be prenex")
    if marker in fo_props(f):
        raise BadArgument(f"proposition {marker!r} is reserved for the position marker")

    def tr(g):
        if isinstance(g, FAtom):
            return Atom(g.prop, g.var)
        if isinstance(g, FLe):
            return Eventually(HAnd(Atom(marker, g.left), Eventually(Atom(marker, g.right))))
        if isinstance(g, FTrue):
            from .formula import TRUE

            return TRUE
        if isinstance(g, FFalse):
            from .formula import FALSE

            return FALSE
        if isinstance(g, FNot):
            return HNot(tr(g.arg))
        if isinstance(g, FOr):
            return HOr(tr(g.left), tr(g.right))
        if isinstance(g, FAnd):
            return HAnd(tr(g.left), tr(g.right))
        return HImplies(tr(g.left), tr(g.right))

    out = tr(body)
    for q, v in reversed(prefix):
        out = Exists(v, out) if q == "E" else Forall(v, out)
    return out


# ---------------------------------------------------------------- encodings

@dataclass(frozen=True)
class Stretch:
    """Named stretch function ``n -> fn(n)``."""

    name: str
    fn: Callable[[int], int]

    def __call__(self, n: int) -> int:
        return self.fn(n)


def affine_stretch(mult: int, add: int = 0) -> Stretch:
    """``n -> mult * (n + 1) + add``."""
    return Stretch(f"{mult}(n+1)+{add}" if add else f"{mult}(n+1)", lambda n: mult * (n + 1) + add)


DEFAULT_STRETCHES = (affine_stretch(1), affine_stretch(2), affine_stretch(3))
NONAFFINE_STRETCHES = (Stretch("n^2+1", lambda n: n * n + 1), Stretch("2^n", lambda n: 2 ** n))


def encode_word(w, f: Callable[[int], int], marker: str = MARKER):
    """Trace set encoding the nonempty word ``w`` under stretch ``f``."""
    from .traces import TraceSet, UPTrace

    w = tuple(frozenset(x) for x in w)
    if not w:
        raise EmptyWord("words must be nonempty")
    if any(marker in x for x in w):
        raise BadArgument(f"proposition {marker!r} is reserved for the position marker")
    vals = [f(n) for n in range(len(w))]
    if vals[0] <= 0 or any(b <= a for a, b in zip(vals, vals[1:])):
        raise NotStrictlyIncreasing(f"stretch values {vals} are not positive and strictly increasing")
    alpha = set().union(*w) | {marker}
    traces = []
    for n, letter in enumerate(w):
        stem = [letter] + [frozenset()] * (vals[n] - 1) + [frozenset([marker])]
        traces.append(UPTrace(tuple(stem), (frozenset(),)))
    return TraceSet(tuple(traces), tuple(sorted(alpha)))


def encode_word_n(w, N: int, marker: str = MARKER):
    """Encoding with gaps of ``N``: marker of position ``k`` at ``N (k + 1)``."""
    return encode_word(w, lambda n: N * (n + 1), marker)


def all_words(alphabet, max_len: int, min_len: int = 1):
    """All words over the letters ``2^alphabet`` with lengths in range."""
    import itertools

    alphabet = sorted(alphabet)
    letters = [frozenset(c) for r in range(len(alphabet) + 1) for c in itertools.combinations(alphabet, r)]
    for n in range(min_len, max_len + 1):
        for w in itertools.product(letters, repeat=n):
            yield w


# ---------------------------------------------------------------- text form

_FO_OPS = ["<->", "->", "<=", "<", "!", "&", "|", "(", ")", "."]


def parse_fo(text: str) -> FOFormula:
    """Parse FO text such as ``exists x. forall y. a(x) & x <= y``.

    ``x < y`` is accepted as shorthand for ``!(y <= x)``.
    """
    ts = TokenStream(tokenize(text, _FO_OPS), text)

    def formula():
        if ts.at("exists") or ts.at("forall"):
            q = ts.next()
            v = ts.expect_ident("variable")
            ts.expect(".")
            body = formula()
            return (FExists if q.text == "exists" else FForall)(v.text, body)
        return impl()

    def impl():
        left = or_()
        if ts.accept("->"):
            right = formula() if (ts.at("exists") or ts.at("forall")) else impl()
            return FImplies(left, right)
        return left

    def chain(sub, op, cls):
        left = sub()
        while ts.accept(op):
            if ts.at("exists") or ts.at("forall"):
                return cls(left, formula())
            left = cls(left, sub())
        return left

    def or_():
        return chain(and_, "|", FOr)

    def and_():
        return chain(unary, "&", FAnd)

    def unary():
        if ts.accept("!"):
            return FNot(unary())
        if ts.at("exists") or ts.at("forall"):
            return formula()
        return primary()

    def primary():
        t = ts.peek()
        if ts.accept("("):
            f = formula()
            ts.expect(")")
            return f
        if t.kind != "ident":
            raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.start, text)
        ts.next()
        if t.text == "true":
            return FTrue()
        if t.text == "false":
            return FFalse()
        if ts.accept("("):
            v = ts.expect_ident("variable")
            ts.expect(")")
            return FAtom(t.text, v.text)
        if ts.accept("<="):
            r = ts.expect_ident("variable")
            return FLe(t.text, r.text)
        if ts.accept("<"):
            r = ts.expect_ident("variable")
            return FNot(FLe(r.text, t.text))
        raise ParseError("expected '(' or '<=' after name", ts.peek().start, text)

    f = formula()
    if ts.peek().kind != "eof":
        raise ts.error(f"unexpected {ts.peek().text!r}")
    return f


_FPREC = {FImplies: 1, FOr: 2, FAnd: 3}


def print_fo(f: FOFormula) -> str:
    def prec(g):
        if isinstance(g, _FQ):
            return 0
        return _FPREC.get(type(g), 5)

    def go(g, top=False):
        if isinstance(g, _FQ):
            s = f"{'exists' if isinstance(g, FExists) else 'forall'} {g.var}. {go(g.body, True)}"
            return s if top else f"({s})"
        if isinstance(g, FAtom):
            return f"{g.prop}({g.var})"
        if isinstance(g, FLe):
            return f"{g.left} <= {g.right}"
        if isinstance(g, FTrue):
            return "true"
        if isinstance(g, FFalse):
            return "false"
        if isinstance(g, FNot):
            inner = go(g.arg)
            return f"!{inner}" if prec(g.arg) >= 5 or isinstance(g.arg, _FQ) else f"!({inner})"
        p = _FPREC[type(g)]
        sym = {FImplies: "->", FOr: "|", FAnd: "&"}[type(g)]
        right_assoc = isinstance(g, FImplies)
        lp, rp = prec(g.left), prec(g.right)
        l = go(g.left)
        r = go(g.right)
        if lp != 0 and (lp <= p if right_assoc else lp < p):
            l = f"({l})"
        if rp != 0 and (rp < p if right_assoc else rp <= p):
            r = f"({r})"
        return f"{l} {sym} {r}"

    return go(f, True)
