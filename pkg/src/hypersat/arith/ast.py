"""Sorted formulas of (up to third-order) arithmetic: AST, text syntax, sort checking.

Sorts: ``num`` (natural numbers), ``set`` (sets of numbers), ``func``
(functions from numbers to numbers), ``rel`` (binary relations on numbers)
and ``setset`` (sets of sets of numbers).

Text syntax::

    formula := ("exists" | "forall") NAME ":" SORT "." formula
             | formula "<->" formula | formula "->" formula
             | formula "|" formula | formula "&" formula | "!" formula
             | term ("=" | "<" | "<=") term
             | term "in" NAME | "(" term "," term ")" "in" NAME
             | "true" | "false" | "(" formula ")"
    term    := term "+" term | term "*" term | NUMBER | NAME | NAME "(" term ")" | "(" term ")"

``x in Y`` covers both number-in-set and set-in-family membership; the sort
of ``x`` decides which one is meant.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParseError, SortError
from ..syntax.lexer import TokenStream, tokenize

SORTS = ("num", "set", "func", "rel", "setset")


class Term:
    __slots__ = ()

    def __str__(self):
        return print_term(self)


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Num(Term):
    value: int


@dataclass(frozen=True)
class App(Term):
    func: str
    arg: Term


@dataclass(frozen=True)
class Add(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term


class AFormula:
    __slots__ = ()

    def __str__(self):
        return print_arith(self)


@dataclass(frozen=True)
class Eq(AFormula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Lt(AFormula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Le(AFormula):
    left: Term
    right: Term


@dataclass(frozen=True)
class In(AFormula):
    elem: Term
    container: str


@dataclass(frozen=True)
class PairIn(AFormula):
    first: Term
    second: Term
    rel: str


@dataclass(frozen=True)
class ATrue(AFormula):
    pass


@dataclass(frozen=True)
class AFalse(AFormula):
    pass


@dataclass(frozen=True)
class ANot(AFormula):
    arg: AFormula


@dataclass(frozen=True)
class AAnd(AFormula):
    left: AFormula
    right: AFormula


@dataclass(frozen=True)
class AOr(AFormula):
    left: AFormula
    right: AFormula


@dataclass(frozen=True)
class AImplies(AFormula):
    left: AFormula
    right: AFormula


@dataclass(frozen=True)
class AIff(AFormula):
    left: AFormula
    right: AFormula


@dataclass(frozen=True)
class AExists(AFormula):
    var: str
    sort: str
    body: AFormula


@dataclass(frozen=True)
class AForall(AFormula):
    var: str
    sort: str
    body: AFormula


ABIN = (AAnd, AOr, AImplies, AIff)
AQUANT = (AExists, AForall)
ATOMS = (Eq, Lt, Le, In, PairIn, ATrue, AFalse)


def aconj(*parts):
    parts = list(parts[0]) if len(parts) == 1 and not isinstance(parts[0], AFormula) else list(parts)
    if not parts:
        return ATrue()
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = AAnd(p, out)
    return out


def adisj(*parts):
    parts = list(parts[0]) if len(parts) == 1 and not isinstance(parts[0], AFormula) else list(parts)
    if not parts:
        return AFalse()
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = AOr(p, out)
    return out


def aconjuncts(f):
    out, stack = [], [f]
    while stack:
        g = stack.pop()
        if isinstance(g, AAnd):
            stack.append(g.right)
            stack.append(g.left)
        else:
            out.append(g)
    return out


# ---------------------------------------------------------------- printing

def print_term(t: Term, ctx: int = 0) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Num):
        return str(t.value)
    if isinstance(t, App):
        return f"{t.func}({print_term(t.arg)})"
    if isinstance(t, Add):
        s = f"{print_term(t.left, 1)} + {print_term(t.right, 2)}"
        return f"({s})" if ctx > 1 else s
    if isinstance(t, Mul):
        s = f"{print_term(t.left, 3)} * {print_term(t.right, 4)}"
        return f"({s})" if ctx > 3 else s
    raise TypeError(t)


_APREC = {AIff: 1, AImplies: 2, AOr: 3, AAnd: 4}
_ASYM = {AIff: "<->", AImplies: "->", AOr: "|", AAnd: "&"}


def _aprec(f):
    if isinstance(f, AQUANT):
        return 0
    return _APREC.get(type(f), 6)


def print_arith(f: AFormula) -> str:
    def go(g, top=False):
        if isinstance(g, AQUANT):
            word = "exists" if isinstance(g, AExists) else "forall"
            s = f"{word} {g.var}:{g.sort}. {go(g.body, True)}"
            return s if top else f"({s})"
        if isinstance(g, Eq):
            return f"{print_term(g.left)} = {print_term(g.right)}"
        if isinstance(g, Lt):
            return f"{print_term(g.left)} < {print_term(g.right)}"
        if isinstance(g, Le):
            return f"{print_term(g.left)} <= {print_term(g.right)}"
        if isinstance(g, In):
            return f"{print_term(g.elem)} in {g.container}"
        if isinstance(g, PairIn):
            return f"({print_term(g.first)}, {print_term(g.second)}) in {g.rel}"
        if isinstance(g, ATrue):
            return "true"
        if isinstance(g, AFalse):
            return "false"
        if isinstance(g, ANot):
            inner = go(g.arg)
            if isinstance(g.arg, ATOMS + (ANot,) + AQUANT):
                return f"!{inner}"
            return f"!({inner})"
        p = _APREC[type(g)]
        right_assoc = isinstance(g, (AImplies, AIff))
        lp, rp = _aprec(g.left), _aprec(g.right)
        l, r = go(g.left), go(g.right)
        if lp != 0 and (lp <= p if right_assoc else lp < p):
            l = f"({l})"
        if rp != 0 and (rp < p if right_assoc else rp <= p):
            r = f"({r})"
        return f"{l} {_ASYM[type(g)]} {r}"

    return go(f, True)


# ---------------------------------------------------------------- parsing

_OPS = ["<->", "->", "<=", "<", "=", "!", "&", "|", "(", ")", ",", ".", ":", "+", "*"]


class _ArithParser:
    def __init__(self, text):
        self.text = text
        self.ts = TokenStream(tokenize(text, _OPS), text)

    def parse(self):
        f = self.formula()
        if self.ts.peek().kind != "eof":
            raise self.ts.error(f"unexpected {self.ts.peek().text!r}")
        return f

    def formula(self):
        if self.ts.at("exists") or self.ts.at("forall"):
            q = self.ts.next()
            v = self.ts.expect_ident("variable")
            self.ts.expect(":")
            s = self.ts.expect_ident("sort")
            if s.text not in SORTS:
                raise ParseError(f"unknown sort {s.text!r}", s.start, self.text)
            self.ts.expect(".")
            body = self.formula()
            return (AExists if q.text == "exists" else AForall)(v.text, s.text, body)
        return self.iff()

    def _rhs(self, sub):
        if self.ts.at("exists") or self.ts.at("forall"):
            return self.formula()
        return sub()

    def iff(self):
        left = self.impl()
        if self.ts.accept("<->"):
            return AIff(left, self._rhs(self.iff))
        return left

    def impl(self):
        left = self.or_()
        if self.ts.accept("->"):
            return AImplies(left, self._rhs(self.impl))
        return left

    def or_(self):
        left = self.and_()
        while self.ts.accept("|"):
            if self.ts.at("exists") or self.ts.at("forall"):
                return AOr(left, self.formula())
            left = AOr(left, self.and_())
        return left

    def and_(self):
        left = self.unary()
        while self.ts.accept("&"):
            if self.ts.at("exists") or self.ts.at("forall"):
                return AAnd(left, self.formula())
            left = AAnd(left, self.unary())
        return left

    def unary(self):
        if self.ts.accept("!"):
            return ANot(self.unary())
        if self.ts.at("exists") or self.ts.at("forall"):
            return self.formula()
        return self.atom()

    def atom(self):
        t = self.ts.peek()
        if t.kind == "ident" and t.text in ("true", "false"):
            self.ts.next()
            return ATrue() if t.text == "true" else AFalse()
        if self.ts.at("("):
            save = self.ts.pos
            # try a parenthesised formula first, then fall back to a term
            try:
                self.ts.next()
                f = self.formula()
                self.ts.expect(")")
                if not (self.ts.at("=") or self.ts.at("<") or self.ts.at("<=") or self.ts.at("in")
                        or self.ts.at("+") or self.ts.at("*")):
                    return f
            except ParseError:
                pass
            self.ts.pos = save
            # pair membership
            try:
                self.ts.next()
                a = self.term()
                if self.ts.accept(","):
                    b = self.term()
                    self.ts.expect(")")
                    self.ts.expect("in")
                    r = self.ts.expect_ident("relation name")
                    return PairIn(a, b, r.text)
            except ParseError:
                pass
            self.ts.pos = save
        left = self.term()
        if self.ts.accept("="):
            return Eq(left, self.term())
        if self.ts.accept("<="):
            return Le(left, self.term())
        if self.ts.accept("<"):
            return Lt(left, self.term())
        if self.ts.accept("in"):
            c = self.ts.expect_ident("set name")
            return In(left, c.text)
        raise self.ts.error("expected '=', '<', '<=' or 'in'")

    def term(self):
        left = self.product()
        while self.ts.accept("+"):
            left = Add(left, self.product())
        return left

    def product(self):
        left = self.atomic()
        while self.ts.accept("*"):
            left = Mul(left, self.atomic())
        return left

    def atomic(self):
        t = self.ts.peek()
        if t.kind == "number":
            self.ts.next()
            return Num(int(t.text))
        if self.ts.accept("("):
            inner = self.term()
            self.ts.expect(")")
            return inner
        if t.kind == "ident" and t.text not in ("in", "exists", "forall", "true", "false"):
            self.ts.next()
            if self.ts.accept("("):
                arg = self.term()
                self.ts.expect(")")
                return App(t.text, arg)
            return Var(t.text)
        raise self.ts.error(f"expected a term, found {t.text or 'end of input'!r}")


def parse_arith(text: str) -> AFormula:
    return _ArithParser(text).parse()


# ---------------------------------------------------------------- sorts

def sort_check(f: AFormula, env: dict | None = None) -> dict:
    """Check the sort discipline; returns the sorts of all bound variables seen."""
    env = dict(env or {})
    seen = {}

    def term(t, env):
        if isinstance(t, Var):
            s = env.get(t.name)
            if s is None:
                raise SortError(f"unbound variable {t.name!r}")
            if s != "num":
                raise SortError(f"{t.name!r} has sort {s}, expected num")
        elif isinstance(t, App):
            if env.get(t.func) != "func":
                raise SortError(f"{t.func!r} is not a function variable")
            term(t.arg, env)
        elif isinstance(t, (Add, Mul)):
            term(t.left, env)
            term(t.right, env)
        elif not isinstance(t, Num):
            raise SortError(f"bad term {t!r}")

    def go(g, env):
        if isinstance(g, (Eq, Lt, Le)):
            term(g.left, env)
            term(g.right, env)
        elif isinstance(g, In):
            cs = env.get(g.container)
            if isinstance(g.elem, Var) and env.get(g.elem.name) == "set":
                if cs != "setset":
                    raise SortError(f"{g.container!r} must be a setset for set membership")
            else:
                term(g.elem, env)
                if cs != "set":
                    raise SortError(f"{g.container!r} must be a set")
        elif isinstance(g, PairIn):
            term(g.first, env)
            term(g.second, env)
            if env.get(g.rel) != "rel":
                raise SortError(f"{g.rel!r} must be a relation")
        elif isinstance(g, (ATrue, AFalse)):
            pass
        elif isinstance(g, ANot):
            go(g.arg, env)
        elif isinstance(g, ABIN):
            go(g.left, env)
            go(g.right, env)
        elif isinstance(g, AQUANT):
            if g.sort not in SORTS:
                raise SortError(f"unknown sort {g.sort!r}")
            seen[g.var] = g.sort
            go(g.body, {**env, g.var: g.sort})
        else:
            raise SortError(f"bad formula {g!r}")

    go(f, env)
    return seen


def arith_free_vars(f: AFormula) -> frozenset:
    def term(t, bound):
        if isinstance(t, Var):
            return frozenset() if t.name in bound else frozenset([t.name])
        if isinstance(t, App):
            return (frozenset() if t.func in bound else frozenset([t.func])) | term(t.arg, bound)
        if isinstance(t, (Add, Mul)):
            return term(t.left, bound) | term(t.right, bound)
        return frozenset()

    def go(g, bound):
        if isinstance(g, (Eq, Lt, Le)):
            return term(g.left, bound) | term(g.right, bound)
        if isinstance(g, In):
            return term(g.elem, bound) | (frozenset() if g.container in bound else frozenset([g.container]))
        if isinstance(g, PairIn):
            r = frozenset() if g.rel in bound else frozenset([g.rel])
            return term(g.first, bound) | term(g.second, bound) | r
        if isinstance(g, ANot):
            return go(g.arg, bound)
        if isinstance(g, ABIN):
            return go(g.left, bound) | go(g.right, bound)
        if isinstance(g, AQUANT):
            return go(g.body, bound | {g.var})
        return frozenset()

    return go(f, frozenset())
