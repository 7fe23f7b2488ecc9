"""Concrete syntax for temporal hyperproperty formulas.

Grammar, loosest binding first::

    formula  := quant | iff
    quant    := ("exists" | "forall") NAME "." formula      # extends to the right
    iff      := impl ("<->" impl)*                            # right-assoc
    impl     := or ("->" impl)?                               # right-assoc
    or       := and ("|" and)*                                # left-assoc
    and      := until ("&" until)*                            # left-assoc
    until    := unary ("U" until)?                            # right-assoc
    unary    := ("!" | "X" | "F" | "G") unary | quant | primary
    primary  := NAME "[" NAME "]" | "true" | "false" | "(" formula ")"

``X``, ``F``, ``G`` and ``U`` are operators unless directly followed by
``[``, in which case they name a proposition.
"""
from __future__ import annotations

from ..errors import BadArgument, DialectError, ParseError, QuantifierUnderTemporal
from ..formula import (
    And, Atom, Eventually, Exists, FalseF, Forall, Formula, Globally, Iff,
    Implies, Next, Not, Or, SourceSpan, TrueF, Until, check_hyperltl,
    classify_prenex, temporal_outside_quantifiers,
)
from .lexer import TokenStream, tokenize

OPERATORS = ["<->", "->", "!", "&", "|", "(", ")", "[", "]", "."]
KEYWORDS = {"exists", "forall", "true", "false"}
UNARY_WORDS = {"X": Next, "F": Eventually, "G": Globally}
DIALECTS = ("hyperltl", "hyperctlstar")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.ts = TokenStream(tokenize(text, OPERATORS), text)

    def span(self, start_tok):
        prev = self.ts.toks[self.ts.pos - 1]
        return SourceSpan(start_tok.start, prev.end)

    def parse(self) -> Formula:
        f = self.formula()
        t = self.ts.peek()
        if t.kind != "eof":
            raise ParseError(f"unexpected {t.text!r}", t.start, self.text)
        return f

    def formula(self):
        if self.ts.at("exists") or self.ts.at("forall"):
            return self.quant()
        return self.iff()

    def quant(self):
        start = self.ts.next()
        var = self.ts.expect_ident("variable name")
        if var.text in KEYWORDS:
            raise ParseError(f"keyword {var.text!r} used as variable", var.start, self.text)
        self.ts.expect(".")
        body = self.formula()
        cls = Exists if start.text == "exists" else Forall
        return cls(var.text, body, span=self.span(start))

    def iff(self):
        start = self.ts.peek()
        left = self.impl()
        if self.ts.accept("<->"):
            right = self.iff_rhs()
            return Iff(left, right, span=self.span(start))
        return left

    def iff_rhs(self):
        if self.ts.at("exists") or self.ts.at("forall"):
            return self.quant()
        return self.iff()

    def impl(self):
        start = self.ts.peek()
        left = self.or_()
        if self.ts.accept("->"):
            if self.ts.at("exists") or self.ts.at("forall"):
                right = self.quant()
            else:
                right = self.impl()
            return Implies(left, right, span=self.span(start))
        return left

    def _left_chain(self, sub, op, cls):
        start = self.ts.peek()
        left = sub()
        while self.ts.at(op):
            self.ts.next()
            if self.ts.at("exists") or self.ts.at("forall"):
                right = self.quant()
                return cls(left, right, span=self.span(start))
            right = sub()
            left = cls(left, right, span=self.span(start))
        return left

    def or_(self):
        return self._left_chain(self.and_, "|", Or)

    def and_(self):
        return self._left_chain(self.until, "&", And)

    def _is_word_op(self, word):
        return self.ts.at(word) and self.ts.peek().kind == "ident" and not self.ts.at("[", 1)

    def until(self):
        start = self.ts.peek()
        left = self.unary()
        if self._is_word_op("U"):
            self.ts.next()
            if self.ts.at("exists") or self.ts.at("forall"):
                right = self.quant()
            else:
                right = self.until()
            return Until(left, right, span=self.span(start))
        return left

    def unary(self):
        t = self.ts.peek()
        if self.ts.at("!"):
            self.ts.next()
            return Not(self.unary(), span=self.span(t))
        for word, cls in UNARY_WORDS.items():
            if self._is_word_op(word):
                self.ts.next()
                return cls(self.unary(), span=self.span(t))
        if self.ts.at("exists") or self.ts.at("forall"):
            return self.quant()
        return self.primary()

    def primary(self):
        t = self.ts.peek()
        if self.ts.accept("("):
            f = self.formula()
            self.ts.expect(")")
            return f
        if t.kind == "ident":
            if t.text == "true" and not self.ts.at("[", 1):
                self.ts.next()
                return TrueF(span=self.span(t))
            if t.text == "false" and not self.ts.at("[", 1):
                self.ts.next()
                return FalseF(span=self.span(t))
            if t.text == "U" and not self.ts.at("[", 1):
                raise ParseError("'U' needs a left operand", t.start, self.text)
            self.ts.next()
            self.ts.expect("[")
            var = self.ts.expect_ident("trace variable")
            self.ts.expect("]")
            return Atom(t.text, var.text, span=self.span(t))
        got = t.text or "end of input"
        raise ParseError(f"unexpected {got!r}", t.start, self.text)


def parse_formula(text: str, dialect: str = "hyperctlstar", prenex_only: bool = False) -> Formula:
    """Parse ``text`` and check the well-formedness rules of ``dialect``.

    ``hyperltl`` rejects quantifiers below temporal operators (so Boolean
    combinations of prenex sentences are accepted); with ``prenex_only`` the
    formula must be prenex.  ``hyperctlstar`` requires every temporal
    operator to lie inside the scope of a quantifier.
    """
    if dialect not in DIALECTS:
        raise BadArgument(f"unknown dialect {dialect!r}")
    f = _Parser(text).parse()
    check_dialect(f, dialect, prenex_only)
    return f


def check_dialect(f: Formula, dialect: str, prenex_only: bool = False) -> None:
    if dialect == "hyperltl":
        try:
            check_hyperltl(f)
        except QuantifierUnderTemporal as exc:
            raise DialectError(str(exc), _start(exc_node(f))) from exc
        if prenex_only:
            try:
                classify_prenex(f)
            except Exception as exc:
                raise DialectError("formula is not prenex", _start(f)) from exc
    else:
        bad = temporal_outside_quantifiers(f)
        if bad:
            raise DialectError(f"temporal operator outside every quantifier: {print_formula(bad[0])}",
                               _start(bad[0]))


def exc_node(f):
    from ..formula import TEMPORAL, is_quantifier_free, iter_nodes

    for g in iter_nodes(f):
        if isinstance(g, TEMPORAL) and not is_quantifier_free(g):
            return g
    return f


def _start(f):
    sp = getattr(f, "span", None)
    return sp.start if sp is not None else None


# ---------------------------------------------------------------- printing

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Until: 5}
_SYM = {Iff: "<->", Implies: "->", Or: "|", And: "&", Until: "U"}
_RIGHT_ASSOC = (Iff, Implies, Until)
_UNARY_SYM = {Not: "!", Next: "X ", Eventually: "F ", Globally: "G "}


def _prec(f):
    if isinstance(f, (Exists, Forall)):
        return 0
    if type(f) in _PREC:
        return _PREC[type(f)]
    if type(f) in _UNARY_SYM:
        return 6
    return 7


def print_formula(f: Formula) -> str:
    """Canonical text with the fewest parentheses the grammar allows.

    Quantifiers are parenthesised whenever they are not at the top of the
    formula or directly under another quantifier.
    """
    out = []

    def emit(g, ctx_top):
        if isinstance(g, (Exists, Forall)):
            word = "exists" if isinstance(g, Exists) else "forall"
            if not ctx_top:
                out.append("(")
            out.append(f"{word} {g.var}. ")
            emit(g.body, True)
            if not ctx_top:
                out.append(")")
            return
        if isinstance(g, Atom):
            out.append(f"{g.prop}[{g.var}]")
            return
        if isinstance(g, TrueF):
            out.append("true")
            return
        if isinstance(g, FalseF):
            out.append("false")
            return
        if type(g) in _UNARY_SYM:
            out.append(_UNARY_SYM[type(g)])
            child = g.arg
            wrap = _prec(child) < 6 and not isinstance(child, (Exists, Forall))
            if wrap:
                out.append("(")
            emit(child, False)
            if wrap:
                out.append(")")
            return
        p = _PREC[type(g)]
        right_assoc = isinstance(g, _RIGHT_ASSOC)
        lp, rp = _prec(g.left), _prec(g.right)
        lwrap = (lp <= p if right_assoc else lp < p) and lp != 0
        rwrap = (rp < p if right_assoc else rp <= p) and rp != 0
        _wrapped(g.left, lwrap)
        out.append(f" {_SYM[type(g)]} ")
        _wrapped(g.right, rwrap)

    def _wrapped(g, wrap):
        if wrap:
            out.append("(")
        emit(g, False)
        if wrap:
            out.append(")")

    emit(f, True)
    return "".join(out)
