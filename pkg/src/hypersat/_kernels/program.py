"""Compilation of quantifier-free formulas into flat kernel programs."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import MalformedFormula
from ..formula import (
    And, Atom, Eventually, FalseF, Globally, Iff, Implies, Next, Not, Or,
    TrueF, Until, subformulas,
)

OP_ATOM, OP_TRUE, OP_FALSE, OP_NOT, OP_OR, OP_AND = 0, 1, 2, 3, 4, 5
OP_IMPLIES, OP_IFF, OP_NEXT, OP_UNTIL, OP_F, OP_G = 6, 7, 8, 9, 10, 11

_OPCODE = {
    TrueF: OP_TRUE, FalseF: OP_FALSE, Not: OP_NOT, Or: OP_OR, And: OP_AND,
    Implies: OP_IMPLIES, Iff: OP_IFF, Next: OP_NEXT, Until: OP_UNTIL,
    Eventually: OP_F, Globally: OP_G,
}


@dataclass(frozen=True)
class Program:
    nodes: tuple  # subformulas, children first
    op: np.ndarray
    a: np.ndarray
    b: np.ndarray
    slot: np.ndarray
    bit: np.ndarray
    slots: tuple  # trace variables, in slot order
    alphabet: tuple

    def index(self, f) -> int:
        return self._index[f]

    @property
    def root(self) -> int:
        return len(self.nodes) - 1


def compile_program(f, slots, alphabet) -> Program:
    """Flatten ``f`` into arrays; atoms over unknown propositions read as false."""
    nodes = subformulas(f)
    index = {g: i for i, g in enumerate(nodes)}
    slot_of = {v: i for i, v in enumerate(slots)}
    bit_of = {p: i for i, p in enumerate(alphabet)}
    if len(alphabet) > 64:
        raise MalformedFormula("at most 64 propositions are supported")
    n = len(nodes)
    op = np.zeros(n, dtype=np.int8)
    a = np.full(n, -1, dtype=np.int32)
    b = np.full(n, -1, dtype=np.int32)
    slot = np.full(n, -1, dtype=np.int32)
    bit = np.full(n, -1, dtype=np.int32)
    for i, g in enumerate(nodes):
        if isinstance(g, Atom):
            if g.var not in slot_of:
                raise MalformedFormula(f"variable {g.var!r} has no slot")
            if g.prop in bit_of:
                op[i] = OP_ATOM
                slot[i] = slot_of[g.var]
                bit[i] = bit_of[g.prop]
            else:
                op[i] = OP_FALSE
            continue
        code = _OPCODE.get(type(g))
        if code is None:
            raise MalformedFormula(f"quantifier inside a kernel program: {g}")
        op[i] = code
        kids = g.children()
        if kids:
            a[i] = index[kids[0]]
        if len(kids) > 1:
            b[i] = index[kids[1]]
    prog = Program(tuple(nodes), op, a, b, slot, bit, tuple(slots), tuple(alphabet))
    object.__setattr__(prog, "_index", index)
    return prog
