"""Traces that encode one addition or multiplication fact.

A trace over ``add, mult, argl, argr, res`` encodes ``n1 + n2 = n3`` (or
``n1 * n2 = n3``) when ``add`` (or ``mult``) holds everywhere and ``argl``,
``argr`` and ``res`` each hold exactly once, at positions ``n1``, ``n2`` and
``n3``.  The set of these traces is called the operation set below; its
topological closure (all traces whose every prefix extends to a member)
additionally contains traces where an argument never appears.

Membership oracles:

* :func:`t_op_member` checks the arithmetic fact directly;
* :func:`is_op_prefix` decides whether a finite word extends to a member;
* :func:`cl_top_member` checks every prefix up to a length after which
  nothing can change;
* :func:`d_member` checks the direct description of closure-minus-members.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import AlphabetMismatch
from ..formula import (
    And, Atom, Eventually, Exists, Forall, Globally, Iff, Implies, Next, Not,
    Or, Until, conj, disj,
)
from ..traces import UPTrace

ADD, MULT, ARGL, ARGR, RES = "add", "mult", "argl", "argr", "res"
OP_ALPHABET = (ADD, ARGL, ARGR, MULT, RES)
MARKS = (ARGL, ARGR, RES)


def _check_alphabet(t: UPTrace):
    extra = t.props() - set(OP_ALPHABET)
    if extra:
        raise AlphabetMismatch(f"unexpected propositions {sorted(extra)}")


@dataclass(frozen=True)
class OpTraceView:
    """Decoded operation trace; positions are ``None`` when absent.

    ``valid`` is False when the mode is not constant or a mark occurs more
    than once (in which case the positions are meaningless).
    """

    mode: str | None
    argl: int | None
    argr: int | None
    res: int | None
    valid: bool

    @staticmethod
    def decode(t: UPTrace) -> "OpTraceView":
        _check_alphabet(t)
        letters = t.stem + t.loop
        mode = None
        if all(ADD in x and MULT not in x for x in letters):
            mode = ADD
        elif all(MULT in x and ADD not in x for x in letters):
            mode = MULT
        pos, valid = {}, mode is not None
        for a in MARKS:
            if any(a in x for x in t.loop):
                valid = False  # infinitely many occurrences
                pos[a] = None
                continue
            hits = [i for i, x in enumerate(t.stem) if a in x]
            if len(hits) > 1:
                valid = False
            pos[a] = hits[0] if hits else None
        return OpTraceView(mode, pos[ARGL], pos[ARGR], pos[RES], valid)

    def apply(self, n1, n2):
        return n1 + n2 if self.mode == ADD else n1 * n2


def op_trace(mode: str, n1: int | None, n2: int | None, n3: int | None) -> UPTrace:
    """Trace with the given mode and marks (``None`` leaves a mark out)."""
    marks = {ARGL: n1, ARGR: n2, RES: n3}
    top = max([n for n in marks.values() if n is not None], default=-1)
    stem = []
    for i in range(top + 1):
        stem.append(frozenset([mode] + [a for a, n in marks.items() if n == i]))
    return UPTrace(tuple(stem), (frozenset([mode]),))


def t_op_member(t: UPTrace) -> bool:
    v = OpTraceView.decode(t)
    if not v.valid or None in (v.argl, v.argr, v.res):
        return False
    return v.apply(v.argl, v.argr) == v.res


def is_op_prefix(word) -> bool:
    """Does the finite word extend to some trace of the operation set?"""
    word = [frozenset(x) for x in word]
    L = len(word)
    if any(x - set(OP_ALPHABET) for x in word):
        return False
    modes = {m for m in (ADD, MULT) if all(m in x and ({ADD, MULT} - {m}).isdisjoint(x) for x in word)}
    if L == 0:
        return True
    if not modes:
        return False
    (mode,) = modes
    seen = {}
    for a in MARKS:
        hits = [i for i, x in enumerate(word) if a in x]
        if len(hits) > 1:
            return False
        seen[a] = hits[0] if hits else None
    # an unseen argument lies at L or later; L and L + 1 cover all cases
    c1 = [seen[ARGL]] if seen[ARGL] is not None else [L, L + 1]
    c2 = [seen[ARGR]] if seen[ARGR] is not None else [L, L + 1]
    for n1 in c1:
        for n2 in c2:
            n3 = n1 + n2 if mode == ADD else n1 * n2
            if seen[RES] is not None and n3 == seen[RES]:
                return True
            if seen[RES] is None and n3 >= L:
                return True
    return False


def cl_top_member(t: UPTrace) -> bool:
    """Every prefix of ``t`` extends to a member of the operation set.

    Beyond the point where all marks (if any) have been seen and the largest
    possible result has been passed, longer prefixes are decided the same
    way, so a finite check suffices.
    """
    _check_alphabet(t)
    n = t.stem_len + t.period
    horizon = n * n + 2 * n + 2
    return all(is_op_prefix(t.prefix(k)) for k in range(horizon + 1))


def d_member(t: UPTrace, literal: bool = False) -> bool:
    """Direct description of closure traces that are not members.

    The four listed clauses are: marks at most once, constant mode, some
    argument missing, and a result only at position 0 of a multiplication
    trace with an argument there.  With ``literal=False`` (the default) one
    more clause is enforced: a multiplication trace with an argument at
    position 0 must carry ``res`` at position 0, because ``0 * n = 0``.
    Without it the description admits ``{mult, argl}{mult}^omega``, whose
    first letter extends to no member.
    """
    v = OpTraceView.decode(t)
    if not v.valid:
        return False
    if v.argl is not None and v.argr is not None:
        return False
    if v.res is not None:
        if not (v.mode == MULT and v.res == 0 and (v.argl == 0 or v.argr == 0)):
            return False
    if not literal and v.mode == MULT and (v.argl == 0 or v.argr == 0) and v.res != 0:
        return False
    return True


# ---------------------------------------------------------------- sentences

def _a(p, v):
    return Atom(p, v)


def _once(a, v):
    return Until(Not(_a(a, v)), And(_a(a, v), Next(Globally(Not(_a(a, v))))))


def _mode_exclusive(v):
    return Or(Globally(And(_a(ADD, v), Not(_a(MULT, v)))), Globally(And(_a(MULT, v), Not(_a(ADD, v)))))


def _zero_args():
    return conj(Exists("p", conj(_a(m, "p"), _a(ARGL, "p"), _a(ARGR, "p"))) for m in (ADD, MULT))


def _step_body():
    p, p1, p2 = "p", "p1", "p2"
    return conj(
        Iff(_a(ADD, p), _a(ADD, p1)),
        Iff(_a(ADD, p), _a(ADD, p2)),
        Eventually(And(_a(ARGL, p), Next(_a(ARGL, p1)))),
        Eventually(And(_a(ARGR, p), _a(ARGR, p1))),
        Eventually(And(_a(ARGL, p), _a(ARGL, p2))),
        Eventually(And(_a(ARGR, p), Next(_a(ARGR, p2)))),
    )


def _add_step_rhs():
    p, q = "p", "q"
    return conj(
        _a(ADD, q),
        Eventually(And(Next(_a(ARGL, p)), _a(ARGL, q))),
        Eventually(And(_a(ARGR, p), _a(ARGR, q))),
        Eventually(And(Next(_a(RES, p)), _a(RES, q))),
    )


def _mult_step_rhs():
    p, q, r = "p", "q", "r"
    return conj(
        _a(MULT, q),
        _a(ADD, r),
        Eventually(And(Next(_a(ARGL, p)), _a(ARGL, q))),
        Eventually(conj(_a(ARGR, p), _a(ARGR, q), _a(ARGR, r))),
        Eventually(And(_a(RES, q), _a(ARGL, r))),
        Eventually(And(_a(RES, p), _a(RES, r))),
    )


def _guard(v):
    return And(Eventually(_a(ARGL, v)), Eventually(_a(ARGR, v)))


def phi_op_conjuncts() -> list:
    """The eight sentences whose conjunction has the operation set as its only model."""
    p = "p"
    return [
        Forall(p, conj(_once(a, p) for a in MARKS)),
        Forall(p, _mode_exclusive(p)),
        _zero_args(),
        Forall(p, Exists("p1", Exists("p2", _step_body()))),
        Forall(p, Implies(And(_a(ADD, p), _a(ARGL, p)), Eventually(And(_a(ARGR, p), _a(RES, p))))),
        Forall(p, Exists("q", Implies(And(_a(ADD, p), Not(_a(ARGL, p))), _add_step_rhs()))),
        Forall(p, Implies(And(_a(MULT, p), _a(ARGL, p)), _a(RES, p))),
        Forall(p, Exists("q", Exists("r", Implies(And(_a(MULT, p), Not(_a(ARGL, p))), _mult_step_rhs())))),
    ]


def gen_phi_op():
    return conj(phi_op_conjuncts())


def phi_op_cl_conjuncts(corrected: bool = False) -> list:
    """The ten sentences for the closure of the operation set.

    ``corrected=True`` appends ``forall p. (mult & argr) -> res``.  The ten
    sentences alone also accept ``{mult, argr}{mult}^omega``, which is not
    in the closure.
    """
    p = "p"
    out = [
        Forall(p, conj(Or(Globally(Not(_a(a, p))), _once(a, p)) for a in MARKS)),
        Forall(p, Implies(_guard(p), Eventually(_a(RES, p)))),
        Forall(p, _mode_exclusive(p)),
        Forall(p, Implies(
            And(Eventually(_a(RES, p)), disj(Globally(Not(_a(a, p))) for a in (ARGL, ARGR))),
            conj(_a(MULT, p), _a(RES, p), disj(_a(a, p) for a in (ARGL, ARGR))),
        )),
        _zero_args(),
        Forall(p, Implies(_guard(p), Exists("p1", Exists("p2", _step_body())))),
        Forall(p, Implies(conj(_guard(p), _a(ADD, p), _a(ARGL, p)), Eventually(And(_a(ARGR, p), _a(RES, p))))),
        Forall(p, Exists("q", Implies(conj(_guard(p), _a(ADD, p), Not(_a(ARGL, p))), _add_step_rhs()))),
        Forall(p, Implies(And(_a(MULT, p), _a(ARGL, p)), _a(RES, p))),
        Forall(p, Exists("q", Exists("r", Implies(conj(_guard(p), _a(MULT, p), Not(_a(ARGL, p))), _mult_step_rhs())))),
    ]
    if corrected:
        out.append(Forall(p, Implies(And(_a(MULT, p), _a(ARGR, p)), _a(RES, p))))
    return out


def gen_phi_op_cl(corrected: bool = False):
    return conj(phi_op_cl_conjuncts(corrected))


# per-trace conjuncts (single universal quantifier, no nested quantifier)
PHI_OP_PER_TRACE = (0, 1)
PHI_OP_CL_PER_TRACE = (0, 1, 2, 3)


def op_traces(max_arg: int, modes=(ADD, MULT)) -> list:
    """All members with both arguments at most ``max_arg``."""
    out = []
    for m in modes:
        for n1 in range(max_arg + 1):
            for n2 in range(max_arg + 1):
                out.append(op_trace(m, n1, n2, n1 + n2 if m == ADD else n1 * n2))
    return out
