"""Translations between arithmetic and HyperCTL*.

:func:`translate_e3a` maps an existential third-order sentence (or a
second-order sentence, for the finitely-branching variant) to a HyperCTL*
sentence that is satisfiable iff the arithmetic sentence is true.  Numbers
and sets become path variables ``p_<name>``; the paths carry their
characteristic sequence in ``b0``/``b1`` from the second vertex on.

:func:`translate_hyperctl_to_soa` goes the other way: it states in
second-order arithmetic that some transition system on the natural numbers
(edges ``E``, labelling ``lam``, initial vertex 0) satisfies the sentence.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..errors import ResourceLimit, SortError, UnsupportedShape
from ..formula import (
    FALSE, TRUE, And, Atom, Eventually, Exists, FalseF, Forall, Formula,
    Globally, Iff, Implies, Next, Not, Or, TrueF, Until, conj, disj,
    is_quantifier_free, props,
)
from ..kripke import check_hyperctlstar
from .ast import (
    AAnd, AExists, AFalse, AForall, AIff, AImplies, ANot, AOr, ATrue, Add,
    App, Eq, In, Le, Lt, Mul, Num, PairIn, Var, aconj, adisj, sort_check,
)
from .ops import ADD, ARGL, ARGR, MULT, RES, phi_op_cl_conjuncts, phi_op_conjuncts
from .structures import B0, B1, FBT, PSET, gen_phi_set

OP_PROPS = (ADD, MULT, ARGL, ARGR, RES)


@dataclass(frozen=True)
class TranslationResult:
    """``sentence`` is ``phi0 & body``; ``families`` lists the set-of-sets
    variables in the order of their propositions ``a1, a2, ...``."""

    phi0: Formula
    body: Formula
    sentence: Formula
    families: tuple


def _none(names, v):
    return conj(Not(Atom(a, v)) for a in names) if names else TRUE


def _relativize_ops(f):
    """Restrict quantifiers to paths entering the operation part and read
    the quantifier-free matrix one step later."""
    guard = lambda v: Next(Or(Atom(ADD, v), Atom(MULT, v)))
    if is_quantifier_free(f):
        return Next(f)
    if isinstance(f, Forall):
        return Forall(f.var, Implies(guard(f.var), _relativize_ops(f.body)))
    if isinstance(f, Exists):
        return Exists(f.var, And(guard(f.var), _relativize_ops(f.body)))
    if isinstance(f, Not):
        return Not(_relativize_ops(f.arg))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(_relativize_ops(f.left), _relativize_ops(f.right))
    raise UnsupportedShape(f"cannot relativize {f}")


def family_consistency(families) -> Formula:
    """Paths with the same bits carry the same family propositions."""
    p, q = "p", "q"
    same = Globally(conj(Atom(PSET, p), Atom(PSET, q), Iff(Atom(B1, p), Atom(B1, q))))
    agree = conj(Iff(Atom(a, p), Atom(a, q)) for a in families) if families else TRUE
    return Forall(p, Forall(q, Next(Implies(same, agree))))


def gen_phi0(n_families: int) -> Formula:
    """Side conditions for the third-order translation.

    The initial vertex is labelled ``{fbt}``.  Each successor starts one of
    three parts: the ``fbt`` tree, the ``pset`` chains (family propositions
    only on their first vertex) or the operation part (whose traces form the
    operation set).  The ``fbt`` and ``pset`` parts obey the set-structure
    conjuncts 2 to 5, and equal chains agree on families.
    """
    fam = [f"a{i + 1}" for i in range(n_families)]
    p = "p"
    a = lambda x: Atom(x, p)
    init = Forall(p, conj(a(FBT), Not(a(B0)), Not(a(B1)), Not(a(PSET)), _none(OP_PROPS, p), _none(fam, p)))
    parts = Forall(p, Next(disj(a(FBT), a(PSET), a(ADD), a(MULT))))
    bit = Iff(a(B0), Not(a(B1)))
    tree = Forall(p, Implies(Next(a(FBT)), Next(Globally(conj(a(FBT), Not(a(PSET)), bit, _none(OP_PROPS, p), _none(fam, p))))))
    chains = Forall(p, Implies(Next(a(PSET)), And(
        Next(Globally(conj(a(PSET), Not(a(FBT)), bit, _none(OP_PROPS, p)))),
        Next(Next(Globally(_none(fam, p)))),
    )))
    ops = Forall(p, Implies(Next(Or(a(ADD), a(MULT))), Next(Globally(conj(
        Not(a(FBT)), Not(a(PSET)), Not(a(B0)), Not(a(B1)), _none(fam, p))))))
    set_part = gen_phi_set()[1:]
    op_part = [_relativize_ops(c) for c in phi_op_conjuncts()]
    return conj([init, parts, tree, chains, ops] + set_part + [family_consistency(fam)] + op_part)


def gen_phi0_fb() -> Formula:
    """Side conditions for the finitely-branching variant.

    The initial vertex is unlabelled; its successors start either the
    ``fbt`` part (every vertex has a 0-successor and a 1-successor) or the
    operation part, whose traces form the closure of the operation set.
    """
    p, p0, p1 = "p", "p0", "p1"
    a = lambda x, v=p: Atom(x, v)
    kids = And(Exists(p0, Next(And(a(FBT, p0), a(B0, p0)))), Exists(p1, Next(And(a(FBT, p1), a(B1, p1)))))
    init = Forall(p, conj(Not(a(FBT)), Not(a(B0)), Not(a(B1)), _none(OP_PROPS, p)))
    parts = Forall(p, Next(disj(a(FBT), a(ADD), a(MULT))))
    tree = Forall(p, Implies(Next(a(FBT)), Next(Globally(conj(a(FBT), Iff(a(B0), Not(a(B1))), _none(OP_PROPS, p))))))
    branching = Forall(p, Next(Globally(Implies(a(FBT), kids))))
    ops = Forall(p, Implies(Next(Or(a(ADD), a(MULT))), Next(Globally(conj(Not(a(FBT)), Not(a(B0)), Not(a(B1)))))))
    op_part = [_relativize_ops(c) for c in phi_op_cl_conjuncts()]
    return conj([init, parts, tree, kids, branching, ops] + op_part)


class _Names:
    def __init__(self, taken=()):
        self.taken = set(taken)
        self.count = 0

    def fresh(self, base):
        while True:
            self.count += 1
            name = f"{base}{self.count}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def _split_families(f, variant):
    families = []
    while isinstance(f, AExists) and f.sort == "setset":
        families.append(f.var)
        f = f.body
    if variant == "second_order_fb" and families:
        raise UnsupportedShape("the finitely-branching variant takes no set-of-sets variables")
    return tuple(families), f


def translate_e3a(phi, variant: str = "third_order") -> TranslationResult:
    if variant not in ("third_order", "second_order_fb"):
        raise UnsupportedShape(f"unknown variant {variant!r}")
    sort_check(phi)
    families, body = _split_families(phi, variant)
    fam_prop = {x: f"a{i + 1}" for i, x in enumerate(families)}
    region = PSET if variant == "third_order" else FBT
    names = _Names()
    env = {x: "setset" for x in families}

    def pv(x):
        return f"p_{x}"

    def singleton(v):
        return Next(Until(Atom(B0, v), And(Atom(B1, v), Next(Globally(Atom(B0, v))))))

    def var(t):
        if not isinstance(t, Var):
            raise UnsupportedShape(f"only variables may appear in atoms, found {t}")
        if env.get(t.name) != "num":
            raise SortError(f"{t.name!r} is not a number variable")
        return pv(t.name)

    def op_atom(kind, x, y, z):
        q = names.fresh("o")
        return Exists(q, conj(
            Next(Atom(kind, q)),
            Eventually(And(Atom(ARGL, q), Atom(B1, x))),
            Eventually(And(Atom(ARGR, q), Atom(B1, y))),
            Eventually(And(Atom(RES, q), Atom(B1, z))),
        ))

    def go(g):
        if isinstance(g, ATrue):
            return TRUE
        if isinstance(g, AFalse):
            return FALSE
        if isinstance(g, ANot):
            return Not(go(g.arg))
        if isinstance(g, AOr):
            return Or(go(g.left), go(g.right))
        if isinstance(g, AAnd):
            return And(go(g.left), go(g.right))
        if isinstance(g, AImplies):
            return Implies(go(g.left), go(g.right))
        if isinstance(g, AIff):
            return Iff(go(g.left), go(g.right))
        if isinstance(g, (AExists, AForall)):
            if g.sort not in ("num", "set"):
                raise UnsupportedShape(f"{g.sort} quantifier inside the body")
            old = env.get(g.var)
            env[g.var] = g.sort
            v = pv(g.var)
            guard = Next(Atom(region, v))
            if g.sort == "num":
                guard = And(guard, singleton(v))
            inner = go(g.body)
            if old is None:
                del env[g.var]
            else:
                env[g.var] = old
            if isinstance(g, AExists):
                return Exists(v, And(guard, inner))
            return Forall(v, Implies(guard, inner))
        if isinstance(g, In):
            if isinstance(g.elem, Var) and env.get(g.elem.name) == "set":
                if g.container not in fam_prop:
                    raise SortError(f"{g.container!r} is not a set-of-sets variable")
                return Next(Atom(fam_prop[g.container], pv(g.elem.name)))
            if env.get(g.container) != "set":
                raise SortError(f"{g.container!r} is not a set variable")
            return Eventually(And(Atom(B1, var(g.elem)), Atom(B1, pv(g.container))))
        if isinstance(g, Lt):
            return Eventually(And(Atom(B1, var(g.left)), Next(Eventually(Atom(B1, var(g.right))))))
        if isinstance(g, Le):
            return Not(go(Lt(g.right, g.left)))
        if isinstance(g, Eq):
            if isinstance(g.left, (Add, Mul)):
                kind = ADD if isinstance(g.left, Add) else MULT
                return op_atom(kind, var(g.left.left), var(g.left.right), var(g.right))
            if isinstance(g.right, (Add, Mul)):
                return go(Eq(g.right, g.left))
            return Eventually(And(Atom(B1, var(g.left)), Atom(B1, var(g.right))))
        raise UnsupportedShape(f"no translation for {g}")

    body_f = go(body)
    phi0 = gen_phi0(len(families)) if variant == "third_order" else gen_phi0_fb()
    check_hyperctlstar(body_f)
    return TranslationResult(phi0, body_f, And(phi0, body_f), families)


# ------------------------------------------------------------ to arithmetic

MAX_SOA_PROPS = 10


def valuation_code(letter, aps) -> int:
    """Valuation as a number: bit ``k`` is set iff the ``k``-th proposition
    of the sorted list holds."""
    return sum(1 << k for k, a in enumerate(aps) if a in letter)


def path_formula(f: str, E: str = "E", n: str = "n") -> "AFormula":
    return AForall(n, "num", PairIn(App(f, Var(n)), App(f, Add(Var(n), Num(1))), E))


def branch_formula(f: str, g: str, i, E: str = "E", j: str = "j") -> "AFormula":
    same = AForall(j, "num", AImplies(Le(Var(j), i), Eq(App(f, Var(j)), App(g, Var(j)))))
    return aconj(path_formula(f, E), path_formula(g, E), same)


def translate_hyperctl_to_soa(phi: Formula, variant: str = "countable"):
    if variant not in ("countable", "finitely_branching"):
        raise UnsupportedShape(f"unknown variant {variant!r}")
    check_hyperctlstar(phi)
    aps = tuple(sorted(props(phi)))
    if len(aps) > MAX_SOA_PROPS:
        raise ResourceLimit(f"{len(aps)} propositions give too many valuations")
    letters = [frozenset(c) for r in range(len(aps) + 1) for c in itertools.combinations(aps, r)]
    names = _Names({"E", "lam"})

    def go(g, order, fmap, i):
        if isinstance(g, TrueF):
            return ATrue()
        if isinstance(g, FalseF):
            return AFalse()
        if isinstance(g, Atom):
            f = fmap[g.var]
            return adisj(Eq(App("lam", App(f, i)), Num(valuation_code(v, aps))) for v in letters if g.prop in v)
        if isinstance(g, Not):
            return ANot(go(g.arg, order, fmap, i))
        if isinstance(g, (Or, And, Implies, Iff)):
            ctor = {Or: AOr, And: AAnd, Implies: AImplies, Iff: AIff}[type(g)]
            return ctor(go(g.left, order, fmap, i), go(g.right, order, fmap, i))
        if isinstance(g, Next):
            return go(g.arg, order, fmap, Add(i, Num(1)))
        if isinstance(g, Until):
            j, k = names.fresh("j"), names.fresh("k")
            before = AForall(k, "num", AImplies(AAnd(Le(i, Var(k)), Lt(Var(k), Var(j))), go(g.left, order, fmap, Var(k))))
            return AExists(j, "num", aconj(Le(i, Var(j)), go(g.right, order, fmap, Var(j)), before))
        if isinstance(g, Eventually):
            j = names.fresh("j")
            return AExists(j, "num", AAnd(Le(i, Var(j)), go(g.arg, order, fmap, Var(j))))
        if isinstance(g, Globally):
            j = names.fresh("j")
            return AForall(j, "num", AImplies(Le(i, Var(j)), go(g.arg, order, fmap, Var(j))))
        if isinstance(g, (Exists, Forall)):
            f = names.fresh(f"f_{g.var}_") if g.var in fmap or f"f_{g.var}" in names.taken else f"f_{g.var}"
            names.taken.add(f)
            new_order = tuple(v for v in order if v != g.var) + (g.var,)
            new_map = {**fmap, g.var: f}
            if not order:
                cond = AAnd(path_formula(f, n=names.fresh("n")), Eq(App(f, Num(0)), Num(0)))
                inner = go(g.body, new_order, new_map, Num(0))
            else:
                cond = branch_formula(f, fmap[order[-1]], i, j=names.fresh("j"))
                inner = go(g.body, new_order, new_map, i)
            if isinstance(g, Exists):
                return AExists(f, "func", AAnd(cond, inner))
            return AForall(f, "func", AImplies(cond, inner))
        raise UnsupportedShape(f"no translation for {g}")

    body = go(phi, (), {}, Num(0))
    x, y, z = names.fresh("x"), names.fresh("y"), names.fresh("z")
    serial = AForall(x, "num", AExists(y, "num", PairIn(Var(x), Var(y), "E")))
    bounded = AForall(x, "num", AExists(y, "num", AForall(z, "num", AImplies(PairIn(Var(x), Var(z), "E"), Lt(Var(z), Var(y))))))
    labels = AForall(x, "num", Lt(App("lam", Var(x)), Num(2 ** len(aps))))
    parts = [serial, bounded, labels, body] if variant == "finitely_branching" else [serial, labels, body]
    return AExists("E", "rel", AExists("lam", "func", aconj(parts)))
