"""Finite model-checking game for HyperCTL* and its solution by backward induction.

A vertex is ``(assignment, subformula, flip)`` or, for an until, the
auxiliary ``(assignment, until, flip, j)``.  The flip bit records whether the
players have swapped roles an odd number of times.  The game graph is a
finite DAG: every move either shrinks the subformula or goes from an until
vertex to one of its auxiliary vertices.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NotASentence
from .formula import (
    Atom, Exists, FalseF, Forall, Formula, Next, Not, Or, TrueF, Until,
    desugar, free_vars, height,
)
from .kripke import PathAssignment, PathUniverse, TransitionSystem, check_hyperctlstar, check_universe

VERIFIER, FALSIFIER = "verifier", "falsifier"


@dataclass(frozen=True)
class GameVertex:
    assignment: PathAssignment
    formula: Formula
    flip: int
    j: int | None = None  # set on auxiliary until vertices


@dataclass
class Game:
    system: TransitionSystem
    universe: PathUniverse
    formula: Formula  # desugared
    vertices: list = field(default_factory=list)
    owner: list = field(default_factory=list)
    succ: list = field(default_factory=list)
    terminal_winner: dict = field(default_factory=dict)  # id -> winner at terminals
    initial: int = 0

    def __len__(self):
        return len(self.vertices)

    def edges(self):
        return [(u, w) for u, ws in enumerate(self.succ) for w in ws]

    def longest_play(self) -> int:
        """Number of vertices on the longest play from the initial vertex."""
        memo = {}
        order = _postorder(self)
        for v in order:
            memo[v] = 1 + max((memo[w] for w in self.succ[v]), default=0)
        return memo[self.initial]


@dataclass
class GameSolution:
    winner: list  # per vertex
    strategy: dict  # verifier vertex -> chosen successor
    counter_strategy: dict  # falsifier vertex -> chosen successor

    def verifier_wins(self, v: int = 0) -> bool:
        return self.winner[v] == VERIFIER


def _owner(g: Formula, b: int, aux: bool) -> str:
    if aux:  # auxiliary until vertex: the opponent of the one who picked j
        return FALSIFIER if b == 0 else VERIFIER
    if isinstance(g, (Or, Until, Exists)):
        return VERIFIER if b == 0 else FALSIFIER
    if isinstance(g, Forall):
        return VERIFIER if b == 1 else FALSIFIER
    return VERIFIER  # single-successor or terminal vertices


def build_game(f: Formula, K: TransitionSystem, U: PathUniverse,
               assignment: PathAssignment | None = None) -> Game:
    """Explicit game graph reachable from ``(assignment, f, 0)``."""
    check_hyperctlstar(f)
    check_universe(K, U)
    assignment = assignment or PathAssignment()
    if free_vars(f) - set(assignment.vars):
        raise NotASentence("formula has free variables without a path")
    core = desugar(f)
    game = Game(K, U, core)
    index = {}

    def vid(vx: GameVertex) -> int:
        key = (vx.assignment, id(vx.formula), vx.flip, vx.j)
        i = index.get(key)
        if i is None:
            i = len(game.vertices)
            index[key] = i
            game.vertices.append(vx)
            game.owner.append(_owner(vx.formula, vx.flip, vx.j is not None))
            game.succ.append(None)
            todo.append(i)
        return i

    todo = []
    vid(GameVertex(assignment, core, 0))
    while todo:
        i = todo.pop()
        vx = game.vertices[i]
        P, g, b = vx.assignment, vx.formula, vx.flip
        out = []
        if vx.j is not None:
            out.append(vid(GameVertex(P.shifted(vx.j), g.right, b)))
            out.extend(vid(GameVertex(P.shifted(k), g.left, b)) for k in range(vx.j))
        elif isinstance(g, Atom):
            holds = g.prop in K.labels[P.get(g.var).first]
            game.terminal_winner[i] = VERIFIER if holds == (b == 0) else FALSIFIER
        elif isinstance(g, (TrueF, FalseF)):
            holds = isinstance(g, TrueF)
            game.terminal_winner[i] = VERIFIER if holds == (b == 0) else FALSIFIER
        elif isinstance(g, Not):
            out.append(vid(GameVertex(P, g.arg, 1 - b)))
        elif isinstance(g, Or):
            out.append(vid(GameVertex(P, g.left, b)))
            out.append(vid(GameVertex(P, g.right, b)))
        elif isinstance(g, Next):
            out.append(vid(GameVertex(P.shifted(1), g.arg, b)))
        elif isinstance(g, Until):
            S, Pd = P.shape()
            # one period beyond the first repetition of the joint lasso
            out.extend(vid(GameVertex(P, g, b, j)) for j in range(S + 2 * Pd))
        elif isinstance(g, (Exists, Forall)):
            for p in U.starting_at(P.rcnt(K)):
                out.append(vid(GameVertex(P.bind(g.var, p), g.body, b)))
        else:  # pragma: no cover
            raise ValueError(f"unexpected node in desugared formula: {g!r}")
        game.succ[i] = tuple(out)
    return game


def _postorder(game: Game) -> list:
    order, state = [], {}
    stack = [(game.initial, 0)]
    while stack:
        v, k = stack.pop()
        if k == 0:
            if v in state:
                continue
            state[v] = 1
        succ = game.succ[v]
        if k < len(succ):
            stack.append((v, k + 1))
            w = succ[k]
            if w not in state:
                stack.append((w, 0))
        else:
            order.append(v)
    return order


def solve_game(game: Game) -> GameSolution:
    """Backward induction; a player without moves loses."""
    n = len(game.vertices)
    winner = [None] * n
    strategy, counter = {}, {}
    for v in _postorder(game):
        if v in game.terminal_winner:
            winner[v] = game.terminal_winner[v]
            continue
        me = game.owner[v]
        other = FALSIFIER if me == VERIFIER else VERIFIER
        succ = game.succ[v]
        good = [w for w in succ if winner[w] == me]
        winner[v] = me if good else other
        if succ:
            choice = good[0] if good else succ[0]
            (strategy if me == VERIFIER else counter)[v] = choice
    return GameSolution(winner, strategy, counter)


def model_check_game(f: Formula, K: TransitionSystem, U: PathUniverse) -> bool:
    return solve_game(build_game(f, K, U)).verifier_wins(0)


def play_length_bound(f: Formula) -> int:
    """Upper bound ``2 * height`` on the number of vertices of any play."""
    return 2 * height(desugar(f))


def export_game(game: Game, solution: GameSolution | None = None) -> str:
    from .syntax.interchange import write_records
    from .syntax.temporal import print_formula

    recs = []
    for i, vx in enumerate(game.vertices):
        r = {
            "kind": "vertex",
            "id": i,
            "owner": game.owner[i],
            "formula": print_formula(vx.formula),
            "flip": vx.flip,
            "assignment": [[v, str(p)] for v, p in vx.assignment.items],
        }
        if vx.j is not None:
            r["j"] = vx.j
        if i in game.terminal_winner:
            r["terminal_winner"] = game.terminal_winner[i]
        if solution is not None:
            r["winner"] = solution.winner[i]
        recs.append(r)
    for u, w in game.edges():
        recs.append({"kind": "edge", "from": u, "to": w})
    return write_records("game", recs, {"initial": game.initial})
