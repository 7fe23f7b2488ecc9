"""Tile sets, brute-force tiling search, and the tiling-to-HyperLTL generators.

Proposition names: tile number ``k`` is ``t<k>``, the column marker is ``x``
and the padding tile of the diagonal variant is ``null``.

Mapping of the diagonal variant's changes to the conjuncts produced by
:func:`gen_diagonal_formula`:

==========================================  ======================================
change                                      conjunct
==========================================  ======================================
null after the marker                       ``null_after_x``
(null never holds at or before the marker)
matching only at or before the marker       ``vertical_before_x``, ``horizontal_before_x``
designated tile somewhere in each row       ``designated_each_row``
==========================================  ======================================

The remaining conjuncts (uniqueness of the marker, completeness of columns,
same column means same tiles, exactly one tile per point) are carried over,
with ``null`` counted as a tile.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import BadArgument, InvalidTileSet, ResourceLimit
from .formula import (
    TRUE, And, Atom, Eventually, Exists, Forall, Globally, Iff, Implies, Next,
    Not, Until, conj, disj, next_n,
)

X_PROP = "x"
NULL_PROP = "null"


@dataclass(frozen=True)
class Tile:
    east: object
    west: object
    north: object
    south: object


@dataclass(frozen=True)
class TileSet:
    colors: tuple
    tiles: tuple
    designated: int = 0

    def __post_init__(self):
        if not self.tiles:
            raise InvalidTileSet("tile set is empty")
        if len(set(self.tiles)) != len(self.tiles):
            raise InvalidTileSet("tiles must be distinct")
        if not (isinstance(self.designated, int) and 0 <= self.designated < len(self.tiles)):
            raise InvalidTileSet(f"designated index {self.designated!r} out of range")
        palette = set(self.colors)
        for k, t in enumerate(self.tiles):
            for side in (t.east, t.west, t.north, t.south):
                if side not in palette:
                    raise InvalidTileSet(f"tile {k} uses color {side!r} outside the palette")

    def prop(self, k: int) -> str:
        return f"t{k}"

    @property
    def props(self) -> tuple:
        return tuple(self.prop(k) for k in range(len(self.tiles)))

    def horizontal_ok(self, left: int, right: int) -> bool:
        return self.tiles[left].east == self.tiles[right].west

    def vertical_ok(self, below: int, above: int) -> bool:
        return self.tiles[below].north == self.tiles[above].south


def constant_tileset(color="c") -> TileSet:
    return TileSet((color,), (Tile(color, color, color, color),), 0)


# ---------------------------------------------------------------- formulas

def _a(p, v):
    return Atom(p, v)


def _exactly_one(props_, v):
    return disj(And(_a(p, v), conj(Not(_a(q, v)) for q in props_ if q != p)) for p in props_)


def quadrant_conjuncts(ts: TileSet) -> list:
    """The seven conjuncts of the quadrant reduction, in order."""
    x = X_PROP
    tp = ts.props
    t0 = ts.prop(ts.designated)
    n = len(ts.tiles)
    phi1 = Forall("p", Until(Not(_a(x, "p")), And(_a(x, "p"), Next(Globally(Not(_a(x, "p")))))))
    phi2 = And(Exists("p", _a(x, "p")),
               Forall("p1", Exists("p2", Eventually(And(_a(x, "p1"), Next(_a(x, "p2")))))))
    phi3 = Forall("p1", Forall("p2", Implies(
        Eventually(And(_a(x, "p1"), _a(x, "p2"))),
        Globally(conj(Iff(_a(p, "p1"), _a(p, "p2")) for p in tp)))))
    phi4 = Forall("p", Globally(_exactly_one(tp, "p")))
    phi5 = Forall("p", Globally(disj(
        And(_a(ts.prop(k), "p"), disj(Next(_a(ts.prop(m), "p")) for m in range(n) if ts.vertical_ok(k, m)))
        for k in range(n))))
    phi6 = Forall("p1", Forall("p2", Implies(
        Eventually(And(_a(x, "p1"), Next(_a(x, "p2")))),
        Globally(disj(
            And(_a(ts.prop(k), "p1"), disj(_a(ts.prop(m), "p2") for m in range(n) if ts.horizontal_ok(k, m)))
            for k in range(n))))))
    phi7 = Exists("p", And(_a(x, "p"), Globally(Eventually(_a(t0, "p")))))
    return [phi1, phi2, phi3, phi4, phi5, phi6, phi7]


def gen_quadrant_formula(ts: TileSet):
    """Conjunction of the seven quadrant conjuncts (not prenex)."""
    return conj(quadrant_conjuncts(ts))


def diagonal_conjuncts(ts: TileSet, height: int | None = None) -> dict:
    """Named conjuncts of the diagonal reduction.

    With ``height=None`` every column must have a right neighbour, so models
    are infinite.  With ``height=n`` only columns ``0..n`` are required and
    no column beyond ``n`` is allowed, which gives finite models of ``n+1``
    traces when the tile set tiles the height-``n`` triangle.
    """
    x = X_PROP
    tp = ts.props
    t0 = ts.prop(ts.designated)
    n = len(ts.tiles)
    xa = lambda v: _a(x, v)
    out = {}
    out["x_once"] = Forall("p", Until(Not(xa("p")), And(xa("p"), Next(Globally(Not(xa("p")))))))
    if height is None:
        succ = Forall("p1", Exists("p2", Eventually(And(xa("p1"), Next(xa("p2"))))))
        out["x_columns"] = And(Exists("p", xa("p")), succ)
    else:
        early = disj(next_n(xa("p1"), k) for k in range(height))
        succ = Forall("p1", Exists("p2", Implies(early, Eventually(And(xa("p1"), Next(xa("p2")))))))
        cap = Forall("p", disj(next_n(xa("p"), k) for k in range(height + 1)))
        out["x_columns"] = conj(Exists("p", xa("p")), succ, cap)
    out["same_column_same_tiles"] = Forall("p1", Forall("p2", Implies(
        Eventually(And(xa("p1"), xa("p2"))),
        Globally(conj(Iff(_a(p, "p1"), _a(p, "p2")) for p in tp + (NULL_PROP,))))))
    out["one_tile"] = Forall("p", Globally(_exactly_one(tp + (NULL_PROP,), "p")))
    out["null_after_x"] = Forall("p", Until(Not(_a(NULL_PROP, "p")),
                                            conj(xa("p"), Not(_a(NULL_PROP, "p")), Next(Globally(_a(NULL_PROP, "p"))))))
    out["vertical_before_x"] = Forall("p", Globally(Implies(Next(Eventually(xa("p"))), disj(
        And(_a(ts.prop(k), "p"), disj(Next(_a(ts.prop(m), "p")) for m in range(n) if ts.vertical_ok(k, m)))
        for k in range(n)))))
    out["horizontal_before_x"] = Forall("p1", Forall("p2", Implies(
        Eventually(And(xa("p1"), Next(xa("p2")))),
        Globally(Implies(Eventually(xa("p1")), disj(
            And(_a(ts.prop(k), "p1"), disj(_a(ts.prop(m), "p2") for m in range(n) if ts.horizontal_ok(k, m)))
            for k in range(n)))))))
    out["designated_each_row"] = Forall("p1", Exists("p2", Eventually(And(xa("p1"), _a(t0, "p2")))))
    return out


def gen_diagonal_formula(ts: TileSet, height: int | None = None):
    return conj(list(diagonal_conjuncts(ts, height).values()))


# ---------------------------------------------------------------- brute force

def _cells(region: str, width: int, height: int) -> list:
    """Cells in column-major order; the diagonal region keeps rows j <= column i."""
    if region == "quadrant":
        return [(i, j) for i in range(width) for j in range(height)]
    if region == "diagonal":
        return [(i, j) for i in range(width) for j in range(min(i + 1, height))]
    raise BadArgument(f"unknown region {region!r}")


def check_tiling(ts: TileSet, region: str, grid: dict, n: int, height: int | None = None) -> bool:
    """Constraint checker: adjacency on the truncated region, and for the
    diagonal region the designated tile in every row."""
    height = n if height is None else height
    cells = _cells(region, n, height)
    if set(grid) != set(cells):
        return False
    for (i, j) in cells:
        k = grid[(i, j)]
        if not (0 <= k < len(ts.tiles)):
            return False
        if (i + 1, j) in grid and not ts.horizontal_ok(k, grid[(i + 1, j)]):
            return False
        if (i, j + 1) in grid and not ts.vertical_ok(k, grid[(i, j + 1)]):
            return False
    if region == "diagonal":
        for j in range(min(n, height)):
            if not any(grid[(i, j)] == ts.designated for i in range(j, n)):
                return False
    return True


def _search(ts, region, n, height, cells, prefix, node_cap):
    grid = dict(prefix)
    nodes = [0]
    cells = cells[len(prefix):]

    def ok(cell, k):
        i, j = cell
        if (i - 1, j) in grid and not ts.horizontal_ok(grid[(i - 1, j)], k):
            return False
        if (i, j - 1) in grid and not ts.vertical_ok(grid[(i, j - 1)], k):
            return False
        return True

    def rows_ok():
        for j in range(min(n, height)):
            if not any(grid[(i, j)] == ts.designated for i in range(j, n)):
                return False
        return True

    def go(idx):
        nodes[0] += 1
        if node_cap is not None and nodes[0] > node_cap:
            raise ResourceLimit(f"tiling search exceeded {node_cap} nodes")
        if idx == len(cells):
            return region != "diagonal" or rows_ok()
        cell = cells[idx]
        for k in range(len(ts.tiles)):
            if ok(cell, k):
                grid[cell] = k
                if go(idx + 1):
                    return True
                del grid[cell]
        return False

    return dict(grid) if go(0) else None


def brute_tiling(ts: TileSet, region: str, n: int, height: int | None = None,
                 node_cap: int | None = 5_000_000, jobs: int = 1):
    """Exhaustive search for a tiling of the truncated region.

    Returns ``(found, grid)`` where ``grid`` maps ``(column, row)`` to a tile
    index.  The quadrant region is ``n`` columns by ``height`` rows (default
    ``n``); the diagonal region keeps the cells with row <= column.  With
    ``jobs > 1`` the choices for the first cell are searched in separate
    processes and the first success in tile order is returned.
    """
    if n < 1:
        raise BadArgument("n must be at least 1")
    height = n if height is None else height
    cells = _cells(region, n, height)
    if jobs <= 1 or len(ts.tiles) == 1:
        grid = _search(ts, region, n, height, cells, [], node_cap)
        return grid is not None, grid
    first = cells[0]
    args = [(ts, region, n, height, cells, [(first, k)], node_cap) for k in range(len(ts.tiles))]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        results = list(ex.map(_search_star, args))
    for grid in results:
        if grid is not None:
            return True, grid
    return False, None


def _search_star(a):
    return _search(*a)


# ---------------------------------------------------------------- models

def _column_trace(ts, column, tiles_by_time):
    from .traces import UPTrace

    letters = []
    for t, k in enumerate(tiles_by_time):
        s = {ts.prop(k)}
        if t == column:
            s.add(X_PROP)
        letters.append(frozenset(s))
    return letters


def truncated_quadrant_model(ts: TileSet, n: int):
    """Trace set for columns ``0..n`` built from a tiling of width ``n+1``.

    Column ``i`` has the marker at time ``i``.  Rows ``0..n+1`` come from the
    tiling; the last row repeats forever.
    """
    from .traces import TraceSet, UPTrace

    found, grid = brute_tiling(ts, "quadrant", n + 1, height=n + 2)
    if not found:
        return None
    traces = []
    for i in range(n + 1):
        letters = _column_trace(ts, i, [grid[(i, t)] for t in range(n + 2)])
        traces.append(UPTrace(tuple(letters[:-1]), (letters[-1],)))
    return TraceSet(tuple(traces), (X_PROP,) + ts.props)


def diagonal_model(ts: TileSet, grid: dict, n: int):
    """Trace set encoding a diagonal tiling of columns ``0..n-1``."""
    from .traces import TraceSet, UPTrace

    traces = []
    for i in range(n):
        letters = _column_trace(ts, i, [grid[(i, t)] for t in range(i + 1)])
        traces.append(UPTrace(tuple(letters), (frozenset([NULL_PROP]),)))
    return TraceSet(tuple(traces), (X_PROP, NULL_PROP) + ts.props)


def decode_tiling(ts: TileSet, T) -> tuple:
    """Read back ``(grid, columns)`` from a model: column = time of the marker,
    row ``t`` = the tile proposition holding at time ``t`` (null excluded).

    Returns ``(None, 0)`` if the traces do not describe columns 0..n-1.
    """
    grid, cols = {}, set()
    for t in T.traces:
        xs = [i for i in range(t.stem_len + t.period) if X_PROP in t.at(i)]
        if len(xs) != 1 or xs[0] >= t.stem_len:
            return None, 0
        i = xs[0]
        cols.add(i)
        for row in range(i + 1):
            tiles = [k for k in range(len(ts.tiles)) if ts.prop(k) in t.at(row)]
            if len(tiles) != 1:
                return None, 0
            if (i, row) in grid and grid[(i, row)] != tiles[0]:
                return None, 0
            grid[(i, row)] = tiles[0]
    n = len(cols)
    if cols != set(range(n)):
        return None, 0
    return grid, n
