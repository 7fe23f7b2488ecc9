"""Line-delimited JSON interchange files.

Every file starts with a header line ``{"format": ..., "version": 1}``
followed by record lines.  Keys are sorted and no floating-point numbers are
ever written, so equal objects serialise to identical bytes.
"""
from __future__ import annotations

import json

from ..errors import InterchangeError

VERSION = 1


def dumps_line(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def write_records(fmt: str, records, extra=None) -> str:
    header = {"format": fmt, "version": VERSION, **(extra or {})}
    lines = [dumps_line(header)] + [dumps_line(r) for r in records]
    return "\n".join(lines) + "\n"


def _no_floats(obj, where):
    if isinstance(obj, float):
        raise InterchangeError(f"floating-point value in {where}")
    if isinstance(obj, dict):
        for v in obj.values():
            _no_floats(v, where)
    elif isinstance(obj, list):
        for v in obj:
            _no_floats(v, where)


def read_records(text: str, fmt: str):
    """Return ``(header, records)``; validates format name and version."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InterchangeError("empty interchange file")
    try:
        objs = [json.loads(ln) for ln in lines]
    except json.JSONDecodeError as exc:
        raise InterchangeError(f"invalid JSON on line {exc.lineno}: {exc.msg}") from exc
    header, records = objs[0], objs[1:]
    if not isinstance(header, dict) or header.get("format") != fmt:
        raise InterchangeError(f"expected a {fmt!r} file")
    if header.get("version") != VERSION:
        raise InterchangeError(f"unsupported version {header.get('version')!r}")
    for i, r in enumerate(records, start=2):
        if not isinstance(r, dict):
            raise InterchangeError(f"line {i}: record must be an object")
        _no_floats(r, f"line {i}")
    return header, records


def _labels(x, where):
    if not isinstance(x, list) or not all(isinstance(p, str) for p in x):
        raise InterchangeError(f"{where}: label set must be a list of proposition names")
    return frozenset(x)


# ---------------------------------------------------------------- traces

def dump_traceset(T) -> str:
    return write_records("traceset", [t.to_record() for t in T.traces], {"alphabet": list(T.alphabet)})


def load_traceset(text: str):
    from ..traces import TraceSet, UPTrace

    header, records = read_records(text, "traceset")
    alpha = header.get("alphabet", [])
    traces = []
    for i, r in enumerate(records, start=2):
        if set(r) != {"stem", "loop"}:
            raise InterchangeError(f"line {i}: trace record needs exactly 'stem' and 'loop'")
        if not isinstance(r["stem"], list) or not isinstance(r["loop"], list) or not r["loop"]:
            raise InterchangeError(f"line {i}: stem must be a list and loop a nonempty list")
        stem = [_labels(x, f"line {i}") for x in r["stem"]]
        loop = [_labels(x, f"line {i}") for x in r["loop"]]
        traces.append(UPTrace(tuple(stem), tuple(loop)))
    return TraceSet(tuple(traces), tuple(alpha))


# ---------------------------------------------------------------- systems

def dump_system(K) -> str:
    rec = {
        "vertices": [{"id": v, "labels": sorted(K.labels[v])} for v in K.vertices],
        "edges": [[u, w] for u, w in K.edge_list()],
        "initial": K.initial,
    }
    return write_records("system", [rec])


def load_system(text: str):
    from ..kripke import TransitionSystem

    _, records = read_records(text, "system")
    if len(records) != 1:
        raise InterchangeError("a system file holds exactly one record")
    r = records[0]
    for key in ("vertices", "edges", "initial"):
        if key not in r:
            raise InterchangeError(f"system record lacks {key!r}")
    labels = {}
    for v in r["vertices"]:
        if not isinstance(v, dict) or "id" not in v:
            raise InterchangeError("vertex entries need an 'id'")
        vid = v["id"]
        if not isinstance(vid, (str, int)) or isinstance(vid, bool):
            raise InterchangeError("vertex ids must be strings or integers")
        labels[vid] = _labels(v.get("labels", []), f"vertex {vid!r}")
    edges = []
    for e in r["edges"]:
        if not isinstance(e, list) or len(e) != 2:
            raise InterchangeError("edges must be [from, to] pairs")
        edges.append((e[0], e[1]))
    return TransitionSystem.build(labels, edges, r["initial"])


# ---------------------------------------------------------------- tiles

def dump_tileset(ts) -> str:
    rec = {
        "colors": list(ts.colors),
        "tiles": [{"east": t.east, "west": t.west, "north": t.north, "south": t.south} for t in ts.tiles],
        "designated": ts.designated,
    }
    return write_records("tileset", [rec])


def load_tileset(text: str):
    from ..tiling import Tile, TileSet

    _, records = read_records(text, "tileset")
    if len(records) != 1:
        raise InterchangeError("a tile-set file holds exactly one record")
    r = records[0]
    try:
        tiles = tuple(Tile(t["east"], t["west"], t["north"], t["south"]) for t in r["tiles"])
        return TileSet(tuple(r["colors"]), tiles, r["designated"])
    except (KeyError, TypeError) as exc:
        raise InterchangeError(f"bad tile-set record: {exc}") from exc
