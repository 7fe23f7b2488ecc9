"""Command-line entry point ``hypersat``.

Results go to standard output, diagnostics and the run report to standard
error.  With ``--format structured`` standard output carries one JSON
object ``{"result": ..., "report": ...}`` instead.

Numeric bounds can be set by flag, by environment variable (``HYPERSAT_``
plus the flag name in upper case, for example ``HYPERSAT_MAX_STEM``) or
left at their defaults, in that order of precedence.

Exit codes: 0 true / SAT / success, 1 false, 2 unknown / bound exhausted /
resource limit, 64 usage error, 65 bad input data, 70 internal error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import asdict, dataclass

EXIT_TRUE, EXIT_FALSE, EXIT_UNKNOWN = 0, 1, 2
EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 64, 65, 70


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunReport:
    subcommand: str
    inputs_digest: str
    outcome: str
    elapsed: float
    version: str

    def line(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


_DEFAULTS = {
    "max_stem": 2, "max_loop": 2, "max_traces": 3, "timeout": 60.0, "jobs": 1,
    "max_candidates": None, "depth": 3, "subset_bound": 1, "path_length": 3,
    "format": "human",
}


def _setting(args, name, cast=int):
    v = getattr(args, name, None)
    if v is not None:
        return v
    env = os.environ.get("HYPERSAT_" + name.upper())
    if env is not None and env != "":
        try:
            return cast(env)
        except ValueError:
            raise UsageError(f"bad value {env!r} for HYPERSAT_{name.upper()}")
    return _DEFAULTS.get(name)


def _read(arg, inputs):
    """Positional text argument; ``-`` or a missing argument reads stdin,
    ``@path`` reads a file."""
    if arg is None or arg == "-":
        text = sys.stdin.read()
    elif arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = arg
    inputs.append(text)
    return text


def _read_file(path, inputs):
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    inputs.append(text)
    return text


# ------------------------------------------------------------ subcommands

def _formula(args, inputs, dialect=None):
    from .syntax import parse_formula

    return parse_formula(_read(args.formula, inputs), dialect=dialect or getattr(args, "dialect", "hyperctlstar") or "hyperctlstar",
                         prenex_only=getattr(args, "prenex_only", False))


def cmd_parse(args, inputs):
    from .formula import props, size
    from .syntax import print_formula

    f = _formula(args, inputs)
    text = print_formula(f)
    return EXIT_TRUE, text, {"formula": text, "size": size(f), "props": sorted(props(f))}


def cmd_classify(args, inputs):
    from .formula import classify_prenex, prenex
    from .syntax import print_formula

    f = _formula(args, inputs, "hyperltl")
    p = prenex(f)
    c = classify_prenex(p)
    text = f"{c.kind} {c.level}"
    return EXIT_TRUE, text, {"kind": c.kind, "level": c.level, "prenex": print_formula(p)}


def cmd_depth(args, inputs):
    from .formula import height, quantifier_count, temporal_depth

    f = _formula(args, inputs)
    d = temporal_depth(f)
    return EXIT_TRUE, str(d), {"temporal_depth": d, "height": height(f), "quantifiers": quantifier_count(f)}


def cmd_eval_ltl(args, inputs):
    from .syntax.interchange import load_traceset
    from .traces import eval_hyperltl

    f = _formula(args, inputs, "hyperltl")
    T = load_traceset(_read_file(args.traces, inputs))
    v = eval_hyperltl(f, T)
    return (EXIT_TRUE if v else EXIT_FALSE), str(v).lower(), {"value": v}


def _system_universe(args, inputs):
    from .kripke import PathUniverse
    from .syntax.interchange import load_system

    K = load_system(_read_file(args.system, inputs))
    bounds = {"max_stem": _setting(args, "max_stem"), "max_loop": _setting(args, "max_loop")}
    U = PathUniverse.from_bounds(K, bounds["max_stem"], bounds["max_loop"])
    sys.stderr.write(f"universe: lassos with stem <= {bounds['max_stem']}, loop <= {bounds['max_loop']}, "
                     f"{len(U)} paths after suffix closure\n")
    return K, U, bounds


def cmd_eval_ctl(args, inputs):
    from .kripke import eval_hyperctlstar

    f = _formula(args, inputs, "hyperctlstar")
    K, U, bounds = _system_universe(args, inputs)
    v = eval_hyperctlstar(f, K, U)
    return (EXIT_TRUE if v else EXIT_FALSE), str(v).lower(), {"value": v, "universe": {**bounds, "paths": len(U)}}


def cmd_game(args, inputs):
    from .game import build_game, export_game, solve_game

    f = _formula(args, inputs, "hyperctlstar")
    K, U, bounds = _system_universe(args, inputs)
    g = build_game(f, K, U)
    sol = solve_game(g)
    if args.export:
        with open(args.export, "w", encoding="utf-8") as fh:
            fh.write(export_game(g, sol))
    winner = sol.winner[g.initial]
    return (EXIT_TRUE if sol.verifier_wins(g.initial) else EXIT_FALSE), winner, {
        "winner": winner, "vertices": len(g), "longest_play": g.longest_play(),
        "universe": {**bounds, "paths": len(U)}}


def cmd_gen_tiling(args, inputs):
    from .syntax import print_formula
    from .syntax.interchange import load_tileset
    from .tiling import constant_tileset, gen_diagonal_formula, gen_quadrant_formula

    ts = load_tileset(_read_file(args.tiles, inputs)) if args.tiles else constant_tileset()
    if args.variant == "quadrant":
        f = gen_quadrant_formula(ts)
    else:
        f = gen_diagonal_formula(ts, args.height)
    text = print_formula(f)
    return EXIT_TRUE, text, {"formula": text}


def cmd_gen_fo(args, inputs):
    from .fo import fo_to_hyperltl, parse_fo
    from .syntax import print_formula

    f = fo_to_hyperltl(parse_fo(_read(args.formula, inputs)), marker=args.marker)
    text = print_formula(f)
    return EXIT_TRUE, text, {"formula": text}


def _parse_word(text):
    from .errors import BadArgument

    text = text.strip()
    if not text:
        raise BadArgument("empty word")
    out = []
    for letter in text.split("."):
        letter = letter.strip()
        out.append(frozenset() if letter in ("-", "") else frozenset(p.strip() for p in letter.split(",")))
    return tuple(out)


def cmd_encode_word(args, inputs):
    from .fo import DEFAULT_STRETCHES, NONAFFINE_STRETCHES, encode_word, encode_word_n
    from .syntax.interchange import dump_traceset

    w = _parse_word(_read(args.word, inputs))
    if args.gap is not None:
        T = encode_word_n(w, args.gap, args.marker)
    else:
        table = {s.name: s for s in DEFAULT_STRETCHES + NONAFFINE_STRETCHES}
        if args.stretch not in table:
            raise UsageError(f"unknown stretch {args.stretch!r}; choose from {sorted(table)}")
        T = encode_word(w, table[args.stretch].fn, args.marker)
    text = dump_traceset(T).rstrip("\n")
    return EXIT_TRUE, text, {"traceset": text, "traces": len(T)}


def cmd_simplify(args, inputs):
    from .simplify import simplify
    from .syntax import print_formula

    f = _formula(args, inputs, "hyperltl")
    g = simplify(f, marker=args.marker, exclusive=not args.non_exclusive)
    text = print_formula(g)
    return EXIT_TRUE, text, {"formula": text}


def cmd_gen_arith(args, inputs):
    from .arith.ops import gen_phi_op, gen_phi_op_cl
    from .arith.structures import gen_phi_set
    from .formula import conj
    from .syntax import print_formula

    f = {"phi-op": gen_phi_op, "phi-op-cl": gen_phi_op_cl, "phi-set": lambda: conj(gen_phi_set())}[args.which]()
    text = print_formula(f)
    return EXIT_TRUE, text, {"formula": text}


def cmd_gen_structure(args, inputs):
    from .arith.structures import StructureGenConfig, gen_kset, gen_prefix_tree, gen_tf, gen_tsc
    from .syntax.interchange import dump_system

    if args.which == "kset":
        K = gen_kset(StructureGenConfig(_setting(args, "depth"), _setting(args, "subset_bound"), _setting(args, "path_length")))
    elif args.which == "tf":
        K = gen_tf()
    elif args.which == "prefix-tree":
        K = gen_prefix_tree("cl_top", _setting(args, "depth"))
    else:
        K = gen_tsc(_setting(args, "depth"))
    text = dump_system(K).rstrip("\n")
    return EXIT_TRUE, text, {"system": text, "vertices": len(K.vertices)}


def cmd_translate(args, inputs):
    from .arith import parse_arith, print_arith, translate_e3a, translate_hyperctl_to_soa
    from .syntax import parse_formula, print_formula

    src = _read(args.formula, inputs)
    if args.which == "e3a":
        r = translate_e3a(parse_arith(src), args.variant)
        text = print_formula(r.body if args.body_only else r.sentence)
    else:
        variant = "countable" if args.which == "soa-count" else "finitely_branching"
        text = print_arith(translate_hyperctl_to_soa(parse_formula(src, dialect="hyperctlstar"), variant))
    return EXIT_TRUE, text, {"formula": text}


def cmd_sat_search(args, inputs):
    from .search import SAT, SearchBounds, sat_search
    from .syntax.interchange import dump_traceset

    f = _formula(args, inputs, "hyperltl")
    alphabet = tuple(a for a in (args.alphabet or "").split(",") if a)
    b = SearchBounds(_setting(args, "max_traces"), _setting(args, "max_stem"), _setting(args, "max_loop"), alphabet)
    out = sat_search(f, b, jobs=_setting(args, "jobs"), timeout=_setting(args, "timeout", float),
                     max_candidates=_setting(args, "max_candidates"))
    data = {"status": out.status, "stats": out.stats}
    if out.status == SAT:
        model = dump_traceset(out.model).rstrip("\n")
        data["model"] = model
        return EXIT_TRUE, f"{SAT}\n{model}", data
    return EXIT_UNKNOWN, out.status, data


# ------------------------------------------------------------ parser

def _add_formula(p, dialect_flag=False):
    p.add_argument("formula", nargs="?", help="formula text, @FILE, or - for stdin (default)")
    if dialect_flag:
        p.add_argument("--dialect", choices=["hyperltl", "hyperctlstar"], default="hyperctlstar")
        p.add_argument("--prenex-only", action="store_true", help="reject formulas that are not prenex")


def _add_bounds(p, *names):
    helps = {
        "max_stem": "longest stem of enumerated lassos", "max_loop": "longest loop of enumerated lassos",
        "max_traces": "most traces in a candidate model", "timeout": "seconds before giving up",
        "jobs": "worker processes", "max_candidates": "cap on candidate models",
        "depth": "tree or prefix depth", "subset_bound": "subsets of 0..K", "path_length": "chain positions 0..M",
    }
    for n in names:
        cast = float if n == "timeout" else int
        p.add_argument("--" + n.replace("_", "-"), dest=n, type=cast, default=None,
                       help=f"{helps[n]} (env HYPERSAT_{n.upper()}, default {_DEFAULTS[n]})")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hypersat", description="HyperLTL / HyperCTL* tools over ultimately periodic traces.")
    ap.add_argument("--format", choices=["human", "structured"], default=None,
                    help="output style (env HYPERSAT_FORMAT, default human)")
    ap.add_argument("--version", action="store_true", help="print the version and exit")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("parse", help="parse and pretty-print a formula")
    _add_formula(p, True)
    p.set_defaults(run=cmd_parse)

    p = sub.add_parser("classify", help="prenex class of a HyperLTL sentence, e.g. 'Pi 1'")
    _add_formula(p)
    p.set_defaults(run=cmd_classify)

    p = sub.add_parser("depth", help="temporal depth")
    _add_formula(p, True)
    p.set_defaults(run=cmd_depth)

    p = sub.add_parser("eval-ltl", help="evaluate a HyperLTL sentence on a trace set")
    _add_formula(p)
    p.add_argument("--traces", required=True, help="traceset JSONL file")
    p.set_defaults(run=cmd_eval_ltl)

    for name, fn, hlp in (("eval-ctl", cmd_eval_ctl, "evaluate a HyperCTL* sentence on a system"),
                          ("game", cmd_game, "solve the model-checking game")):
        p = sub.add_parser(name, help=hlp)
        _add_formula(p)
        p.add_argument("--system", required=True, help="system JSONL file")
        _add_bounds(p, "max_stem", "max_loop")
        if name == "game":
            p.add_argument("--export", help="write the game graph as JSONL")
        p.set_defaults(run=fn)

    p = sub.add_parser("gen-tiling", help="tiling reduction sentence")
    p.add_argument("--variant", choices=["quadrant", "diagonal"], default="quadrant")
    p.add_argument("--tiles", help="tileset JSONL file (default: one tile with a single colour)")
    p.add_argument("--height", type=int, default=None, help="diagonal height bound")
    p.set_defaults(run=cmd_gen_tiling)

    p = sub.add_parser("gen-fo", help="translate an FO[<] sentence to HyperLTL")
    _add_formula(p)
    p.add_argument("--marker", default="o")
    p.set_defaults(run=cmd_gen_fo)

    p = sub.add_parser("encode-word", help="trace set encoding a finite word")
    p.add_argument("word", nargs="?", help="letters separated by '.', propositions by ','; '-' is the empty letter")
    p.add_argument("--stretch", default="3(n+1)", help="stretch function name")
    p.add_argument("--gap", type=int, default=None, help="use uniform marker gap N instead of a stretch")
    p.add_argument("--marker", default="o")
    p.set_defaults(run=cmd_encode_word)

    p = sub.add_parser("simplify", help="replace a prenex body by its position-class disjunction")
    _add_formula(p)
    p.add_argument("--marker", default="o")
    p.add_argument("--non-exclusive", action="store_true", help="omit the negated order conjuncts")
    p.set_defaults(run=cmd_simplify)

    p = sub.add_parser("gen-arith", help="operation and set sentences")
    p.add_argument("which", choices=["phi-op", "phi-op-cl", "phi-set"])
    p.set_defaults(run=cmd_gen_arith)

    p = sub.add_parser("gen-structure", help="bounded transition systems")
    p.add_argument("which", choices=["kset", "tf", "prefix-tree", "tsc"])
    _add_bounds(p, "depth", "subset_bound", "path_length")
    p.set_defaults(run=cmd_gen_structure)

    p = sub.add_parser("translate", help="arithmetic <-> HyperCTL* translations")
    p.add_argument("which", choices=["e3a", "soa-count", "soa-fb"])
    _add_formula(p)
    p.add_argument("--variant", choices=["third_order", "second_order_fb"], default="third_order")
    p.add_argument("--body-only", action="store_true", help="for e3a, omit the side conditions")
    p.set_defaults(run=cmd_translate)

    p = sub.add_parser("sat-search", help="bounded search for a finite trace-set model")
    _add_formula(p)
    _add_bounds(p, "max_traces", "max_stem", "max_loop", "timeout", "jobs", "max_candidates")
    p.add_argument("--alphabet", help="comma-separated propositions (default: those of the formula)")
    p.set_defaults(run=cmd_sat_search)
    return ap


def main(argv=None) -> int:
    from . import __version__
    from .errors import HyperSatError, ResourceLimit

    argv = list(sys.argv[1:] if argv is None else argv)
    t0 = time.monotonic()
    inputs = []
    command = "?"
    fmt = os.environ.get("HYPERSAT_FORMAT") or "human"

    def emit(code, text, data, outcome):
        report = RunReport(command, hashlib.sha256("\0".join(inputs).encode()).hexdigest()[:16],
                           outcome, round(time.monotonic() - t0, 4), __version__)
        if fmt == "structured":
            sys.stdout.write(json.dumps({"result": data, "report": asdict(report)}, sort_keys=True) + "\n")
        else:
            if text is not None:
                sys.stdout.write(text + "\n")
            sys.stderr.write("report: " + report.line() + "\n")
        return code

    try:
        args = build_parser().parse_args(argv)
        fmt = args.format or fmt
        if fmt not in ("human", "structured"):
            raise UsageError(f"unknown format {fmt!r}")
        if args.version:
            sys.stdout.write(__version__ + "\n")
            return EXIT_TRUE
        if not args.command:
            raise UsageError("missing subcommand")
        command = args.command
        code, text, data = args.run(args, inputs)
        outcome = {EXIT_TRUE: "true", EXIT_FALSE: "false", EXIT_UNKNOWN: "unknown"}[code]
        return emit(code, text, data, outcome)
    except UsageError as e:
        sys.stderr.write(f"hypersat: usage error: {e}\n")
        return emit(EXIT_USAGE, None, {"error": str(e)}, "usage-error")
    except ResourceLimit as e:
        sys.stderr.write(f"hypersat: resource limit: {e}\n")
        return emit(EXIT_UNKNOWN, None, {"error": str(e)}, "resource-limit")
    except (HyperSatError, OSError, UnicodeDecodeError, ValueError) as e:
        sys.stderr.write(f"hypersat: {type(e).__name__}: {e}\n")
        return emit(EXIT_DATA, None, {"error": str(e), "kind": type(e).__name__}, "data-error")
    except Exception as e:  # pragma: no cover - defensive
        sys.stderr.write(f"hypersat: internal error: {type(e).__name__}: {e}\n")
        return emit(EXIT_INTERNAL, None, {"error": str(e)}, "internal-error")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
