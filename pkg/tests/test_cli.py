import io
import json
import subprocess
import sys

import jsonschema
import pytest

from hypersat import __version__
from hypersat.cli import main
from hypersat.syntax import parse_formula
from hypersat.syntax.interchange import dump_traceset, load_system, load_traceset
from hypersat.traces import TraceSet, UPTrace

INPUT_DETERMINISM = "forall p. forall q. (G (i[p] <-> i[q])) -> (G (o[p] <-> o[q]))"

STRUCTURED = {
    "type": "object",
    "required": ["result", "report"],
    "additionalProperties": False,
    "properties": {
        "result": {"type": "object"},
        "report": {
            "type": "object",
            "required": ["subcommand", "inputs_digest", "outcome", "elapsed", "version"],
            "additionalProperties": False,
            "properties": {
                "subcommand": {"type": "string"},
                "inputs_digest": {"type": "string", "pattern": "^[0-9a-f]{16}$"},
                "outcome": {"enum": ["true", "false", "unknown", "usage-error", "resource-limit",
                                     "data-error", "internal-error"]},
                "elapsed": {"type": "number", "minimum": 0},
                "version": {"type": "string"},
            },
        },
    },
}


def run(capsys, monkeypatch, *argv, stdin=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def structured(capsys, monkeypatch, *argv, stdin=None):
    code, out, err = run(capsys, monkeypatch, "--format", "structured", *argv, stdin=stdin)
    doc = json.loads(out)
    jsonschema.validate(doc, STRUCTURED)
    return code, doc


@pytest.fixture
def traces_file(tmp_path):
    T = TraceSet((UPTrace((), (frozenset("a"),)), UPTrace((frozenset(),), (frozenset("a"),))))
    p = tmp_path / "t.jsonl"
    p.write_text(dump_traceset(T))
    return str(p)


@pytest.fixture
def tf_file(tmp_path, capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, "gen-structure", "tf")
    assert code == 0
    p = tmp_path / "tf.jsonl"
    p.write_text(out)
    return str(p)


def test_classify_input_determinism(capsys, monkeypatch):
    code, out, err = run(capsys, monkeypatch, "classify", INPUT_DETERMINISM)
    assert code == 0 and out == "Pi 1\n"
    assert "report:" in err


def test_eval_ltl_true_and_false(capsys, monkeypatch, traces_file):
    code, out, _ = run(capsys, monkeypatch, "eval-ltl", "exists p. a[p]", "--traces", traces_file)
    assert (code, out) == (0, "true\n")
    code, out, _ = run(capsys, monkeypatch, "eval-ltl", "forall p. a[p]", "--traces", traces_file)
    assert (code, out) == (1, "false\n")


def test_phi_op_pipeline_round_trips(capsys, monkeypatch):
    code, generated, _ = run(capsys, monkeypatch, "gen-arith", "phi-op")
    assert code == 0
    code, reparsed, _ = run(capsys, monkeypatch, "parse", "-", stdin=generated)
    assert code == 0 and reparsed == generated


@pytest.mark.parametrize("argv", [
    ("gen-arith", "phi-op-cl"),
    ("gen-arith", "phi-set"),
    ("gen-tiling",),
    ("gen-tiling", "--variant", "diagonal", "--height", "2"),
    ("gen-fo", "forall x. exists y. x <= y & b(y)"),
    ("simplify", "forall p. exists q. F (o[p] & F o[q]) & a[q]"),
    ("translate", "e3a", "exists x:num. x + x = x", "--variant", "second_order_fb"),
])
def test_generator_outputs_reparse(capsys, monkeypatch, argv):
    code, out, _ = run(capsys, monkeypatch, *argv)
    assert code == 0
    f = parse_formula(out, "hyperctlstar")
    code, again, _ = run(capsys, monkeypatch, "parse", out.strip())
    assert again == out and parse_formula(again, "hyperctlstar") == f


def test_soa_translation_output(capsys, monkeypatch):
    from hypersat.arith import parse_arith, print_arith

    code, out, _ = run(capsys, monkeypatch, "translate", "soa-fb", "exists p. a[p]")
    assert code == 0 and print_arith(parse_arith(out)) == out.strip()


def test_encode_word_output_loads(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, "encode-word", "a.-.a,b", "--stretch", "1(n+1)")
    assert code == 0
    T = load_traceset(out)
    assert len(T) == 3
    code, _, err = run(capsys, monkeypatch, "encode-word", "a", "--stretch", "bogus")
    assert code == 64 and "unknown stretch" in err


def test_structure_outputs_load(capsys, monkeypatch):
    for argv, n in ((("gen-structure", "tf"), 3), (("gen-structure", "kset", "--depth", "2"), 23)):
        code, out, _ = run(capsys, monkeypatch, *argv)
        assert code == 0 and len(load_system(out).vertices) == n


def test_eval_ctl_and_game_agree(capsys, monkeypatch, tf_file):
    f = "exists p. X (fbt[p] & b1[p])"
    c1, out1, err = run(capsys, monkeypatch, "eval-ctl", f, "--system", tf_file)
    assert (c1, out1) == (0, "true\n") and "universe: lassos with stem <= 2, loop <= 2" in err
    c2, doc = structured(capsys, monkeypatch, "game", f, "--system", tf_file)
    assert c2 == 0 and doc["result"]["universe"]["max_stem"] == 2


def test_game_export(capsys, monkeypatch, tf_file, tmp_path):
    dest = tmp_path / "g.jsonl"
    code, _, _ = run(capsys, monkeypatch, "game", "forall p. X b1[p]", "--system", tf_file, "--export", str(dest))
    assert code == 1
    assert json.loads(dest.read_text().splitlines()[0])["format"] == "game"


def test_sat_search_outcomes(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, "sat-search", "exists p. a[p]", "--max-traces", "1",
                       "--max-stem", "0", "--max-loop", "1")
    assert code == 0 and out.startswith("SAT\n")
    assert len(load_traceset(out.split("\n", 1)[1])) == 1
    code, doc = structured(capsys, monkeypatch, "sat-search", "exists p. a[p] & !a[p]", "--max-traces", "1",
                           "--max-stem", "0", "--max-loop", "1")
    assert code == 2 and doc["result"]["status"] == "BOUND_EXHAUSTED"
    assert doc["report"]["outcome"] == "unknown"


def test_resource_limit_exit_code(capsys, monkeypatch):
    code, doc = structured(capsys, monkeypatch, "sat-search", "exists p. exists q. a[p] & !a[q] & b[q]",
                           "--max-candidates", "1")
    assert code == 2 and doc["report"]["outcome"] == "resource-limit"


def test_environment_overrides_default_and_flag_overrides_environment(capsys, monkeypatch):
    f = "exists p. exists q. a[p] & !a[q]"
    monkeypatch.setenv("HYPERSAT_MAX_TRACES", "1")
    code, doc = structured(capsys, monkeypatch, "sat-search", f)
    assert code == 2
    code, doc = structured(capsys, monkeypatch, "sat-search", f, "--max-traces", "2")
    assert code == 0 and doc["result"]["status"] == "SAT"
    monkeypatch.setenv("HYPERSAT_MAX_TRACES", "two")
    code, _, err = run(capsys, monkeypatch, "sat-search", f)
    assert code == 64 and "HYPERSAT_MAX_TRACES" in err


def test_format_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("HYPERSAT_FORMAT", "structured")
    code, out, _ = run(capsys, monkeypatch, "depth", "exists p. X X a[p]")
    doc = json.loads(out)
    jsonschema.validate(doc, STRUCTURED)
    assert code == 0 and doc["result"]["temporal_depth"] == 2


@pytest.mark.parametrize("argv, code", [
    ((), 64),
    (("frobnicate",), 64),
    (("parse", "exists p. (a[p]"), 65),
    (("eval-ltl", "exists p. a[p]", "--traces", "/nonexistent/file"), 65),
    (("parse", "--dialect", "hyperltl", "exists p. G exists q. a[q]"), 65),
    (("classify", "forall p. G exists q. a[q]"), 65),
])
def test_error_exit_codes(capsys, monkeypatch, argv, code):
    got, out, err = run(capsys, monkeypatch, *argv)
    assert got == code
    assert err


def test_errors_are_structured_too(capsys, monkeypatch):
    code, doc = structured(capsys, monkeypatch, "parse", "exists p. (a[p]")
    assert code == 65 and doc["report"]["outcome"] == "data-error"
    assert doc["result"]["kind"] == "ParseError"


def test_digest_depends_on_inputs(capsys, monkeypatch):
    _, a = structured(capsys, monkeypatch, "depth", "exists p. a[p]")
    _, b = structured(capsys, monkeypatch, "depth", "exists p. a[p]")
    _, c = structured(capsys, monkeypatch, "depth", "exists p. X a[p]")
    assert a["report"]["inputs_digest"] == b["report"]["inputs_digest"] != c["report"]["inputs_digest"]
    assert a["report"]["version"] == __version__


def test_formula_from_file(capsys, monkeypatch, tmp_path):
    p = tmp_path / "f.txt"
    p.write_text(INPUT_DETERMINISM)
    code, out, _ = run(capsys, monkeypatch, "classify", "@" + str(p))
    assert (code, out) == (0, "Pi 1\n")


def test_console_module_runs():
    r = subprocess.run([sys.executable, "-m", "hypersat.cli", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == __version__
