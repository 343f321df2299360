import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from germlab.blowup import dual_graph
from germlab.cli import UsageError, emit_dot, run_command

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
SCHEMAS = ROOT / "schemas"

GERMS = [
    "witness_4_3_3.json",
    "witness_4_3_3_lambda2.json",
    "example_b.json",
    "minimal_2_1_1.json",
    "nonsep_k3_lambda1_phi1.json",
    "nonsep_k3_lambda2_phi2.json",
    "fg2_k6.json",
]
NUMERIC = ["fg4_probe_k6.json", "fg2_k6.json", "witness_4_3_3_lambda2.json"]

SCHEMA_OF = {
    "type": "type_report",
    "invariants": "invariants_report",
    "dls": "dls_report",
    "graph": "graph_report",
    "decompose": "decompose_report",
    "compose": "germ_document",
    "purify": "purify_report",
    "fg2germ": "germ_document",
    "germ2fg": "fg_document",
    "tau": "fg_document",
    "moduli": "moduli_report",
    "orbit": "orbit_report",
    "conjugate": "conjugate_report",
    "probe": "probe_report",
    "escape": "escape_report",
    "enumerate": "catalog_record",
}


def _validator(name):
    schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text(encoding="utf-8"))
    jsonschema.Draft202012Validator.check_schema(schema)
    return jsonschema.Draft202012Validator(schema)


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def corpus(name):
    return str(CORPUS / name)


def _cases():
    for f in GERMS:
        for cmd in ("type", "invariants", "dls", "graph", "decompose", "purify", "moduli", "orbit"):
            yield cmd, ["-f", corpus(f)]
        yield "compose", ["-f", corpus(f), "-g", corpus("witness_4_3_3.json")]
        yield "conjugate", ["-f", corpus(f), "-g", corpus(f)]
    for f in ("witness_4_3_3.json", "fg2_k6.json", "minimal_2_1_1.json"):
        yield "germ2fg", ["-f", corpus(f)]
    yield "type", ["-f", corpus("fg4_probe_k6.json")]
    yield "fg2germ", ["-f", corpus("fg2_k6.json")]
    yield "tau", ["-f", corpus("fg2_k6.json")]
    yield "tau", ["-f", corpus("fg2_k6.json"), "--d", 2]
    yield "invariants", ["-f", corpus("example_b.json"), "--dot"]
    yield "orbit", ["-f", corpus("example_b.json"), "--e", 3]
    yield "dls", ["--seq", "3,2,4,2,2,2"]
    yield "graph", ["--seq", "[3,4,2,2]"]
    for f in NUMERIC:
        yield "probe", ["-f", corpus(f), "--m-max", 6]
        yield "escape", ["-f", corpus(f), "--nu-max", 6]
    yield "escape", ["-f", corpus("fg4_probe_k6.json"), "--truncate"]
    yield "probe", ["-f", corpus("fg4_probe_k6.json"), "--d", 2, "--w=-0.5+0.3i"]


CASES = list(_cases())


@pytest.mark.parametrize("cmd, args", CASES, ids=[f"{c}-{i}" for i, (c, _) in enumerate(CASES)])
def test_json_output_matches_schema_and_is_deterministic(cmd, args):
    code, out, err = run(cmd, *args, "--json")
    assert code == 0, err
    _validator(SCHEMA_OF[cmd]).validate(json.loads(out))
    assert run(cmd, *args, "--json")[1] == out


def test_enumerate_lines_match_schema(tmp_path):
    target = tmp_path / "cat.jsonl"
    assert run("enumerate", "--b2", 5, "--out", target)[0] == 0
    lines = target.read_text(encoding="utf-8").splitlines()
    v = _validator("catalog_record")
    for line in lines:
        v.validate(json.loads(line))
    code, out, _ = run("enumerate", "--b2", 5)
    assert code == 0 and out.splitlines() == lines


def test_document_schemas_accept_corpus():
    germ_v, fg_v = _validator("germ_document"), _validator("fg_document")
    for f in sorted(CORPUS.glob("*.json")):
        doc = json.loads(f.read_text(encoding="utf-8"))
        (fg_v if "variant" in doc else germ_v).validate(doc)


# ---- worked examples on the command line ------------------------------------

def test_dls_witness():
    assert run("dls", "-f", corpus("witness_4_3_3.json")) == (0, "[3,4,2,2]\n", "")


def test_enumerate_b2_2():
    code, out, _ = run("enumerate", "--b2", 2)
    lines = out.splitlines()
    assert code == 0 and len(lines) == 1
    assert json.loads(lines[0])["dls"] == [3, 2]


def test_conjugate_non_separation_pair():
    code, out, _ = run(
        "conjugate", "-f", corpus("nonsep_k3_lambda2_phi1.json"), "-g", corpus("nonsep_k3_lambda2_phi2.json")
    )
    assert (code, out) == (0, "conjugate via e=0 (after purification)\n")
    code, out, _ = run(
        "conjugate", "-f", corpus("nonsep_k3_lambda1_phi1.json"), "-g", corpus("nonsep_k3_lambda1_phi2.json")
    )
    assert (code, out) == (0, "not conjugate\n")


def test_probe_text_and_verdict():
    code, out, _ = run("probe", "-f", corpus("fg4_probe_k6.json"), "--json")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "DIVERGES" and rep["d"] == 3 and rep["n_prime"] == 3


DOT_3422 = """\
// cyclic order: n0 -> n1 -> n2 -> n3 -> n0
// b2 = 4
graph dual {
  n0 [label="-3"];
  n1 [label="-4"];
  n2 [label="-2"];
  n3 [label="-2"];
  n0 -- n1;
  n0 -- n2;
  n0 -- n3;
  n2 -- n3;
}
"""

DOT_32 = """\
// cyclic order: n0 -> n1 -> n0
// b2 = 2
graph dual {
  n0 [label="-3"];
  n1 [label="-2"];
  n0 -- n0;
  n0 -- n1;
}
"""


def test_dot_snapshots(tmp_path):
    assert run("graph", "-f", corpus("witness_4_3_3.json"), "--dot") == (0, DOT_3422, "")
    assert run("graph", "--seq", "3,2", "--dot") == (0, DOT_32, "")
    target = tmp_path / "g.dot"
    assert run("graph", "--seq", "3,4,2,2", "--dot", "--out", target)[0] == 0
    assert target.read_text(encoding="utf-8") == DOT_3422


def test_emit_dot_rejects_empty():
    with pytest.raises(UsageError):
        emit_dot(None)
    assert emit_dot(dual_graph([3, 2])) == DOT_32


# ---- exit codes ----------------------------------------------------------------

def test_invalid_document_exits_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"k": 4, "s": 3, "lambda": {"coords": ["1"]}, "coeffs": {"3": {"coords": ["2"]}}}))
    code, out, err = run("dls", "-f", bad)
    assert code == 2 and out == ""
    assert "$.coeffs.3" in err and "c_j=1" in err
    bad.write_text("{oops")
    assert run("type", "-f", bad)[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["dls", "--bogus"],
        ["dls"],
        ["enumerate"],
        ["enumerate", "--b2", 1],
        ["dls", "--seq", "2,2,2"],
        ["dls", "--seq", "a,b"],
        ["tau", "-f", corpus("fg2_k6.json"), "--d", 4],
        ["fg2germ", "-f", corpus("witness_4_3_3.json")],
        ["probe", "-f", corpus("fg4_probe_k6.json"), "--w", "abc"],
        ["germ2fg", "-f", corpus("example_b.json"), "-g"],
    ],
)
def test_usage_errors_exit_2(argv):
    code, out, err = run(*argv)
    assert code == 2
    assert err.startswith("germlab: ")


def test_missing_file_exits_1(tmp_path):
    code, _, err = run("dls", "-f", tmp_path / "nope.json")
    assert code == 1 and "I/O error" in err


def test_stdin_input():
    text = (CORPUS / "minimal_2_1_1.json").read_text(encoding="utf-8")
    res = subprocess.run(
        [sys.executable, "-m", "germlab", "dls", "-f", "-"], input=text, capture_output=True, text=True
    )
    assert (res.returncode, res.stdout) == (0, "[3,2]\n")


@pytest.mark.parametrize("name", sorted(p.name for p in CORPUS.glob("*.json")))
def test_subprocess_byte_identical(name):
    # real processes, two runs each, compared byte for byte
    cmd = "probe" if "fg4" in name else "invariants"
    argv = [sys.executable, "-m", "germlab", cmd, "-f", str(CORPUS / name), "--json"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second
    _validator(SCHEMA_OF[cmd]).validate(json.loads(first))


def test_console_script_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("[]")
    res = subprocess.run([sys.executable, "-m", "germlab", "type", "-f", str(bad)], capture_output=True)
    assert res.returncode == 2
