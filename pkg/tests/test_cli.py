"""End-to-end CLI tests, all through subprocess so the exit-code contract
and byte-level stdout are what a shell user would see."""

import json
import subprocess
import sys

import pytest

from kummer import jsonio
from kummer.groups import FgAbGroup, Homomorphism
from kummer.matrices import IntMatrix
from kummer.sequences import check_exact


def run_cli(argv, stdin=""):
    return subprocess.run([sys.executable, "-m", "kummer", *argv],
                          input=stdin, capture_output=True, text=True,
                          timeout=120)


def impure_doc() -> str:
    z2, z4 = FgAbGroup.cyclic(2), FgAbGroup.cyclic(4)
    seq = check_exact(Homomorphism(z2, z4, IntMatrix.from_rows([[2]])),
                      Homomorphism(z4, z2, IntMatrix.from_rows([[1]])))
    return jsonio.dumps(jsonio.document(jsonio.encode_seq(seq)))


def split_doc() -> str:
    from kummer.sequences import split_sequence

    seq = split_sequence(FgAbGroup.cyclic(2), FgAbGroup.cyclic(3))
    return jsonio.dumps(jsonio.document(jsonio.encode_seq(seq)))


def test_snf_exit_zero_and_diagonal():
    doc = jsonio.dumps(jsonio.document(
        jsonio.encode_matrix(IntMatrix.from_rows([[2, 4], [6, 8]]))))
    res = run_cli(["snf"], doc)
    assert res.returncode == 0, res.stderr
    out = json.loads(res.stdout)
    assert out["diagonal"] == ["2", "4"]


def test_group_verb_reports_invariants():
    doc = jsonio.dumps(jsonio.document(
        jsonio.encode_group(FgAbGroup.of_orders(2, 12))))
    res = run_cli(["group"], doc)
    assert res.returncode == 0
    out = json.loads(res.stdout)
    assert out["invariant_factors"] == ["2", "12"]
    assert out["order"] == "24"


def test_seq_check_impure_exits_one_with_witness():
    res = run_cli(["seq-check"], impure_doc())
    assert res.returncode == 1
    out = json.loads(res.stdout)
    assert out["exact"] is True
    assert out["pure"] is False
    assert out["split"] is False
    assert "witness" in out


def test_seq_check_split_exits_zero_with_section():
    res = run_cli(["seq-check"], split_doc())
    assert res.returncode == 0
    out = json.loads(res.stdout)
    assert out["split"] is True
    assert "section" in out


def test_seq_split_on_impure_input_exits_one():
    res = run_cli(["seq-split"], impure_doc())
    assert res.returncode == 1


def test_malformed_json_is_a_schema_error():
    res = run_cli(["group"], "{\n  oops\n")
    assert res.returncode == 2
    out = json.loads(res.stdout)
    assert "invalid JSON at line 2" in out["error"]["message"]


def test_bad_field_reports_its_path():
    res = run_cli(["snf"], json.dumps(
        {"schema": 1, "rows": 1, "cols": 2, "data": ["1", "x"]}))
    assert res.returncode == 2
    out = json.loads(res.stdout)
    assert "$.data[1]" in out["error"]["message"]


def test_generate_then_split_pipeline():
    gen = run_cli(["tower-generate", "--sigma", '{"p":2,"r":1,"M":[[3]]}',
                   "--n", "3"])
    assert gen.returncode == 0, gen.stderr
    split = run_cli(["tower-split"], gen.stdout)
    assert split.returncode == 0, split.stdout
    out = json.loads(split.stdout)
    assert "section" in out


def test_tower_validate_reports_violations(tmp_path):
    from kummer.fixtures import invalid_tower

    doc = jsonio.dumps(jsonio.document(jsonio.encode_tower(invalid_tower(2))))
    path = tmp_path / "tower.json"
    path.write_text(doc)
    res = run_cli(["tower-validate", "--input", str(path)])
    assert res.returncode == 1
    out = json.loads(res.stdout)
    assert out["valid"] is False
    assert all(v["check"] == "inclusion" for v in out["violations"])
    split = run_cli(["tower-split", "--input", str(path)])
    assert split.returncode == 2
    assert json.loads(split.stdout)["error"]["kind"] == "TowerInvalidError"


def test_counterexample_verb_certificate():
    res = run_cli(["counterexample", "--p", "2", "--depth", "3"])
    assert res.returncode == 0
    out = json.loads(res.stdout)
    assert out["valid"] is True
    assert out["p"] == 2
    assert all(bad == 0 for _, bad in out["heights_cross_checked"])


def test_limit_split_families():
    stab = run_cli(["limit-split"], json.dumps(
        {"family": "stabilizing", "p": 2, "case": 2, "level": 2}))
    assert stab.returncode == 0, stab.stdout
    div = run_cli(["limit-split"], json.dumps(
        {"family": "divisible", "p": 2, "case": 1, "level": 3}))
    assert div.returncode == 0, div.stdout
    assert json.loads(div.stdout)["case"] == 1
    ce = run_cli(["limit-split"], json.dumps(
        {"family": "counterexample", "p": 2, "case": 1, "level": 3}))
    assert ce.returncode == 2
    err = json.loads(ce.stdout)["error"]
    assert err["kind"] == "EvidenceError"
    assert err["check"] == "V4"


def test_dual_verb_on_a_group():
    doc = json.dumps({"schema": 1, "kind": "group", "value": json.loads(
        jsonio.dumps(jsonio.encode_group(FgAbGroup.of_orders(2, 4))))})
    res = run_cli(["dual"], doc)
    assert res.returncode == 0
    out = json.loads(res.stdout)
    assert out["kind"] == "group"


def test_gmod_split_verbs():
    from kummer.cohomology import regular_extension_fixture

    seq = regular_extension_fixture(3)
    doc = {
        "schema": 1,
        "p": 3,
        "A": {"group": jsonio.encode_group(seq.A.group), "d": 3,
              "sigma": jsonio.encode_matrix(seq.A.sigma.matrix)},
        "B": {"group": jsonio.encode_group(seq.B.group), "d": 3,
              "sigma": jsonio.encode_matrix(seq.B.sigma.matrix)},
        "C": {"group": jsonio.encode_group(seq.C.group), "d": 3,
              "sigma": jsonio.encode_matrix(seq.C.sigma.matrix)},
        "f": jsonio.encode_matrix(seq.f.hom.matrix),
        "g": jsonio.encode_matrix(seq.g.hom.matrix),
    }
    res = run_cli(["gmod-split"], json.dumps(doc))
    assert res.returncode == 1
    out = json.loads(res.stdout)
    assert out["equivariant"] is False
    assert out["plain"] is True
    coh = run_cli(["gmod-cohomology"], json.dumps(doc["B"]))
    assert coh.returncode == 0


def test_demos_are_deterministic():
    for name in ("main-lemma", "counterexample", "dual-lemma",
                 "direct-limit", "chris"):
        first = run_cli(["demo", name])
        second = run_cli(["demo", name])
        assert first.returncode == 0, (name, first.stdout, first.stderr)
        assert first.stdout == second.stdout
        assert json.loads(first.stdout)


def test_demo_chris_small_prime():
    res = run_cli(["demo", "chris", "--p", "3"])
    assert res.returncode == 0
    out = json.loads(res.stdout)
    assert out["h1_invariants"] == ["3"]
    assert out["valid"] is True


def test_pretty_and_timing_flags():
    doc = jsonio.dumps(jsonio.document(
        jsonio.encode_group(FgAbGroup.cyclic(6))))
    plain = run_cli(["group"], doc)
    pretty = run_cli(["group", "--pretty"], doc)
    assert json.loads(plain.stdout) == json.loads(pretty.stdout)
    assert pretty.stdout.count("\n") > plain.stdout.count("\n")
    timed = run_cli(["group", "--timing"], doc)
    assert "timing" in json.loads(timed.stdout)


def test_unknown_verb_is_a_usage_error():
    res = run_cli(["frobnicate"])
    assert res.returncode == 2
    assert res.stdout == ""
