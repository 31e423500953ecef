import io
import json
import re
import sys
from pathlib import Path

import pytest

from omnilie.cli import COMMANDS, main
from omnilie.parser import parse_poly
from omnilie.poly import Patch

DOCS = Path(__file__).resolve().parent.parent / "documents"


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def report(argv, capsys):
    code, out, _ = run(argv, capsys)
    return code, json.loads(out)


def test_check_algebroid_so3_action(capsys):
    code, rep = report(["check-algebroid", DOCS / "so3_action.json"], capsys)
    assert code == 0
    assert rep["verdict"] == "pass"
    assert rep["tool"] == "omnilie" and rep["input_digest"].startswith("sha256:")
    names = [c["name"] for c in rep["checks"]]
    assert names == sorted(names)


def test_check_dirac_perturbed(capsys):
    code, rep = report(["check-dirac", DOCS / "perturbed.json"], capsys)
    assert code == 1
    bad = [c for c in rep["checks"] if not c["pass"]]
    assert bad[0]["tag"] == "fadf2"
    assert bad[0]["witness"]["sections"] == ["triple (1,2,3)"]


def test_from_dirac_lambda_sharp(capsys):
    code, out, err = run(["from-dirac", DOCS / "lambda_sharp.json"], capsys)
    assert code == 1
    assert "local Lie algebra only" in err
    rep = json.loads(out)
    assert rep["data"]["jacobi"] == {"lambda": [["0", "1"], ["-1", "0"]], "x": ["0", "0"]}
    assert rep["data"]["conditions"]["cond2-hom-anchor-zero"] is False


def test_round_trips_through_documents(capsys, tmp_path):
    code, rep = report(["to-dirac", DOCS / "so3_action.json"], capsys)
    assert code == 0
    pi_doc = tmp_path / "pi.json"
    pi_doc.write_text(json.dumps(rep["data"]["document"]))
    code, back = report(["from-dirac", pi_doc], capsys)
    assert code == 0
    original = json.loads((DOCS / "so3_action.json").read_text())
    assert back["data"]["document"]["algebroid"] == original["algebroid"]


def test_jacobi_commands(capsys):
    assert report(["check-jacobi", DOCS / "contact_line.json"], capsys)[0] == 0
    code, rep = report(["jacobi-to-dirac", DOCS / "poisson_plane.json"], capsys)
    assert code == 0
    assert rep["data"]["document"]["pi"]["encoding"] == "line"


def test_other_commands(capsys):
    assert report(["nijenhuis", DOCS / "nijenhuis_so3_point.json"], capsys)[0] == 0
    assert report(["nijenhuis", DOCS / "nijenhuis_so3_action.json"], capsys)[0] == 1
    assert report(["poisson-cotangent", DOCS / "symplectic_plane_bivector.json"], capsys)[0] == 0
    assert report(["weinstein", DOCS / "so3_point.json"], capsys)[0] == 0
    code, rep = report(["omni-check", DOCS / "omni_2_2.json", "--seed", "5"], capsys)
    assert code == 0 and rep["data"]["samples"] == 25


def test_sampled_mode_and_flags(capsys):
    code, rep = report(["check-dirac", DOCS / "perturbed.json", "--mode", "sampled",
                        "--degree-cap", "1", "--samples", "2"], capsys)
    assert code == 1
    assert rep["checks"][0]["name"] == "sampled-integrability"


def test_input_errors_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"patch": {"dim": 1, "rank": 1}, "jacobi": {"lambda": [["0"]], "x": ["x1 x1"]}}')
    code, out, err = run(["check-jacobi", bad], capsys)
    assert code == 2 and out == ""
    assert "1:4" in err and "implicit multiplication" in err
    assert run(["check-jacobi", tmp_path / "missing.json"], capsys)[0] == 2
    assert run(["check-dirac", DOCS / "so3_action.json"], capsys)[0] == 2
    bad.write_text("{not json")
    assert run(["check-algebroid", bad], capsys)[0] == 2
    bad.write_text('{"patch": {"dim": 0, "rank": 2}, "algebroid": {"structure": {"2,1": ["1", "0"]}}}')
    assert run(["check-algebroid", bad], capsys)[0] == 2
    bad.write_text('{"patch": {"dim": 0, "rank": 1}, "omni": {}, "poisson": {"bivector": []}}')
    assert run(["omni-check", bad], capsys)[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["no-such-command", "x"])
    assert info.value.code == 2


def test_stdin(capsys, monkeypatch):
    data = (DOCS / "so3_point.json").read_bytes()
    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(data)))
    code, rep = report(["check-algebroid", "-"], capsys)
    assert code == 0


def test_pretty_output(capsys):
    code, out, _ = run(["check-dirac", DOCS / "perturbed.json", "--pretty"], capsys)
    assert code == 1
    assert "[FAIL] fadf2" in out and "verdict: fail" in out


ALL_DOCS = sorted(DOCS.glob("*.json"))


@pytest.mark.parametrize("doc", ALL_DOCS, ids=lambda p: p.stem)
def test_exit_code_contract_and_determinism(doc, capsys):
    for cmd in COMMANDS:
        code, out, _ = run([cmd, doc, "--samples", "2", "--degree-cap", "1"], capsys)
        assert code in (0, 1, 2)
        if code == 2:
            assert out == ""
            continue
        rep = json.loads(out)
        assert (code == 0) == (rep["verdict"] == "pass")
        assert (rep["verdict"] == "pass") == all(c["pass"] for c in rep["checks"])
        again = run([cmd, doc, "--samples", "2", "--degree-cap", "1"], capsys)[1]
        assert again == out


@pytest.mark.parametrize("doc", ALL_DOCS, ids=lambda p: p.stem)
def test_printed_polynomials_reparse(doc, capsys):
    desc = json.loads(doc.read_text())["patch"]
    patch = Patch(desc["dim"], desc["rank"], tuple(desc.get("vars", [])))
    for cmd in COMMANDS:
        code, out, _ = run([cmd, doc, "--samples", "2", "--degree-cap", "1"], capsys)
        if code == 2:
            continue
        for c in json.loads(out)["checks"]:
            if c["witness"] and c["witness"]["defect"]:
                poly = re.sub(r"^\S+: ", "", c["witness"]["defect"])
                assert parse_poly(poly, patch).to_str(patch.var_names) == poly
