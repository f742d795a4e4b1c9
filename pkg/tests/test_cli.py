import json
import subprocess
import sys

import pytest

from psibench.cli import main
from psibench.documents import (algebra_to_document, dump_document,
                                module_to_document, presentation_to_document)
from psibench.models import (adem_failure_ring, dual_numbers_ring,
                             free_polynomial_presentation, power_tower_module)


@pytest.fixture
def docs(tmp_path):
    paths = {}
    for name, doc in [
        ("dual-k1.json", algebra_to_document(dual_numbers_ring(3, 1))),
        ("dual-k2.json", algebra_to_document(dual_numbers_ring(3, 2))),
        ("adem.json", algebra_to_document(adem_failure_ring(3))),
        ("tower.json", module_to_document(power_tower_module(3, 81))),
        ("pres.json", presentation_to_document(free_polynomial_presentation(3, 4))),
    ]:
        path = tmp_path / name
        dump_document(doc, str(path))
        paths[name] = str(path)
    return paths


def run_cli(args):
    proc = subprocess.run([sys.executable, "-m", "psibench", *args],
                          capture_output=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_verify_fail_and_pass(docs, capsys):
    rc = main(["verify", "--doc", docs["dual-k2.json"], "--trials", "3",
               "--seed", "0", "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 1
    assert out["classification"] == "pre-psi-p"
    p0 = next(v for v in out["verdicts"] if v["axiom"] == "p0-identity")
    assert p0["status"] == "FAIL" and p0["witness"]["class"] == "e"

    rc = main(["verify", "--doc", docs["dual-k1.json"], "--trials", "3",
               "--seed", "0", "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0 and out["classification"] == "psi-p-algebra"


def test_verify_axiom_subset(docs, capsys):
    rc = main(["verify", "--doc", docs["dual-k2.json"], "--axioms", "adem",
               "--trials", "2", "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0 and out["status"] == "PASS"
    rc = main(["verify", "--doc", docs["adem.json"], "--axioms", "adem,p0",
               "--trials", "2", "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 1
    adem = next(v for v in out["verdicts"] if v["axiom"] == "adem")
    assert adem["witness"]["i"] == 1 and adem["witness"]["j"] == 1


def test_atiyah_command(docs, capsys):
    rc = main(["atiyah", "--doc", docs["adem.json"], "--element", "x",
               "--level", "2", "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert out["layers"] == ["x", "0", "x^3"]
    assert out["psi"] == "x^3 + 9*x"
    assert out["exact"] is True


def test_steenrod_command(docs, capsys):
    rc = main(["steenrod", "--doc", docs["adem.json"], "-i", "2",
               "--element", "x", "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert out["result"] == "x^3" and out["result_degree"] == 12
    rc = main(["steenrod", "--doc", docs["adem.json"], "-i", "1",
               "--element", "x", "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert out["result"] == "0"


def test_lift_command_and_round_trip(docs, tmp_path, capsys):
    out_path = str(tmp_path / "lift.json")
    rc = main(["lift", "--doc", docs["pres.json"], "--out", out_path,
               "--format", "json"])
    report = json.loads(capsys.readouterr().out)
    assert rc == 0 and report["status"] == "CONSTRUCTED"
    assert report["census"]["0"] == 1

    rc1, out1, _ = run_cli(["verify", "--doc", out_path, "--trials", "2",
                            "--seed", "5", "--format", "json"])
    rc2, out2, _ = run_cli(["verify", "--doc", out_path, "--trials", "2",
                            "--seed", "5", "--format", "json"])
    assert rc1 == rc2 == 0
    assert out1 == out2
    parsed = json.loads(out1)
    assert parsed["classification"] == "psi-p-algebra"


def test_lift_rejects_invalid_presentation(tmp_path, capsys):
    pres = free_polynomial_presentation(2, 3)
    doc = presentation_to_document(pres)
    doc["relations"] = doc["relations"][:1]  # drop identifications
    path = tmp_path / "bad.json"
    dump_document(doc, str(path))
    rc = main(["lift", "--doc", str(path), "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 1 and out["status"] == "FAIL"


def test_fingen_command(docs, capsys):
    rc = main(["fingen", "--doc", docs["tower.json"], "--generators", "x",
               "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0 and out["status"] == "PASS"
    rc = main(["fingen", "--doc", docs["tower.json"], "--generators", "x^3",
               "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 1
    assert out["verdicts"][0]["witness"]["weight"] == 2


def test_input_errors_exit_two(docs, tmp_path, capsys):
    assert main(["verify", "--doc", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "nonsense"}')
    assert main(["verify", "--doc", str(bad)]) == 2
    assert main(["atiyah", "--doc", docs["adem.json"], "--element", "zzz"]) == 2
    assert main(["atiyah", "--doc", docs["adem.json"], "--element", "0"]) == 2
    assert main(["steenrod", "--doc", docs["adem.json"], "-i", "1",
                 "--element", "x + x^2"]) == 2  # inhomogeneous class
    capsys.readouterr()


def test_byte_identical_reports(docs):
    for args in (
        ["verify", "--doc", docs["dual-k2.json"], "--seed", "7", "--trials", "3",
         "--format", "json"],
        ["verify", "--doc", docs["dual-k2.json"], "--seed", "7", "--trials", "3",
         "--format", "text"],
        ["fingen", "--doc", docs["tower.json"], "--generators", "x",
         "--format", "json"],
        ["atiyah", "--doc", docs["adem.json"], "--element", "x + x^2",
         "--format", "json"],
    ):
        rc1, out1, err1 = run_cli(args)
        rc2, out2, err2 = run_cli(args)
        assert (rc1, out1, err1) == (rc2, out2, err2)


def test_text_format_mentions_status(docs, capsys):
    rc = main(["verify", "--doc", docs["dual-k1.json"], "--trials", "2",
               "--seed", "0"])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.startswith("psibench verify")
    assert "status: PASS" in out
