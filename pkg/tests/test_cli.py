"""End-to-end command-line behavior: outputs, artifacts, exit codes."""

import json
import math

import pytest

from invmet.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_metric_pinned_example(capsys, polydisc2_file):
    code, out, _ = run(capsys, "metric", "--domain", str(polydisc2_file),
                       "--at", "[0,0]", "--dir", "[1,1]")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "1.0"
    assert "closed-form|closed-form" in lines[1]
    assert "seed 0" in lines[1]


def test_metric_accepts_zoo_names(capsys):
    code, out, _ = run(capsys, "metric", "--domain", "polydisc2",
                       "--at", "[0,0]", "--dir", "[1,1]")
    assert code == 0 and out.splitlines()[0] == "1.0"


def test_metric_malformed_vector_is_exit_2(capsys, polydisc2_file):
    code, _, err = run(capsys, "metric", "--domain", str(polydisc2_file),
                       "--at", "[0,0", "--dir", "[1,1]")
    assert code == 2
    assert err.startswith("error: --at offset")
    assert "invalid JSON" in err


def test_missing_file_is_exit_2(capsys):
    code, _, err = run(capsys, "metric", "--domain", "/nope/missing.json",
                       "--at", "[0]", "--dir", "[1]")
    assert code == 2
    assert "no such file" in err


def test_malformed_spec_names_location(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "polyhedron", "dim": 2,
                               "faces": [{"type": "modulus", "coeffs": [1, 0]}],
                               "bounding_radius": 2.0}))
    code, _, err = run(capsys, "metric", "--domain", str(bad),
                       "--at", "[0,0]", "--dir", "[1,0]")
    assert code == 2
    assert "faces[0].bound" in err


def test_distance_conventions(capsys, polydisc2_file):
    code, out, _ = run(capsys, "distance", "--domain", str(polydisc2_file),
                       "--from", "[0,0]", "--to", "[0.3333333333333333,0]")
    assert code == 0
    assert float(out.splitlines()[0]) == pytest.approx(math.atanh(1 / 3), abs=1e-12)
    code, out, _ = run(capsys, "distance", "--domain", str(polydisc2_file),
                       "--from", "[0,0]", "--to", "[0.3333333333333333,0]",
                       "--convention", "paper")
    assert code == 0
    assert float(out.splitlines()[0]) == pytest.approx(2 * math.atanh(1 / 3), abs=1e-12)


def test_indicatrix_csv_artifact(capsys, tmp_path, polydisc2_file):
    out_file = tmp_path / "ind.csv"
    code, out, _ = run(capsys, "indicatrix", "--domain", str(polydisc2_file),
                       "--at", "[0,0]", "--directions", "16",
                       "--out", str(out_file))
    assert code == 0
    lines = out_file.read_text().splitlines()
    assert lines[0].startswith("# seed=0 convention=standard version=")
    assert lines[1] == "dir0_re,dir0_im,dir1_re,dir1_im,radius_lo,radius_hi"
    assert len(lines) == 2 + 16


def test_scale_audit_pass_and_family_mismatch(capsys, tmp_path):
    out_file = tmp_path / "audit.json"
    code, out, _ = run(capsys, "scale", "audit", "--domain", "ball2",
                       "--family", "ball", "--target", "[1,0]",
                       "--steps", "4", "--grid", "20", "--out", str(out_file))
    assert code == 0
    assert "PASS" in out
    assert json.loads(out_file.read_text())["summary"]["bounded"] is True
    code, _, err = run(capsys, "scale", "audit", "--domain", "ball2",
                       "--family", "polydisc", "--target", "[1,0]")
    assert code == 2
    assert err.startswith("error: --family:")


def test_boxlemma_stress_csv(capsys, tmp_path):
    out_file = tmp_path / "box.csv"
    code, out, _ = run(capsys, "boxlemma", "stress", "--dim", "2",
                       "--instances", "10", "--out", str(out_file))
    assert code == 0
    assert "zero violations" in out
    lines = out_file.read_text().splitlines()
    assert lines[0].startswith("# seed=0")
    assert lines[1] == "instance,r_1,slack"
    assert len(lines) == 2 + 10
    assert all(float(line.split(",")[2]) >= -1e-9 for line in lines[2:])


def test_dominate_halfplane_profile(capsys, tmp_path):
    out_file = tmp_path / "profile.json"
    code, out, _ = run(capsys, "dominate", "--domain", "halfplane",
                       "--radii", "0.25,1", "--samples", "256",
                       "--out", str(out_file))
    assert code == 0
    assert "PASS" in out
    payload = json.loads(out_file.read_text())
    assert payload["method"] == "apollonius-exact"
    assert payload["seed"] == 0
    assert payload["profile"]["passed"] is True
    assert len(payload["profile"]["cells"]) == 6


def test_dominate_convex_inline_points(capsys):
    code, out, _ = run(capsys, "dominate", "--domain", "polydisc2",
                       "--radii", "0.5", "--samples", "200",
                       "--points", "[[0,0],[[0.3,0.1],[-0.2,0]]]")
    assert code == 0
    payload = json.loads(out[:out.rindex("}") + 1])
    assert payload["method"] == "certified-sampling"
    assert payload["profile"]["passed"] is True


def test_dominate_rejects_bad_radii(capsys):
    code, _, err = run(capsys, "dominate", "--domain", "polydisc2",
                       "--radii", "0.5,-1")
    assert code == 2
    assert "radii must be positive" in err


def test_squeeze_cert_three_face(capsys):
    code, out, _ = run(capsys, "squeeze", "cert", "--domain", "three_face",
                       "--at", "[0,0]", "--samples", "1000")
    assert code == 0
    payload = json.loads(out)
    assert payload["r"] == pytest.approx(0.75, abs=1e-12)
    assert payload["R"] == pytest.approx(1.0, abs=1e-12)
    assert payload["c_bound"] == 1.0
    assert payload["validated"] is True
    assert "circular center" in payload["c_provenance"]


def test_squeeze_sweep_csv_and_threshold_failure(capsys, tmp_path):
    out_file = tmp_path / "sweep.csv"
    code, out, _ = run(capsys, "squeeze", "sweep", "--domain", "three_face",
                       "--corner", "[1,-1]", "--steps", "6",
                       "--out", str(out_file))
    assert code == 0
    lines = out_file.read_text().splitlines()
    assert lines[0].startswith("# seed=0")
    assert lines[1] == "k,dist_to_q,r,R,ratio,c_bound"
    assert len(lines) == 2 + 6
    code, _, err = run(capsys, "squeeze", "sweep", "--domain", "three_face",
                       "--corner", "[1,-1]", "--steps", "3",
                       "--threshold", "0.999999")
    assert code == 1
    witness = json.loads(err)
    assert witness["error"] == "sweep final ratio below threshold"


def test_squeeze_sweep_requires_polyhedron(capsys):
    code, _, err = run(capsys, "squeeze", "sweep", "--domain", "ball2",
                       "--corner", "[1,0]")
    assert code == 2
    assert "polyhedral" in err


def test_env_defaults_are_honored(capsys, monkeypatch, polydisc2_file):
    monkeypatch.setenv("INVMET_SEED", "9")
    monkeypatch.setenv("INVMET_DOMAIN", str(polydisc2_file))
    code, out, _ = run(capsys, "metric", "--at", "[0,0]", "--dir", "[1,1]")
    assert code == 0
    assert "seed 9" in out
    # explicit flag beats the environment
    code, out, _ = run(capsys, "metric", "--seed", "4",
                       "--at", "[0,0]", "--dir", "[1,1]")
    assert code == 0
    assert "seed 4" in out
