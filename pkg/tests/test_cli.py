import json
import math
import os

import pytest

from slipline_lab.cli import EXIT_CONFIG, EXIT_DOMAIN, EXIT_OK, EXIT_VERIFY_FAILED, main


def run(tmp_path, *argv):
    return main(list(argv))


def test_sample_lattice_and_header(tmp_path):
    out = tmp_path / "block.csv"
    rc = main(["sample", "--solution", "prandtl", "--region", "-2,2,-0.99,0.99",
               "--n", "10", "--out", str(out)])
    assert rc == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "x,y,sigma,theta,sigma_x,sigma_y,tau_xy,xi,eta"
    assert len(lines) == 101


def test_sample_row_count_contract(tmp_path):
    out = tmp_path / "block100.csv"
    rc = main(["sample", "--solution", "prandtl", "--region", "-2,2,-0.99,0.99",
               "--n", "100", "--out", str(out)])
    assert rc == EXIT_OK
    assert len(out.read_text().splitlines()) == 100 * 100 + 1


def test_sampled_wall_traction(tmp_path):
    out = tmp_path / "wall.csv"
    rc = main(["sample", "--solution", "prandtl", "--region", "-1,1,0.999999999,1.0",
               "--n", "5", "--out", str(out)])
    assert rc == EXIT_OK
    rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
    tau = [float(r[6]) for r in rows]
    assert all(abs(t - 0.5) < 1e-8 for t in tau)


def test_determinism_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        rc = main(["sample", "--solution", "nadai_vortex", "--polar",
                   "--region", "1.1,2.5,0,1.2", "--n", "12", "--out", str(path)])
        assert rc == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_sliplines_csv_and_svg(tmp_path):
    csv_out = tmp_path / "tc.csv"
    rc = main(["sliplines", "--solution", "nadai_two_circles", "--curves", "3",
               "--arclen", "0.6", "--out", str(csv_out)])
    assert rc == EXIT_OK
    lines = csv_out.read_text().splitlines()
    assert lines[0] == "curve_id,s,x,y,sigma,theta,xi,eta"
    assert len(lines) > 100

    svg_out = tmp_path / "tc.svg"
    rc = main(["sliplines", "--solution", "nadai_two_circles", "--curves", "3",
               "--arclen", "0.6", "--with-envelopes", "--format", "svg",
               "--out", str(svg_out)])
    assert rc == EXIT_OK
    text = svg_out.read_text()
    assert text.startswith("<svg")
    assert 'class="fam1"' in text and 'class="fam2"' in text and 'class="envelope"' in text


def test_envelope_outputs(tmp_path):
    out = tmp_path / "env.csv"
    rc = main(["envelope", "--solution", "spiral", "--out", str(out)])
    assert rc == EXIT_OK
    assert out.read_text().splitlines()[0] == "curve_id,t,x,y"

    rc = main(["envelope", "--solution", "nadai_two_circles", "--numeric",
               "--family", "1", "--out", str(out)])
    assert rc == EXIT_OK
    rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
    for r in rows:
        rad = math.hypot(float(r[2]), float(r[3]))
        assert abs(rad - 1.0) < 1e-6


def test_streamlines_and_velocity(tmp_path):
    out = tmp_path / "st.csv"
    rc = main(["streamlines", "--solution", "nadai", "--curves", "3",
               "--arclen", "0.5", "--out", str(out)])
    assert rc == EXIT_OK
    assert out.read_text().splitlines()[0] == "curve_id,s,x,y,u,v,D,diss_ok"

    out2 = tmp_path / "vel.json"
    rc = main(["velocity", "--solution", "quadratic_edge",
               "--params", '{"C1": 3.0, "C2": 3.141592653589793}',
               "--n", "8", "--format", "json", "--out", str(out2)])
    assert rc == EXIT_OK
    data = json.loads(out2.read_text())
    assert data["columns"] == ["x", "y", "u", "v", "D", "diss_ok"]


def test_exit_codes(tmp_path):
    assert main(["sample", "--solution", "unobtainium"]) == EXIT_CONFIG
    assert main(["sample", "--solution", "prandtl", "--params", "{bad"]) == EXIT_CONFIG
    assert main(["sample", "--solution", "prandtl", "--region", "0,1,5,9"]) == EXIT_DOMAIN
    assert main(["streamlines", "--solution", "nadai", "--params", '{"zzz": 1}']) == EXIT_CONFIG


def test_verify_single_solution_and_perturbation(tmp_path):
    out = tmp_path / "rep.json"
    rc = main(["verify", "--solution", "prandtl", "--out", str(out)])
    assert rc == EXIT_OK
    report = json.loads(out.read_text())
    assert report["all_passed"] is True
    for c in report["checks"]:
        assert set(c) >= {"name", "max_residual", "threshold", "passed"}

    rc = main(["verify", "--solution", "prandtl", "--perturb", "0.01", "--out", str(out)])
    assert rc == EXIT_VERIFY_FAILED
    report = json.loads(out.read_text())
    assert report["all_passed"] is False
