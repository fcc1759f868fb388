"""Command-line surface: flags, artifacts, exit codes."""

import json
import math
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from isocone.cli import render_section_svg, run_cli
from isocone.geometry import polygon_from_json
from isocone.metrics import delta_bounding_box, delta_membership_mask, monte_carlo_volume

FIXTURES = Path(__file__).parent / "fixtures"
HALF_PI = "1.5707963267948966"


class TestParamsAndVolume:
    def test_params_json(self, capsys):
        assert run_cli(["params", "--theta", HALF_PI]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["a"] == pytest.approx(0.4472136, abs=1e-7)
        assert data["b"] == pytest.approx(0.8944272, abs=1e-7)
        assert data["r_j"] == pytest.approx(0.4472136, abs=1e-7)

    def test_degrees_flag(self, capsys):
        assert run_cli(["params", "--theta", "90", "--degrees"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["theta"] == pytest.approx(math.pi / 2)

    def test_volume_json(self, capsys):
        assert run_cli(["volume", "--theta", HALF_PI]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["v_total"] == pytest.approx(0.455277, abs=1e-5)
        assert data["v1"] + data["v2"] + data["v3"] == pytest.approx(data["v_total"], abs=1e-12)

    def test_bad_theta_exit_2(self, capsys):
        assert run_cli(["params", "--theta", "0.5"]) == 2
        assert "aperture out of range" in capsys.readouterr().err


class TestUsageErrors:
    def test_unknown_command(self, capsys):
        assert run_cli(["frobnicate"]) == 2
        capsys.readouterr()

    def test_missing_required_flag(self, capsys):
        assert run_cli(["params"]) == 2
        capsys.readouterr()

    def test_unknown_flag(self, capsys):
        assert run_cli(["params", "--theta", HALF_PI, "--bogus"]) == 2
        capsys.readouterr()


class TestTable:
    def test_writes_csv(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert run_cli(["table", "--from", "1.0472", "--to", "3.1405", "--n", "50",
                        "--out", str(out)]) == 0
        raw = out.read_bytes().decode()
        lines = raw.split("\n")
        assert lines[0] == "theta,a,b,r_j,v1,v2,v3,v_total"
        assert len(lines) == 52 and lines[-1] == ""
        assert "\r" not in raw
        for line in lines[1:51]:
            theta, a, b, r_j, v1, v2, v3, total = map(float, line.split(","))
            assert abs(v1 + v2 + v3 - total) < 1e-12
            assert 0.0 < a <= b < 1.0

    def test_unwritable_path_exit_3(self, capsys):
        assert run_cli(["table", "--from", "1.1", "--to", "2.0", "--n", "3",
                        "--out", "/nonexistent-dir/x.csv"]) == 3
        capsys.readouterr()


class TestProfileSvg:
    def test_golden_file(self, tmp_path):
        out = tmp_path / "fig.svg"
        assert run_cli(["profile-svg", "--theta", HALF_PI, "--out", str(out)]) == 0
        assert out.read_bytes() == (FIXTURES / "section_pi_over_2.svg").read_bytes()

    def test_structure(self):
        svg = render_section_svg(math.pi / 2)
        root = ET.fromstring(svg)  # valid XML
        ns = {"svg": "http://www.w3.org/2000/svg"}
        paths = root.findall(".//svg:path", ns)
        assert [p.get("id") for p in paths] == ["cone-piece", "band-piece", "cap-piece"]
        line_ids = [line.get("id") for line in root.findall(".//svg:line", ns)]
        assert "plane-a" in line_ids and "plane-b" in line_ids

    def test_junction_planes_at_a_and_b(self):
        svg = render_section_svg(2.0)
        root = ET.fromstring(svg)
        ns = {"svg": "http://www.w3.org/2000/svg"}
        from isocone.closed_form import delta_params

        p = delta_params(2.0)
        for line in root.findall(".//svg:line", ns):
            if line.get("id") == "plane-a":
                assert float(line.get("x1")) == pytest.approx(p.a, abs=1e-6)
            if line.get("id") == "plane-b":
                assert float(line.get("x1")) == pytest.approx(p.b, abs=1e-6)


class TestSymmetrizeCommand:
    def test_random_polygon_roundtrip(self, tmp_path, capsys):
        out = tmp_path / "sym.json"
        rc = run_cli(["symmetrize", "--random", "16", "--polygon-seed", "4",
                      "--phi", "0.7", "--out", str(out)])
        assert rc == 0
        polygon = polygon_from_json(out.read_text())
        assert len(polygon) >= 3
        capsys.readouterr()

    def test_file_input(self, tmp_path, capsys):
        src = tmp_path / "poly.json"
        src.write_text('{"vertices": [[0,0],[1,0],[1,1]]}')
        assert run_cli(["symmetrize", "--in", str(src), "--phi", HALF_PI]) == 0
        polygon = polygon_from_json(capsys.readouterr().out)
        assert set(map(tuple, polygon.vertices.tolist())) == {(0.0, 0.0), (1.0, -0.5), (1.0, 0.5)}

    def test_needs_input(self, capsys):
        assert run_cli(["symmetrize", "--phi", "0.3"]) == 2
        capsys.readouterr()


class TestConvergeCommand:
    def test_trace_and_sidecar(self, tmp_path):
        out = tmp_path / "trace.csv"
        rc = run_cli(["converge", "--random", "32", "--polygon-seed", "1",
                      "--steps", "20", "--seed", "2", "--out", str(out)])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "step,area,hausdorff_to_disk"
        assert len(lines) == 22
        meta = json.loads((tmp_path / "trace.csv.json").read_text())
        assert meta["seed"] == 2 and meta["steps"] == 20

    def test_deterministic(self, tmp_path):
        outs = []
        for name in ("a.csv", "b.csv"):
            out = tmp_path / name
            run_cli(["converge", "--random", "16", "--polygon-seed", "3",
                     "--steps", "10", "--seed", "7", "--out", str(out)])
            outs.append(out.read_text())
        assert outs[0] == outs[1]


class TestMcVolumeCommand:
    def test_estimate_and_determinism(self, capsys):
        argv = ["mc-volume", "--theta", HALF_PI, "--n", "100000", "--seed", "9"]
        assert run_cli(argv) == 0
        first = json.loads(capsys.readouterr().out)
        assert run_cli(argv) == 0
        second = json.loads(capsys.readouterr().out)
        assert first == second
        assert abs(first["value"] - 0.455277) <= 5.0 * first["std_error"]

    def test_cli_matches_library(self, capsys):
        assert run_cli(["mc-volume", "--theta", HALF_PI, "--n", "50000", "--seed", "2"]) == 0
        data = json.loads(capsys.readouterr().out)
        theta = math.pi / 2
        est = monte_carlo_volume(
            lambda pts: delta_membership_mask(theta, pts),
            delta_bounding_box(theta), 50000, 2,
        )
        assert data["value"] == est.value


class TestSearchCommands:
    def test_optimize_artifacts(self, tmp_path):
        out = tmp_path / "result.json"
        log = tmp_path / "run.csv"
        rc = run_cli(["optimize", "--theta", HALF_PI, "--knots", "16",
                      "--budget", "2000", "--seed", "3",
                      "--out", str(out), "--log", str(log)])
        assert rc == 0
        data = json.loads(out.read_text())
        assert data["feasible"] is True
        assert len(data["profile"]["knots"]) == 16
        log_lines = log.read_text().splitlines()
        assert log_lines[0] == "iteration,volume,step_size"
        assert len(log_lines) > 1

    def test_wall_artifacts(self, tmp_path):
        out = tmp_path / "wall.json"
        rc = run_cli(["wall", "--theta", HALF_PI, "--knots", "16",
                      "--budget", "2000", "--seed", "3", "--out", str(out)])
        assert rc == 0
        data = json.loads(out.read_text())
        assert data["feasible"] is True
        assert data["best_volume"] <= 0.327825 + 1e-6


class TestVerifyCommand:
    def test_quick_suite_green(self, capsys):
        assert run_cli(["verify", "--quick"]) == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out
        assert out.count("PASS") >= 8
