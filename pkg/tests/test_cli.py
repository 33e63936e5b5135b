import json
import math
import subprocess
import sys

import pytest

from irskit.cli import main


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_design_prints_period_and_angle(capsys, tmp_path):
    out_path = tmp_path / "design.json"
    code, out, _ = run_cli(
        ["design", "--freq-ghz", "5", "--angle-deg", "30", "--cells", "10",
         "--out", str(out_path)],
        capsys,
    )
    assert code == 0
    assert "P = 119.92 mm" in out
    assert "theta_r = 30.00 deg" in out
    assert "k_parallel/k0 = 0.5000" in out
    doc = json.loads(out_path.read_text())
    assert doc["n_cells"] == 10
    assert len(doc["patch_sizes_mm"]) == 10


def test_design_reference(capsys, tmp_path):
    out_path = tmp_path / "ref.json"
    code, out, _ = run_cli(["design", "--reference-design", "--out", str(out_path)],
                           capsys)
    assert code == 0
    doc = json.loads(out_path.read_text())
    assert doc["period_mm"] == pytest.approx(120.0)
    assert sorted(set(doc["patch_sizes_mm"])) == [16.4, 19.1, 19.6, 20.1, 21.3]
    assert doc["phases_deg"] is None


def test_design_specular_is_domain_error(capsys, tmp_path):
    code, _, err = run_cli(
        ["design", "--angle-deg", "0", "--out", str(tmp_path / "x.json")], capsys
    )
    assert code == 1
    assert "specular requires no gradient" in err


def test_usage_error_exit_code():
    proc = subprocess.run(
        [sys.executable, "-m", "irskit.cli", "design", "--angle-deg"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2


def test_pattern_summary_and_csv(capsys, tmp_path):
    design = tmp_path / "design.json"
    run_cli(["design", "--out", str(design)], capsys)
    out_csv = tmp_path / "pattern.csv"
    code, out, _ = run_cli(
        ["pattern", "--design", str(design), "--theta-i-deg", "0",
         "--tiles", "10", "--out", str(out_csv)],
        capsys,
    )
    assert code == 0
    summary = [l for l in out.splitlines() if l.startswith("peak_deg=")][0]
    peak = float(summary.split("peak_deg=")[1].split(",")[0])
    assert peak == pytest.approx(30.0, abs=2.0)
    header = out_csv.read_text().splitlines()[0]
    assert header == "theta_deg, magnitude_db, phase_deg"


def test_pattern_oblique_15(capsys, tmp_path):
    design = tmp_path / "design.json"
    run_cli(["design", "--out", str(design)], capsys)
    code, out, _ = run_cli(
        ["pattern", "--design", str(design), "--theta-i-deg", "15",
         "--tiles", "10", "--out", str(tmp_path / "p.csv")],
        capsys,
    )
    peak = float(out.split("peak_deg=")[1].split(",")[0])
    assert peak == pytest.approx(49.0, abs=2.0)


def test_pattern_uniform_reference_specular(capsys, tmp_path):
    design = tmp_path / "design.json"
    run_cli(["design", "--out", str(design)], capsys)
    code, out, _ = run_cli(
        ["pattern", "--design", str(design), "--theta-i-deg", "12",
         "--uniform-reference", "--out", str(tmp_path / "u.csv")],
        capsys,
    )
    peak = float(out.split("peak_deg=")[1].split(",")[0])
    assert peak == pytest.approx(12.0, abs=0.11)


def test_sweep_csv(capsys, tmp_path):
    design = tmp_path / "design.json"
    run_cli(["design", "--out", str(design)], capsys)
    out_csv = tmp_path / "eff.csv"
    code, _, _ = run_cli(
        ["sweep", "--design", str(design), "--band", "4.9:5.1", "--points", "3",
         "--out", str(out_csv)],
        capsys,
    )
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "freq_ghz, ratio, ratio_db"
    assert len(lines) == 4
    ratio = float(lines[2].split(", ")[1])
    assert 0.8 < ratio <= 1.0


def test_replica_argmax_near_30(capsys, tmp_path):
    out_csv = tmp_path / "replica.csv"
    code, _, _ = run_cli(
        ["replica", "--band", "5.16:5.20", "--points", "3", "--s", "1.5",
         "--pt-dbm", "14", "--out", str(out_csv)],
        capsys,
    )
    assert code == 0
    rows = [l.split(", ") for l in out_csv.read_text().splitlines()[1:]]
    by_freq = {}
    for f, ang, p in rows:
        by_freq.setdefault(f, []).append((float(p), float(ang)))
    for f, entries in by_freq.items():
        _, best_ang = max(entries)
        assert best_ang == pytest.approx(30.0, abs=2.0)


def test_coverage_csv(capsys, tmp_path):
    design = tmp_path / "design.json"
    run_cli(["design", "--out", str(design)], capsys)
    scene = {
        "frequency_ghz": 5.0,
        "tx": {"position_m": [0.4, 0.8], "power_dbm": 14.0},
        "obstacles": [[[2.0, 0.0], [2.0, 1.6]]],
        "panels": [{"center_m": [1.7, 5.6], "normal": [-0.26, -0.97],
                    "tiles": 2, "design": "design.json"}],
        "rx_grid": {"origin_m": [2.2, 0.2], "extent_m": [1.6, 1.2],
                    "resolution_m": 0.2},
    }
    scene_path = tmp_path / "scene.json"
    scene_path.write_text(json.dumps(scene))
    out_csv = tmp_path / "cov.csv"
    code, _, _ = run_cli(["coverage", str(scene_path), "--out", str(out_csv)], capsys)
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "x_m, y_m, power_dbm"
    assert len(lines) == 1 + 8 * 6


def test_mask_reference(capsys, tmp_path):
    out_svg = tmp_path / "mask.svg"
    code, out, _ = run_cli(
        ["mask", "--reference-design", "--rows", "12", "--periods", "2",
         "--out", str(out_svg)],
        capsys,
    )
    assert code == 0
    assert "sheet = 240.0 mm x 360.0 mm" in out
    assert out_svg.read_text().count("<rect") == 240


def test_mask_needs_a_design():
    proc = subprocess.run(
        [sys.executable, "-m", "irskit.cli", "mask"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2


def test_outputs_reproducible(capsys, tmp_path):
    d1, d2 = tmp_path / "a.json", tmp_path / "b.json"
    run_cli(["design", "--out", str(d1)], capsys)
    run_cli(["design", "--out", str(d2)], capsys)
    assert d1.read_bytes() == d2.read_bytes()
    c1, c2 = tmp_path / "a.csv", tmp_path / "b.csv"
    run_cli(["pattern", "--design", str(d1), "--tiles", "4", "--out", str(c1)], capsys)
    run_cli(["pattern", "--design", str(d1), "--tiles", "4", "--out", str(c2)], capsys)
    assert c1.read_bytes() == c2.read_bytes()


def test_help_documents_units():
    for cmd in ("design", "pattern", "sweep", "replica", "coverage", "mask"):
        proc = subprocess.run(
            [sys.executable, "-m", "irskit.cli", cmd, "--help"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        text = proc.stdout.lower()
        assert any(unit in text for unit in ("ghz", "mm", "deg", "dbm", "meters"))


def test_plot_writes_png(capsys, tmp_path):
    design = tmp_path / "design.json"
    run_cli(["design", "--out", str(design), "--plot"], capsys)
    assert (tmp_path / "design.png").exists()
    out_csv = tmp_path / "pattern.csv"
    run_cli(["pattern", "--design", str(design), "--tiles", "4",
             "--out", str(out_csv), "--plot"], capsys)
    png = tmp_path / "pattern.png"
    assert png.exists()
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
