import hashlib
import json
import os
import subprocess
from pathlib import Path

import pytest

BIN = os.environ.get("ZPFLAB_BIN", "zpflab")

SMALL = {
    "fringe": {"shots": 20000, "points": 32},
    "splitter": {"shots": 20000, "points": 16},
    "dipole-flux": {"nodes": 2400, "radius": 11.0},
    "filament-solve": {},
    "filament-propagate": {"grid": {"n": 128, "extent_decay_lengths": 16}, "steps": 40, "snapshot_every": 20},
    "toroid": {"points": 16},
    "planck": {"points": 16},
    "quantum": {},
}


def command(name):
    return name.split("-", 1) if name.startswith("filament-") else [name]


def run(tmp_path, name, params=None, extra=(), tag="run", top=None):
    cfg = dict(top or {})
    if params is not None:
        cfg["parameters"] = params
    cfg_path = tmp_path / f"{tag}.json"
    cfg_path.write_text(json.dumps(cfg))
    out = tmp_path / tag
    proc = subprocess.run(
        [BIN, *command(name), "--config", str(cfg_path), "--out", str(out), *extra],
        capture_output=True,
        text=True,
    )
    report_path = out / "run_report.json"
    report = json.loads(report_path.read_text()) if report_path.exists() else None
    return proc, out, report


def digests(out):
    return {
        p.name: hashlib.sha256(p.read_bytes()).hexdigest()
        for p in sorted(out.iterdir())
        if p.name != "run_report.json"
    }


def test_fringe_csv_header(tmp_path):
    proc, out, report = run(tmp_path, "fringe", SMALL["fringe"])
    assert proc.returncode == 0, proc.stderr
    lines = (out / "fringe.csv").read_text().splitlines()
    assert lines[0] == "delta,mean,stderr,oracle"
    assert len(lines) == 33
    assert report["status"] == "ok"
    assert {o["file"] for o in report["outputs"]} >= {"fringe.csv", "fringe_signal.dat"}


def test_fringe_series_covers_two_periods(tmp_path):
    proc, out, _ = run(tmp_path, "fringe", SMALL["fringe"])
    assert proc.returncode == 0
    rows = [list(map(float, line.split())) for line in (out / "fringe_signal.dat").read_text().splitlines()]
    assert all(len(r) == 2 for r in rows)
    deltas = [r[0] for r in rows]
    step = deltas[1] - deltas[0]
    assert deltas[-1] - deltas[0] + step >= 2 * 2.0 - 1e-12


def test_unknown_key_is_rejected(tmp_path):
    proc, _, report = run(tmp_path, "fringe", {"Zed": 1})
    assert proc.returncode == 2
    assert "Zed" in proc.stderr
    assert report["status"] == "error"
    assert report["error"]["class"] == "config"
    assert "Zed" in report["error"]["message"]


def test_unknown_nested_and_top_level_keys(tmp_path):
    proc, _, _ = run(tmp_path, "toroid", {"medium": {"Zed": 1}}, tag="nested")
    assert proc.returncode == 2 and "parameters.medium.Zed" in proc.stderr
    proc, _, _ = run(tmp_path, "planck", {}, tag="top", top={"Zed": 2})
    assert proc.returncode == 2 and "Zed" in proc.stderr


def test_range_and_parse_errors(tmp_path):
    proc, _, report = run(tmp_path, "splitter", {"reflectance": 1.5})
    assert proc.returncode == 2 and report["error"]["class"] == "config"
    bad = tmp_path / "broken.json"
    bad.write_text("{not json")
    proc = subprocess.run([BIN, "planck", "--config", str(bad), "--out", str(tmp_path / "b")], capture_output=True)
    assert proc.returncode == 2
    proc = subprocess.run([BIN, "planck", "--no-such-flag"], capture_output=True)
    assert proc.returncode == 2
    proc, _, _ = run(tmp_path, "fringe", {}, tag="mismatch", top={"experiment": "toroid"})
    assert proc.returncode == 2


def test_solver_error_still_reports(tmp_path):
    proc, _, report = run(tmp_path, "filament-solve", {"peak": 1e-7})
    assert proc.returncode == 1
    assert report["status"] == "error"
    assert report["error"]["class"] == "no-solution"
    assert report["exit_code"] == 1


def test_model_error_without_fixed_point(tmp_path):
    proc, _, report = run(tmp_path, "toroid", {"points": 8, "medium": {"s_sat": 1.0}})
    assert proc.returncode == 1
    assert report["error"]["class"] == "no-solution"
    # the response table is written before the fixed-point search
    assert any(o["file"] == "toroid_response.csv" for o in report["outputs"])


def test_config_round_trip(tmp_path):
    proc, _, report = run(tmp_path, "toroid", SMALL["toroid"], extra=["--deterministic"])
    assert proc.returncode == 0, proc.stderr
    echo = report["config"]
    path = tmp_path / "echo.json"
    path.write_text(json.dumps(echo))
    out2 = tmp_path / "again"
    proc = subprocess.run(
        [BIN, "toroid", "--config", str(path), "--out", str(out2), "--deterministic"], capture_output=True, text=True
    )
    assert proc.returncode == 0, proc.stderr
    again = json.loads((out2 / "run_report.json").read_text())["config"]
    echo["output"] = again["output"]
    assert again == echo


def test_seed_flag_overrides_config(tmp_path):
    _, a, ra = run(tmp_path, "fringe", SMALL["fringe"], extra=["--seed", "11"], tag="a", top={"seed": 4})
    _, b, rb = run(tmp_path, "fringe", SMALL["fringe"], tag="b", top={"seed": 11})
    assert ra["config"]["seed"] == 11
    assert digests(a) == digests(b)
    _, c, _ = run(tmp_path, "fringe", SMALL["fringe"], tag="c", top={"seed": 12})
    assert digests(a) != digests(c)


@pytest.mark.parametrize("name", sorted(SMALL))
def test_determinism_across_runs_and_threads(tmp_path, name):
    runs = []
    for i, threads in enumerate(["1", "1", "4"]):
        proc, out, report = run(
            tmp_path, name, SMALL[name], extra=["--seed", "7", "--deterministic", "--threads", threads], tag=f"r{i}"
        )
        assert proc.returncode == 0, proc.stderr
        assert "wall_time_s" not in report
        runs.append((digests(out), [(o["file"], o["sha256"]) for o in report["outputs"]]))
    assert runs[0] == runs[1] == runs[2]


def test_filament_dump_and_header(tmp_path):
    proc, out, report = run(tmp_path, "filament-propagate", SMALL["filament-propagate"])
    assert proc.returncode == 0, proc.stderr
    header = dict(
        line.split(" = ", 1) for line in (out / "field_0001.hdr").read_text().splitlines() if " = " in line
    )
    n = int(header["n"])
    assert header["dtype"] == "float64"
    assert (out / header["data"]).stat().st_size == n * n * 2 * 8
    assert report["summary"]["max_step_power_change"] < 1e-8


def test_toroid_outputs(tmp_path):
    proc, out, report = run(tmp_path, "toroid", SMALL["toroid"])
    assert proc.returncode == 0, proc.stderr
    assert (out / "toroid_response.csv").read_text().splitlines()[0] == "curvature,gamma"
    assert (out / "toroid_solutions.csv").read_text().splitlines()[0] == "m,R0,Lambda,energy,freq_shift"
    marker = (out / "toroid_fixed_point.txt").read_text()
    assert "curvature = " in marker
    assert report["summary"]["energy_increasing"] is True
    assert report["summary"]["max_winding_residual"] < 1e-9


def test_other_headers(tmp_path):
    expected = {
        "splitter": ("splitter.csv", "theta,out1,out2,product"),
        "dipole-flux": ("dipole_flux.csv", "case,phi_x,phi_y,phi_total,ratio"),
        "filament-solve": ("filament_summary.csv", "peak,power,k,q,dimensionless_power,residual"),
        "planck": ("planck.csv", "temperature,x,first_law,second_law,classical"),
        "quantum": ("quantum.csv", "frequency,energy,action,action_over_h"),
    }
    for name, (file, header) in expected.items():
        proc, out, _ = run(tmp_path, name, SMALL[name], tag=name)
        assert proc.returncode == 0, proc.stderr
        text = (out / file).read_text()
        assert text.splitlines()[0] == header
        assert text.endswith("\n")
