"""End-to-end: generate CSVs with the smx CLI, then render figures.

These tests exercise the CSV contract only; the primary library is never
imported here.
"""

import csv
import json
import shutil
import subprocess

import pytest

from smx_figures import FigureSpec, MissingColumn, SchemaMismatch, render
from smx_figures.cli import main as figures_main

SMX = shutil.which("smx")

pytestmark = pytest.mark.skipif(SMX is None, reason="smx CLI not on PATH")

TR_MODEL = {"kind": "time_reversal", "V0": 1.0, "a": 1.0, "b": 0.5}
PARITY_MODEL = {"kind": "parity", "V0": 1.0, "a": 0.5, "b": 0.5}


def run_smx(subcommand, config, tmp_path, out_name, extra=()):
    cfg = tmp_path / f"{out_name}.json"
    cfg.write_text(json.dumps(config))
    out = tmp_path / f"{out_name}.csv"
    proc = subprocess.run(
        [SMX, subcommand, "--config", str(cfg), "--out", str(out), *extra],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return out


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_trajectory_figure(tmp_path):
    csv_path = run_smx("trace", {
        "model": TR_MODEL,
        "sweep": {"parameter": "V0", "start": -0.5, "stop": 0.5, "steps": 21},
    }, tmp_path, "trace")
    # sanity on the input: a bound pole exists on the attractive side
    classes = {row[4] for row in read_rows(csv_path)[1:]}
    assert "bound" in classes
    out = render(FigureSpec("trajectories", (str(csv_path),), str(tmp_path / "fig3.png")))
    assert (tmp_path / "fig3.png").stat().st_size > 0
    assert out.endswith("fig3.png")


def test_coefficient_figure_parity_peak(tmp_path):
    csv_path = run_smx("amplitudes", {
        "model": PARITY_MODEL,
        "grid": {"p_min": 0.1, "p_max": 3.0, "steps": 120},
    }, tmp_path, "amps")
    rows = read_rows(csv_path)
    header = rows[0]
    p_idx, tr_idx = header.index("p [p0]"), header.index("|Tr|^2")
    p = [float(r[p_idx]) for r in rows[1:]]
    t_right = [float(r[tr_idx]) for r in rows[1:]]
    # the near-axis resonance above p = p0 pushes right transmission past
    # unity; the global maximum sits in that window, after the deep dip
    i = t_right.index(max(t_right))
    assert 1.0 < p[i] < 2.2
    assert max(t_right) > 1.0
    render(FigureSpec("coefficients", (str(csv_path),), str(tmp_path / "fig8.png")))
    assert (tmp_path / "fig8.png").stat().st_size > 0


def test_eigenvalue_figure(tmp_path):
    csv_path = run_smx("eigenvalues", {
        "model": TR_MODEL,
        "grid": {"p_min": 0.05, "p_max": 4.0, "steps": 80},
    }, tmp_path, "ev")
    render(FigureSpec("eigenvalues", (str(csv_path),), str(tmp_path / "fig5.png")))
    assert (tmp_path / "fig5.png").stat().st_size > 0


def test_pole_plane_figure(tmp_path):
    csv_path = run_smx("poles", {"model": TR_MODEL}, tmp_path, "poles")
    rows = read_rows(csv_path)
    classes = [r[4] for r in rows[1:]]
    assert classes.count("virtual") == 2  # virtual pair + res/antires pair
    render(FigureSpec("pole-plane", (str(csv_path),), str(tmp_path / "plane.png")))
    assert (tmp_path / "plane.png").stat().st_size > 0


def test_pole_plane_empty_list(tmp_path):
    path = tmp_path / "empty.csv"
    header = "Re q [p0],Im q [p0],Re E [V0],Im E [V0],class,residual,multiple\n"
    path.write_text(header)
    render(FigureSpec("pole-plane", (str(path),), str(tmp_path / "empty.png")))
    assert (tmp_path / "empty.png").stat().st_size > 0


def test_rerender_is_byte_identical(tmp_path):
    csv_path = run_smx("poles", {"model": TR_MODEL}, tmp_path, "poles")
    a = render(FigureSpec("pole-plane", (str(csv_path),), str(tmp_path / "a.png")))
    b = render(FigureSpec("pole-plane", (str(csv_path),), str(tmp_path / "b.png")))
    assert (tmp_path / "a.png").read_bytes() == (tmp_path / "b.png").read_bytes()


def test_schema_mismatch(tmp_path):
    path = tmp_path / "wrong.csv"
    path.write_text("foo,bar\n1,2\n")
    with pytest.raises(SchemaMismatch):
        render(FigureSpec("eigenvalues", (str(path),), str(tmp_path / "x.png")))


def test_missing_column(tmp_path):
    path = tmp_path / "partial.csv"
    path.write_text("p [p0],|Tl|^2,|Tr|^2,|Rl|^2,|Rr|^2\n")  # header only is fine
    render(FigureSpec("coefficients", (str(path),), str(tmp_path / "ok.png")))
    bad = tmp_path / "bad.csv"
    bad.write_text("p [p0],|Tl|^2,|Tr|^2,|Rl|^2,|Rr|^2\n0.5,1,1,0,0\n")
    # drop a required column
    worse = tmp_path / "worse.csv"
    worse.write_text("p [p0],|Tl|^2\n0.5,1\n")
    with pytest.raises((SchemaMismatch, MissingColumn)):
        render(FigureSpec("coefficients", (str(worse),), str(tmp_path / "y.png")))


def test_unknown_kind():
    with pytest.raises(SchemaMismatch):
        FigureSpec("kernel", ("x.csv",), "x.png")


def test_cli_wrapper(tmp_path):
    csv_path = run_smx("poles", {"model": TR_MODEL}, tmp_path, "poles")
    rc = figures_main(["pole-plane", "--csv", str(csv_path),
                       "--out", str(tmp_path / "cli.png")])
    assert rc == 0
    rc = figures_main(["pole-plane", "--csv", str(tmp_path / "nope.csv"),
                       "--out", str(tmp_path / "cli2.png")])
    assert rc == 1
