"""Render figures from the CSV schemas emitted by the smx CLI.

Each figure kind corresponds to one subcommand's output:
  trajectories <- `smx trace`, coefficients <- `smx amplitudes`,
  eigenvalue curves <- `smx eigenvalues`, pole-plane <- `smx poles`.
The renderer never talks to the library directly; the CSV is the contract.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .errors import MissingColumn, SchemaMismatch  # noqa: E402

KINDS = ("trajectories", "coefficients", "eigenvalues", "pole-plane")

# fixed columns per schema; the trace schema's first column carries the
# swept parameter's name, so it is validated positionally
TRACE_TAIL = ["track", "Re q [p0]", "Im q [p0]", "class", "collision"]
EIGEN_COLUMNS = ["p [p0]", "Re S1", "Im S1", "S2 residual"]
POLES_COLUMNS = ["Re q [p0]", "Im q [p0]", "Re E [V0]", "Im E [V0]",
                 "class", "residual", "multiple"]
COEFF_REQUIRED = ["p [p0]", "|Tl|^2", "|Tr|^2", "|Rl|^2", "|Rr|^2"]

CLASS_STYLE = {
    "bound": dict(marker="^", color="tab:blue"),
    "virtual": dict(marker="s", color="tab:gray"),
    "resonance": dict(marker="o", color="tab:red"),
    "antiresonance": dict(marker="o", color="tab:orange"),
    "complex_energy_bound_pair": dict(marker="D", color="tab:purple"),
}

STYLE = {
    "figure.figsize": (6.0, 4.5),
    "figure.dpi": 120,
    "savefig.dpi": 120,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 10,
}


@dataclass(frozen=True)
class FigureSpec:
    kind: str  # one of KINDS
    inputs: tuple  # CSV path(s)
    output: str  # image path (.png / .svg)
    xlim: tuple = None
    ylim: tuple = None
    title: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaMismatch(f"unknown figure kind {self.kind!r}; expected {KINDS}")
        object.__setattr__(self, "inputs", tuple(self.inputs))


def read_table(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SchemaMismatch(f"{path}: empty file")
    header, body = rows[0], rows[1:]
    return header, body


def _column(header, body, name, numeric=True):
    try:
        idx = header.index(name)
    except ValueError:
        raise MissingColumn(f"column {name!r} not found in {header}") from None
    vals = [row[idx] for row in body]
    return np.array([float(v) for v in vals]) if numeric else vals


def _check_schema(header, expected, path):
    for name in expected:
        if name not in header:
            raise SchemaMismatch(f"{path}: header {header} lacks {name!r}")


def _apply_limits(ax, spec):
    if spec.xlim is not None:
        ax.set_xlim(*spec.xlim)
    if spec.ylim is not None:
        ax.set_ylim(*spec.ylim)
    if spec.title:
        ax.set_title(spec.title)


def _render_trajectories(spec, ax):
    header, body = read_table(spec.inputs[0])
    if len(header) != 6 or header[1:] != TRACE_TAIL:
        raise SchemaMismatch(f"{spec.inputs[0]}: not a trace table: {header}")
    track = _column(header, body, "track").astype(int)
    re_q = _column(header, body, "Re q [p0]")
    im_q = _column(header, body, "Im q [p0]")
    collide = _column(header, body, "collision").astype(int)
    for t in np.unique(track):
        sel = track == t
        ax.plot(re_q[sel], im_q[sel], "-", lw=1.0, alpha=0.7)
        ax.plot(re_q[sel], im_q[sel], ".", ms=3)
    hits = collide == 1
    if np.any(hits):
        ax.plot(re_q[hits], im_q[hits], "x", color="k", ms=10, mew=2,
                label="collision")
        ax.legend(loc="best")
    _decorate_plane(ax)
    ax.set_xlabel("Re q / p0")
    ax.set_ylabel("Im q / p0")


def _render_coefficients(spec, ax):
    header, body = read_table(spec.inputs[0])
    _check_schema(header, COEFF_REQUIRED, spec.inputs[0])
    p = _column(header, body, "p [p0]")
    for name, style in (("|Tl|^2", "-"), ("|Tr|^2", "--"),
                        ("|Rl|^2", "-."), ("|Rr|^2", ":")):
        ax.plot(p, _column(header, body, name), style, label=name)
    ax.legend(loc="best")
    ax.set_xlabel("p / p0")
    ax.set_ylabel("coefficient")


def _render_eigenvalues(spec, ax):
    header, body = read_table(spec.inputs[0])
    if header != EIGEN_COLUMNS:
        raise SchemaMismatch(f"{spec.inputs[0]}: not an eigenvalue table: {header}")
    p = _column(header, body, "p [p0]")
    ax.plot(p, _column(header, body, "Re S1"), "-", label="Re S1")
    ax.plot(p, _column(header, body, "Im S1"), "--", label="Im S1")
    ax.axhline(1.0, color="k", lw=0.8, alpha=0.5)
    ax.legend(loc="best")
    ax.set_xlabel("p / p0")
    ax.set_ylabel("S1")


def _decorate_plane(ax):
    ax.axhline(0.0, color="k", lw=0.8)
    ax.axvline(0.0, color="k", lw=0.8)
    ax.axhspan(0.0, ax.get_ylim()[1] if ax.get_ylim()[1] > 0 else 1.0,
               color="tab:blue", alpha=0.06)


def _render_pole_plane(spec, ax):
    header, body = read_table(spec.inputs[0])
    if header != POLES_COLUMNS:
        raise SchemaMismatch(f"{spec.inputs[0]}: not a pole table: {header}")
    re_q = _column(header, body, "Re q [p0]")
    im_q = _column(header, body, "Im q [p0]")
    classes = _column(header, body, "class", numeric=False)
    for cls, style in CLASS_STYLE.items():
        sel = [i for i, c in enumerate(classes) if c == cls]
        label = cls.replace("_", " ")
        if sel:
            ax.plot(re_q[sel], im_q[sel], linestyle="none", ms=9,
                    label=label, **style)
        else:
            ax.plot([], [], linestyle="none", ms=9, label=label, **style)
    ax.legend(loc="upper right", fontsize=8)
    _decorate_plane(ax)
    ax.set_xlabel("Re q / p0")
    ax.set_ylabel("Im q / p0")


_RENDERERS = {
    "trajectories": _render_trajectories,
    "coefficients": _render_coefficients,
    "eigenvalues": _render_eigenvalues,
    "pole-plane": _render_pole_plane,
}


def render(spec: FigureSpec) -> str:
    """Render the figure described by spec; returns the output path."""
    if not spec.inputs:
        raise SchemaMismatch("figure spec needs at least one input CSV")
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        try:
            _RENDERERS[spec.kind](spec, ax)
            _apply_limits(ax, spec)
            fig.savefig(spec.output, metadata={"Software": "smx-figures"})
        finally:
            plt.close(fig)
    return spec.output
