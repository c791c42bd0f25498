"""Command-line front end: config ingestion and CSV/JSON emission.

Exit codes: 0 success, 1 configuration error, 2 numerical failure (the
failing operation is named on stderr).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .amplitudes import amplitudes, check_generalized_unitarity, check_pam_relations, s_eigenvalues
from .core import Polynomial, RationalFunction
from .errors import SmxError
from .models import make_model
from .poles import bound_state_census, check_mirror_symmetry, find_poles, trace_trajectory
from .pseudosym import (
    CODES,
    build_commuting_B,
    build_eta,
    build_tau,
    commutation_residual,
    random_symmetric_hamiltonian,
    verify_conjugate_pairing,
)
from .symmetry import CODE_TO_LABEL, classify

SUBCOMMANDS = ("amplitudes", "eigenvalues", "poles", "trace", "classify", "verify", "pseudosym")


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as configuration errors (exit 1)."""

    def error(self, message):
        raise ConfigError(message)


def _build_cli():
    parser = _Parser(prog="smx", description=__doc__.splitlines()[0])
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", required=True, help="JSON config file")
    parser.add_argument("--out", help="output path (default: config value or stdout)")
    parser.add_argument("--format", choices=("csv", "json"), dest="fmt")
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--tol", type=float, default=None)
    parser.add_argument("--seed", type=int, default=None)
    return parser


def _poly_from_config(pairs):
    return Polynomial([complex(re, im) for re, im in pairs])


def _rational_from_config(spec):
    return RationalFunction(_poly_from_config(spec["num"]), _poly_from_config(spec["den"]))


def _model_from_config(cfg):
    spec = cfg.get("model")
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("config needs a 'model' object with a 'kind'")
    kind = spec["kind"]
    V0 = float(spec.get("V0", 1.0))
    kw = {}
    for key in ("a", "b"):
        if key in spec:
            kw[key] = float(spec[key])
    for key in ("phi_p", "chi_p"):
        if key in spec:
            kw[key] = _rational_from_config(spec[key])
    try:
        if V0 == 0:
            base = make_model(kind, 1.0, **kw)
            return dataclasses.replace(base, V0=0.0, _cache={})
        return make_model(kind, V0, **kw)
    except (SmxError, ValueError, KeyError) as exc:
        raise ConfigError(f"invalid model: {exc}") from exc


def _grid_from_config(cfg, default_steps=100):
    grid = cfg.get("grid", {})
    p_min = float(grid.get("p_min", 0.05))
    p_max = float(grid.get("p_max", 5.0))
    steps = int(grid.get("steps", default_steps))
    if steps < 2 or p_max <= p_min or p_min <= 0:
        raise ConfigError("grid needs 0 < p_min < p_max and steps >= 2")
    return np.linspace(p_min, p_max, steps)


def _f(x):
    return f"{float(x):.17g}"


def _emit(columns, rows, meta, fmt, out_path):
    if fmt == "csv":
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join(
                v if isinstance(v, str) else _f(v) for v in row
            ))
        text = "\n".join(lines) + "\n"
    else:
        records = [
            {col: (val if isinstance(val, str) else float(val))
             for col, val in zip(columns, row)}
            for row in rows
        ]
        text = json.dumps({"metadata": meta, "rows": records}, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _metadata(cfg, task):
    model = cfg.get("model", {})
    return {
        "tool": "smx",
        "version": __version__,
        "task": task,
        "model": {k: model.get(k) for k in ("kind", "V0", "a", "b") if k in model},
        "units": {"momentum": "p0", "length": "L0", "energy": "V0"},
    }


def _amplitude_columns(prefix):
    cols = []
    for name in ("Tl", "Tr", "Rl", "Rr"):
        cols += [f"Re {prefix}{name}", f"Im {prefix}{name}"]
    cols += [f"|{prefix}{name}|^2" for name in ("Tl", "Tr", "Rl", "Rr")]
    return cols


def _amplitude_row(amp):
    row = []
    for v in (amp.Tl, amp.Tr, amp.Rl, amp.Rr):
        row += [v.real, v.imag]
    row += [abs(v) ** 2 for v in (amp.Tl, amp.Tr, amp.Rl, amp.Rr)]
    return row


def _map_ordered(fn, items, threads):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _run_amplitudes(cfg, args):
    model = _model_from_config(cfg)
    grid = _grid_from_config(cfg)

    def row(p):
        d = amplitudes(model, p)
        h = amplitudes(model, p, hatted=True)
        return [p] + _amplitude_row(d) + _amplitude_row(h)

    rows = _map_ordered(row, grid, args.threads)
    columns = ["p [p0]"] + _amplitude_columns("") + _amplitude_columns("hat ")
    return columns, rows


def _run_eigenvalues(cfg, args):
    model = _model_from_config(cfg)
    grid = _grid_from_config(cfg)

    def row(p):
        ev = s_eigenvalues(amplitudes(model, p))
        return [p, ev.S1.real, ev.S1.imag, abs(ev.S2 - 1.0)]

    rows = _map_ordered(row, grid, args.threads)
    return ["p [p0]", "Re S1", "Im S1", "S2 residual"], rows


def _run_poles(cfg, args):
    model = _model_from_config(cfg)
    rows = [
        [rec.q.real, rec.q.imag, rec.energy.real, rec.energy.imag,
         rec.pole_class.value, rec.residual, int(rec.multiplicity_flag)]
        for rec in find_poles(model)
    ]
    columns = ["Re q [p0]", "Im q [p0]", "Re E [V0]", "Im E [V0]",
               "class", "residual", "multiple"]
    return columns, rows


def _run_trace(cfg, args):
    model = _model_from_config(cfg)
    sweep = cfg.get("sweep")
    if not isinstance(sweep, dict):
        raise ConfigError("trace needs a 'sweep' object (parameter, start, stop, steps)")
    try:
        name = sweep["parameter"]
        start, stop = float(sweep["start"]), float(sweep["stop"])
        steps = int(sweep["steps"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad sweep: {exc}") from exc
    if steps < 2:
        raise ConfigError("sweep needs steps >= 2")
    traj = trace_trajectory(model, name, start, stop, steps)
    half_step = abs(stop - start) / (steps - 1) / 2
    rows = []
    for value, records in traj.samples:
        for track, rec in enumerate(records):
            hit = any(
                abs(v - value) <= half_step and track in pair
                for v, pair in traj.collisions
            )
            rows.append([value, track, rec.q.real, rec.q.imag,
                         rec.pole_class.value, int(hit)])
    columns = [f"{name}", "track", "Re q [p0]", "Im q [p0]", "class", "collision"]
    return columns, rows


def _run_classify(cfg, args):
    model = _model_from_config(cfg)
    threshold = args.tol if args.tol is not None else float(
        cfg.get("tolerances", {}).get("symmetry_threshold", 1e-8)
    )
    report = classify(model, threshold=threshold)
    rows = [
        [code, report.residuals[code], int(report.verdicts[code])]
        for code in CODE_TO_LABEL
    ]
    return ["code", "residual", "verdict"], rows


def _run_pseudosym(cfg, args):
    spec = cfg.get("pseudosym", {})
    n = int(spec.get("n", 8))
    n_seeds = int(spec.get("seeds", 20))
    base_seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    codes = spec.get("codes", list(CODES))
    rows = []
    for code in codes:
        if code not in CODES:
            raise ConfigError(f"pseudosym code must be one of {CODES}, got {code!r}")
        for k in range(n_seeds):
            seed = base_seed + k
            system = random_symmetric_hamiltonian(code, n, seed)
            H, norm = system.H, np.linalg.norm(system.H)
            tau = build_tau(system).matrix
            eta = build_eta(system)
            tau_res = np.linalg.norm(tau @ np.conj(H) - H.conj().T @ tau) / norm
            eta_res = np.linalg.norm(eta @ H - H.conj().T @ eta) / norm
            b_res = commutation_residual(system, build_commuting_B(system))
            rows.append([code, n, seed, int(verify_conjugate_pairing(system)),
                         b_res, tau_res, eta_res])
    columns = ["code", "n", "seed", "pairing", "B residual", "tau residual", "eta residual"]
    return columns, rows


def _run_verify(cfg, args):
    model = _model_from_config(cfg)
    grid = _grid_from_config(cfg, default_steps=50)
    tol = args.tol
    suites = []

    def add(name, residual, threshold):
        threshold = tol if tol is not None else threshold
        suites.append([name, float(residual), int(residual < threshold)])

    amps = [(amplitudes(model, p), p) for p in grid]
    add("sum_rule",
        max(abs(a.Tl + a.Tr - a.Tl * a.Tr + a.Rl * a.Rr - 1.0) for a, _ in amps), 1e-9)
    add("s2", max(abs(s_eigenvalues(a).S2 - 1.0) for a, _ in amps), 1e-10)
    add("unitarity",
        max(check_generalized_unitarity(model, p).max() for _, p in amps), 1e-9)
    rng = np.random.default_rng(args.seed if args.seed is not None else 0)
    qs = rng.uniform(0.2, 2.0, 10) + 1j * rng.uniform(-0.4, 0.4, 10)
    add("pam", max(check_pam_relations(model, q).max() for q in qs), 1e-8)
    _, mismatch = check_mirror_symmetry(find_poles(model))
    add("mirror_symmetry", mismatch, 1e-9)
    census = bound_state_census(find_poles(model))
    add("bound_uniqueness", 0.0 if census.unique else 1.0, 0.5)
    pairing_ok = all(
        verify_conjugate_pairing(random_symmetric_hamiltonian(code, 8, s))
        for code in CODES for s in range(5)
    )
    add("pairing", 0.0 if pairing_ok else 1.0, 0.5)
    return ["suite", "residual", "pass"], suites


_RUNNERS = {
    "amplitudes": _run_amplitudes,
    "eigenvalues": _run_eigenvalues,
    "poles": _run_poles,
    "trace": _run_trace,
    "classify": _run_classify,
    "verify": _run_verify,
    "pseudosym": _run_pseudosym,
}


def main(argv=None) -> int:
    parser = _build_cli()
    try:
        args = parser.parse_args(argv)
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
        task = args.subcommand
        columns, rows = _RUNNERS[task](cfg, args)
    except ConfigError as exc:
        print(f"smx: config error: {exc}", file=sys.stderr)
        return 1
    except SmxError as exc:
        print(f"smx: {args.subcommand} failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2

    fmt = args.fmt or cfg.get("output", {}).get("format", "csv")
    out_path = args.out or cfg.get("output", {}).get("path")
    _emit(columns, rows, _metadata(cfg, task), fmt, out_path)
    if task == "verify" and any(row[2] == 0 for row in rows):
        failing = [row[0] for row in rows if row[2] == 0]
        print(f"smx: verify failed: {', '.join(failing)}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
