"""Command-line surface: simulate, verify, sweep, equilibrium, plotdata.

Exit codes are stable: 0 success, 2 config error, 3 runtime failure,
4 verification failure (verdicts are still written). Every output file is
written to a temporary name and atomically renamed, so readers never see a
partial file, and identical inputs produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import checkers as ck
from . import equilibria as eq
from .config import (
    ConfigError,
    RunConfig,
    SweepConfig,
    load_json,
    parse_run_config,
    parse_sweep_config,
)
from .dynamics import ModelParams, Trajectory, integrate
from .influence import profile_from_spec
from .verify import SCENARIOS, run_checks

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_VERIFY = 4

PLOT_KINDS = ("angles-vs-time", "order-parameter", "pairwise-log", "phase-diagram")
CONVERGED_SENTINEL = float("nan")  # chord below floor: log is emitted as nan


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: Path, obj) -> None:
    atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def trajectory_csv(traj: Trajectory) -> str:
    d = traj.ambient_dim - 1
    cols = ["t", "i"] + [f"x{k}" for k in range(d + 1)] + ["phi_i", "Ic", "R"]
    lines = [",".join(cols)]
    for k, t in enumerate(traj.times):
        ic = traj.mean_influence[k]
        r = traj.order_parameter[k]
        for i in range(traj.n):
            row = (
                [_fmt(t), str(i)]
                + [_fmt(v) for v in traj.states[k, i]]
                + [_fmt(traj.phis[k, i]), _fmt(ic), _fmt(r)]
            )
            lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _run_gamma(cfg: RunConfig, traj: Trajectory) -> float:
    """Cap radius for per-run checks: the configured one, or the smallest cap
    containing the initial data."""
    if cfg.initial_spec.get("kind") == "random-in-cap":
        return float(cfg.initial_spec["gamma"])
    return float(traj.phis[0].max())


def apply_run_checks(cfg: RunConfig, params: ModelParams, traj: Trajectory) -> list[ck.Verdict]:
    """Evaluate the config's statement ids against this one trajectory.

    Statements that need their own experiment design (paired runs, transforms,
    root solving) come back vacuous with a note rather than silently dropped.
    """
    gamma = _run_gamma(cfg, traj)
    out: list[ck.Verdict] = []
    for cid in cfg.checks:
        if cid == "norm-conservation":
            drift = traj.max_step_norm_drift
            v = ck.Verdict(cid, 0.0, drift, 1e-12, drift <= 1e-12)
        elif cid == "lemma4.1":
            v = ck.angle_inequality_check(params, traj)
        elif cid == "prop4.1":
            v = ck.cap_invariance_check(params, gamma, traj)
        elif cid == "lemma4.2":
            v = ck.cap_entrapment_check(params, traj, gamma)
        elif cid == "prop4.2":
            v = ck.tail_angle_bound_check(params, traj, gamma)
        elif cid == "thm5.1":
            v = ck.pairwise_monotonicity_check(traj, cfg.profile.support_beta)
            if not params.identical:
                v.vacuous = True
                v.note = "precondition unmet: generators are not identical"
        elif cid == "thm5.2":
            v = ck.aggregation_check(params, gamma, traj)
        elif cid == "thm5.3":
            if params.identical:
                res = ck.dichotomy_classify(traj, cfg.profile)
                v = ck.Verdict(
                    cid,
                    0.0,
                    0.0 if res.r_monotone else 1.0,
                    1e-7,
                    res.r_monotone,
                    vacuous=not res.e3_satisfied,
                    note=f"classified {res.outcome}",
                )
            else:
                v = ck.Verdict(cid, math.nan, math.nan, math.nan, False, vacuous=True,
                               note="precondition unmet: generators are not identical")
        elif cid == "cor5.1":
            v = ck.product_limit_check(traj, cfg.profile)
        else:
            v = ck.Verdict(cid, math.nan, math.nan, math.nan, False, vacuous=True,
                           note="not applicable to a single trajectory; run `winfree verify`")
        v.statement = cid
        out.append(v)
    return out


def run_summary(cfg: RunConfig, traj: Trajectory) -> dict:
    params = cfg.build_params()
    chord_slope = None
    if traj.n > 1:
        chord_slope = ck.fit_window_slope(
            traj.times, traj.max_pairwise_chord, traj.final_time / 4.0, traj.final_time
        )
    dichotomy = None
    if params.identical:
        res = ck.dichotomy_classify(traj, cfg.profile)
        dichotomy = {
            "outcome": res.outcome,
            "r_monotone": res.r_monotone,
            "e3_satisfied": res.e3_satisfied,
            "window_max_influence": res.window_max_influence,
            "window_min_phi": res.window_min_phi,
        }
    return {
        "schema": 1,
        "config": cfg.to_canonical_dict(),
        "final_time": traj.final_time,
        "final_state": [[float(v) for v in row] for row in traj.final_state],
        "final_order_parameter": float(traj.order_parameter[-1]),
        "final_mean_influence": float(traj.mean_influence[-1]),
        "max_phi": float(traj.phis.max()),
        "max_step_norm_drift": traj.max_step_norm_drift,
        "fitted_rates": {"max_chord_log_slope": chord_slope},
        "dichotomy": dichotomy,
        "checks": [_jsonable(v.to_dict()) for v in apply_run_checks(cfg, params, traj)],
    }


def cmd_simulate(args) -> int:
    cfg = parse_run_config(load_json(args.config))
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    out = Path(args.out if args.out is not None else (cfg.out or "."))
    traj = integrate(cfg.build_params(), cfg.build_initial(), cfg.dt, cfg.T, cfg.record_every())
    atomic_write_text(out / "trajectory.csv", trajectory_csv(traj))
    write_json(out / "summary.json", run_summary(cfg, traj))
    return EXIT_OK


def cmd_verify(args) -> int:
    doc = load_json(args.config)
    if not isinstance(doc, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    schema = doc.get("schema")
    if schema != 1:
        raise ConfigError("schema", f"unsupported schema version {schema!r}")
    ids = doc.get("checks")
    if not isinstance(ids, list) or not ids:
        raise ConfigError("checks", "must be a nonempty list of statement ids")
    for c in ids:
        if c not in SCENARIOS:
            raise ConfigError("checks", f"unknown statement id {c!r}")
    seed = doc.get("seed", 0)
    if args.seed is not None:
        seed = args.seed
    if not isinstance(seed, int):
        raise ConfigError("seed", "seed must be an integer")
    overrides = doc.get("overrides", {})
    if not isinstance(overrides, dict):
        raise ConfigError("overrides", "must be an object keyed by statement id")
    for key in overrides:
        if key not in ids:
            raise ConfigError(f"overrides.{key}", "override for a statement id not in checks")
    try:
        verdicts = run_checks(ids, seed, overrides)
    except ValueError as exc:
        raise ConfigError("overrides", str(exc)) from exc
    all_pass = all(v.passed for v in verdicts if not v.vacuous)
    payload = {
        "schema": 1,
        "seed": seed,
        "checks": [_jsonable(v.to_dict()) for v in verdicts],
        "all_pass": all_pass,
    }
    write_json(Path(args.out or ".") / "verdicts.json", payload)
    for v in verdicts:
        status = "vacuous" if v.vacuous else ("pass" if v.passed else "FAIL")
        print(f"{status:8s} {v.statement}")
    return EXIT_OK if all_pass else EXIT_VERIFY


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, (np.floating, np.integer)):
        return _jsonable(obj.item())
    return obj


def _sweep_cell(sweep: SweepConfig, cell: dict) -> dict:
    row = {"index": cell["index"], "params": cell["params"], "seed": cell["seed"]}
    try:
        cfg = sweep.cell_config(cell)
        params = cfg.build_params()
        traj = integrate(params, cfg.build_initial(), cfg.dt, cfg.T, cfg.record_every())
        chord_slope = None
        if traj.n > 1:
            chord_slope = ck.fit_window_slope(
                traj.times, traj.max_pairwise_chord, traj.final_time / 4.0, traj.final_time
            )
        outcome = None
        if params.identical:
            outcome = ck.dichotomy_classify(traj, cfg.profile).outcome
        row.update(
            {
                "final_R": float(traj.order_parameter[-1]),
                "final_Ic": float(traj.mean_influence[-1]),
                "dichotomy": outcome,
                "max_phi": float(traj.phis.max()),
                "fitted_rate": chord_slope,
                "max_step_norm_drift": traj.max_step_norm_drift,
                "error": None,
            }
        )
    except Exception as exc:  # per-cell failures are data, not aborts
        row.update(
            {
                "final_R": None,
                "final_Ic": None,
                "dichotomy": None,
                "max_phi": None,
                "fitted_rate": None,
                "max_step_norm_drift": None,
                "error": f"{type(exc).__name__}: {exc}",
            }
        )
    return row


def cmd_sweep(args) -> int:
    sweep = parse_sweep_config(load_json(args.config))
    jobs = args.jobs if args.jobs is not None else sweep.jobs
    cells = sweep.cells()
    if jobs <= 1:
        rows = [_sweep_cell(sweep, c) for c in cells]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda c: _sweep_cell(sweep, c), cells))
    rows.sort(key=lambda r: r["index"])
    payload = {
        "schema": 1,
        "axes": sweep.axes,
        "grid": sweep.grid,
        "cells": [_jsonable(r) for r in rows],
    }
    write_json(Path(args.out or ".") / "sweep.json", payload)
    return EXIT_OK


def cmd_equilibrium(args) -> int:
    doc = load_json(args.config)
    if not isinstance(doc, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    if doc.get("schema") != 1:
        raise ConfigError("schema", f"unsupported schema version {doc.get('schema')!r}")
    try:
        profile = profile_from_spec(doc["profile"])
    except KeyError as exc:
        raise ConfigError("profile", "missing required field") from exc
    except ValueError as exc:
        raise ConfigError("profile", str(exc)) from exc
    kappa = doc.get("kappa")
    if not isinstance(kappa, (int, float)) or kappa <= 0:
        raise ConfigError("kappa", "must be a positive number")
    freq = doc.get("frequencies", {})
    if freq.get("kind") not in ("structured", "zero"):
        raise ConfigError("frequencies.kind", "equilibrium solving needs structured or zero kind")
    dim = doc.get("dim", 1)
    if not isinstance(dim, int) or dim < 1:
        raise ConfigError("dim", "dimension must be a positive integer")
    if freq["kind"] == "zero":
        n = doc.get("n")
        if not isinstance(n, int) or n < 1:
            raise ConfigError("n", "need the oscillator count for zero frequencies")
        nus = np.zeros(n)
        axes = None
    else:
        nus = np.asarray(freq.get("nus", []), dtype=float)
        if nus.size == 0:
            raise ConfigError("frequencies.nus", "must be a nonempty list")
        axes = freq.get("axes")

    lam_eq = eq.LambdaEquation(kappa=float(kappa), nus=nus, profile=profile)
    lam = eq.solve_lambda(lam_eq)
    result: dict = {"schema": 1, "lambda_star": lam, "phis": None, "residual": None,
                    "classification": None}
    if lam is not None:
        if axes is None:
            ax = np.zeros((len(nus), dim + 1))
            ax[:, 1] = 1.0
        else:
            ax = np.asarray(axes, dtype=float)
        try:
            state = eq.build_equilibrium(lam, nus, ax)
            params = ModelParams(
                kappa=float(kappa), omegas=ck.realize_structured(nus, ax, dim), profile=profile
            )
        except ValueError as exc:
            raise ConfigError("frequencies.axes", str(exc)) from exc
        result["phis"] = [float(p) for p in state.phis]
        result["residual"] = eq.residual(params, state.configuration)
        if np.all(nus == 0.0):
            result["classification"] = eq.classify_zero_frequency(
                state.configuration, profile.support_beta
            )
        else:
            result["classification"] = "structured-rest-state"
    else:
        result["classification"] = "no-root"
    write_json(Path(args.out or ".") / "equilibrium.json", _jsonable(result))
    print(json.dumps(_jsonable(result), sort_keys=True))
    return EXIT_OK


def _read_trajectory_csv(path: Path) -> tuple[np.ndarray, np.ndarray, np.ndarray, dict]:
    """Returns (times, ids, columns-matrix, header-index)."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    idx = {name: k for k, name in enumerate(header)}
    return data[:, idx["t"]], data[:, idx["i"]].astype(int), data, idx


def cmd_plotdata(args) -> int:
    if args.kind not in PLOT_KINDS:
        raise ConfigError("kind", f"unknown kind {args.kind!r}; choose from {PLOT_KINDS}")
    out = Path(args.out or ".") / f"plot_{args.kind}.txt"
    src = Path(args.data)
    if args.kind == "phase-diagram":
        doc = load_json(src)
        if "cells" not in doc:
            raise ConfigError(str(src), "phase-diagram needs a sweep summary")
        code = {"escaped": 0, "undecided": 1, "synchronized": 2, None: -1}
        lines = []
        axes = doc.get("axes", [])
        for cell in doc["cells"]:
            vals = [cell["params"][a] for a in axes]
            r = cell.get("final_R")
            lines.append(
                " ".join(
                    [_fmt(v) for v in vals]
                    + [_fmt(r) if r is not None else "nan",
                       str(code.get(cell.get("dichotomy"), -1))]
                )
            )
        atomic_write_text(out, "\n".join(lines) + "\n")
        return EXIT_OK

    times, ids, data, idx = _read_trajectory_csv(src)
    if args.kind == "angles-vs-time":
        lines = [
            f"{_fmt(t)} {int(i)} {_fmt(p)}"
            for t, i, p in zip(times, ids, data[:, idx["phi_i"]])
        ]
    elif args.kind == "order-parameter":
        lines = []
        for t, i, r in zip(times, ids, data[:, idx["R"]]):
            if int(i) == 0:
                lines.append(f"{_fmt(t)} {_fmt(r)}")
    else:  # pairwise-log
        d_cols = [idx[c] for c in sorted(idx) if c.startswith("x")]
        uniq = np.unique(times)
        lines = []
        for t in uniq:
            rows = data[times == t]
            pts = rows[:, d_cols]
            if len(pts) < 2:
                raise ConfigError(str(src), "pairwise-log needs at least two oscillators")
            g = pts @ pts.T
            d2 = np.clip(np.diag(g)[:, None] + np.diag(g)[None, :] - 2 * g, 0.0, None)
            chord = float(np.sqrt(d2.max()))
            val = math.log(chord) if chord > 1e-14 else CONVERGED_SENTINEL
            lines.append(f"{_fmt(t)} {_fmt(val)}")
    atomic_write_text(out, "\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="winfree",
        description="Simulate and verify synchronization dynamics on the unit sphere.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument(
            "--out",
            default=None,
            help="output directory (default: the config's `out`, else the current directory)",
        )
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--jobs", type=int, default=None, help="parallel workers (sweep only)")

    p = sub.add_parser("simulate", help="integrate one configured run, write CSV + summary")
    p.add_argument("config")
    common(p)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("verify", help="run statement checks, write verdicts JSON")
    p.add_argument("config")
    common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("sweep", help="run a parameter grid, write one summary row per cell")
    p.add_argument("config")
    common(p)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("equilibrium", help="solve the rest-state balance and certify it")
    p.add_argument("config")
    common(p)
    p.set_defaults(fn=cmd_equilibrium)

    p = sub.add_parser("plotdata", help="emit plain numeric columns for plotting tools")
    p.add_argument("data", help="trajectory CSV or sweep/summary JSON")
    p.add_argument("kind", help="one of: " + ", ".join(PLOT_KINDS))
    common(p)
    p.set_defaults(fn=cmd_plotdata)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def entry() -> None:
    raise SystemExit(main())
