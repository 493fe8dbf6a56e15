"""Command-line front end: simulate | geodesic | curvature | verify.

Configuration comes from a JSON file (--config) with flag overrides; unknown
keys are rejected with the offending path named.  All outputs are written
atomically with a fixed 17-significant-digit number format, so identical
config + seed reproduces byte-identical files.

Exit codes: 0 clean, 1 config error, 2 wave-breaking halt, 3 numerical
instability, 4 verification identity failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from .curvature import curvature_scan, scan_summary, sectional_closed
from .geometry import TangentPair
from .presets import PRESET_NAMES, build_field
from .solver import (
    HALT_INSTABILITY,
    HALT_WAVE_BREAKING,
    EulerianState,
    IntegrationResult,
    SolverConfig,
    integrate_eulerian,
    integrate_lagrangian,
    reconstruct_eulerian,
)
from .spectral import GridSpec, PeriodicField
from .verification import run_verification

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_WAVE_BREAKING = 2
EXIT_INSTABILITY = 3
EXIT_VERIFY_FAILED = 4


class ConfigError(ValueError):
    pass


DEFAULT_CONFIG = {
    "grid": {"n": 256, "dealias_fraction": 2.0 / 3.0},
    "time": {"dt": 1e-3, "t_end": 0.5, "snapshot_stride": 25},
    "scheme": "rk4",
    "initial": {"u": "two-mode", "rho": "single-mode"},
    "output": {"directory": "out", "formats": ["csv", "json"]},
    "seed": 0,
    "pair_count": 100,
    "ch_reduced": False,
    "min_phix_floor": 1e-4,
    "verify_trials": 100,
}


# ---------------------------------------------------------------------------
# Config handling
# ---------------------------------------------------------------------------


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = dict(base)
    for key, val in override.items():
        here = f"{path}.{key}" if path else key
        if key not in base:
            raise ConfigError(f"unknown config key: {here}")
        if isinstance(base[key], dict):
            if not isinstance(val, dict):
                raise ConfigError(f"config key {here} must be a table")
            out[key] = _merge(base[key], val, here)
        else:
            out[key] = val
    return out


def load_config(path: str | None, overrides: dict) -> dict:
    cfg = DEFAULT_CONFIG
    if path is not None:
        try:
            with open(path) as fh:
                user = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(user, dict):
            raise ConfigError("config file must hold a JSON object")
        cfg = _merge(cfg, user)
    cfg = _merge(cfg, overrides)
    _validate(cfg)
    return cfg


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def _validate(cfg: dict) -> None:
    g = cfg["grid"]
    _require(isinstance(g["n"], int) and g["n"] >= 16 and g["n"] % 2 == 0,
             "grid.n must be an even integer >= 16")
    _require(0.0 < g["dealias_fraction"] <= 1.0,
             "grid.dealias_fraction must lie in (0, 1]")
    t = cfg["time"]
    _require(isinstance(t["dt"], (int, float)) and t["dt"] > 0, "time.dt must be > 0")
    _require(t["t_end"] >= 0, "time.t_end must be >= 0")
    _require(isinstance(t["snapshot_stride"], int) and t["snapshot_stride"] >= 1,
             "time.snapshot_stride must be a positive integer")
    _require(cfg["scheme"] == "rk4", "scheme must be 'rk4'")
    for role in ("u", "rho"):
        spec = cfg["initial"][role]
        if isinstance(spec, str):
            _require(spec in PRESET_NAMES,
                     f"initial.{role} preset must be one of {', '.join(PRESET_NAMES)}")
        else:
            _require(isinstance(spec, list) and all(
                isinstance(m, list) and len(m) == 3 for m in spec),
                f"initial.{role} must be a preset name or a list of [k, a, b] triples")
    _require(isinstance(cfg["seed"], int), "seed must be an integer")
    _require(isinstance(cfg["pair_count"], int) and cfg["pair_count"] >= 1,
             "pair_count must be a positive integer")
    _require(isinstance(cfg["ch_reduced"], bool), "ch_reduced must be a boolean")
    _require(cfg["min_phix_floor"] > 0, "min_phix_floor must be > 0")
    _require(isinstance(cfg["verify_trials"], int) and cfg["verify_trials"] >= 1,
             "verify_trials must be a positive integer")


def _grid(cfg: dict) -> GridSpec:
    return GridSpec(cfg["grid"]["n"], cfg["grid"]["dealias_fraction"])


def _solver_config(cfg: dict) -> SolverConfig:
    return SolverConfig(
        grid=_grid(cfg),
        dt=float(cfg["time"]["dt"]),
        t_end=float(cfg["time"]["t_end"]),
        scheme=cfg["scheme"],
        min_phix_floor=float(cfg["min_phix_floor"]),
        snapshot_stride=int(cfg["time"]["snapshot_stride"]),
    )


def _initial_pair(cfg: dict, grid: GridSpec) -> TangentPair:
    u = build_field(grid, cfg["initial"]["u"])
    r = build_field(grid, cfg["initial"]["rho"], zero_mean=True)
    return TangentPair(u, r)


# ---------------------------------------------------------------------------
# Deterministic output
# ---------------------------------------------------------------------------


def _fmt(x: float) -> str:
    if not np.isfinite(x):
        raise RuntimeError("refusing to emit a non-finite number")
    return format(float(x), ".17g")


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_json(path: str, payload: dict) -> None:
    try:
        text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=False)
    except ValueError as exc:
        raise RuntimeError(f"refusing to emit a non-finite number: {exc}") from exc
    _atomic_write(path, text + "\n")


def _snapshot_rows(states: list[EulerianState]):
    for s in states:
        x = s.u.grid.x
        for j in range(s.u.grid.n):
            yield (float(s.t), float(x[j]), float(s.u.values[j]), float(s.r.values[j]))


def _diagnostics_rows(result: IntegrationResult):
    for d in result.diagnostics:
        yield (
            float(d.t),
            float(d.energy),
            float(d.m1_residual),
            float(d.m2_residual),
            float(d.mean_r),
            float(d.min_phi_x),
        )


DIAG_HEADER = ["t", "energy", "m1_residual", "m2_residual", "mean_r", "min_phi_x"]


def _run_summary(result: IntegrationResult, cfg: dict) -> dict:
    diags = result.diagnostics
    e0 = diags[0].energy
    drift = max(abs(d.energy - e0) for d in diags)
    return {
        "halt_reason": result.halt_reason,
        "t_final": result.t_final,
        "energy_initial": e0,
        "energy_drift_rel": drift / e0 if e0 > 0 else drift,
        "max_m1_residual": max(d.m1_residual for d in diags),
        "max_m2_residual": max(d.m2_residual for d in diags),
        "max_abs_mean_r": max(abs(d.mean_r) for d in diags),
        "min_phi_x": min(d.min_phi_x for d in diags),
        "seed": cfg["seed"],
        "n": cfg["grid"]["n"],
        "dt": cfg["time"]["dt"],
        "t_end": cfg["time"]["t_end"],
    }


def _halt_exit(result: IntegrationResult) -> int:
    if result.halt_reason == HALT_WAVE_BREAKING:
        return EXIT_WAVE_BREAKING
    if result.halt_reason == HALT_INSTABILITY:
        return EXIT_INSTABILITY
    return EXIT_OK


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_simulate(cfg: dict) -> int:
    grid = _grid(cfg)
    scfg = _solver_config(cfg)
    pair = _initial_pair(cfg, grid)
    result = integrate_eulerian(EulerianState(0.0, pair.v1, pair.v2), scfg)
    out = cfg["output"]["directory"]
    write_csv(os.path.join(out, "snapshots.csv"), ["t", "x", "u", "r"],
              _snapshot_rows(result.states))
    write_csv(os.path.join(out, "diagnostics.csv"), DIAG_HEADER,
              _diagnostics_rows(result))
    summary = _run_summary(result, cfg)
    write_json(os.path.join(out, "summary.json"), summary)
    return _halt_exit(result)


def cmd_geodesic(cfg: dict) -> int:
    grid = _grid(cfg)
    scfg = _solver_config(cfg)
    pair = _initial_pair(cfg, grid)
    lag = integrate_lagrangian(pair, scfg)
    eul = integrate_eulerian(EulerianState(0.0, pair.v1, pair.v2), scfg)
    out = cfg["output"]["directory"]

    reconstructed = [reconstruct_eulerian(s) for s in lag.states]
    write_csv(os.path.join(out, "snapshots.csv"), ["t", "x", "u", "r"],
              _snapshot_rows(reconstructed))
    write_csv(os.path.join(out, "diagnostics.csv"), DIAG_HEADER,
              _diagnostics_rows(lag))

    eul_by_t = {round(s.t, 12): s for s in eul.states}
    cross_rows = []
    for rec in reconstructed:
        match = eul_by_t.get(round(rec.t, 12))
        if match is None:
            continue
        cross_rows.append(
            (
                float(rec.t),
                float((rec.u - match.u).sup()),
                float((rec.r - match.r).sup()),
            )
        )
    write_csv(os.path.join(out, "crosscheck.csv"),
              ["t", "supnorm_diff_u", "supnorm_diff_r"], cross_rows)

    summary = _run_summary(lag, cfg)
    summary["max_crosscheck_u"] = max((r[1] for r in cross_rows), default=0.0)
    summary["max_crosscheck_r"] = max((r[2] for r in cross_rows), default=0.0)
    if lag.halt_reason == HALT_WAVE_BREAKING:
        summary["breaking_time"] = lag.t_final
    write_json(os.path.join(out, "summary.json"), summary)
    return _halt_exit(lag)


def _worker_count() -> int:
    raw = os.environ.get("PI2CH_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _reference_pair_report(grid: GridSpec, ch_reduced: bool):
    """The documented single-mode pair, emitted as pair_id -1 in every scan.

    With both class components alive its mean-correction equals pi^2; the
    reduced variant zeroes the class parts and the correction with them.
    """
    x = grid.x
    zero = PeriodicField.zero(grid)
    u = TangentPair(PeriodicField(grid, np.sin(2 * np.pi * x)), zero)
    v2 = zero if ch_reduced else PeriodicField(grid, np.cos(2 * np.pi * x))
    v = TangentPair(zero, v2)
    return sectional_closed(u, v, pair_id=-1)


def cmd_curvature(cfg: dict) -> int:
    grid = _grid(cfg)
    reports = curvature_scan(
        cfg["pair_count"], cfg["seed"], grid,
        ch_reduced=cfg["ch_reduced"], workers=_worker_count(),
    )
    reports = [_reference_pair_report(grid, cfg["ch_reduced"])] + reports
    out = cfg["output"]["directory"]
    write_csv(
        os.path.join(out, "curvature.csv"),
        ["pair_id", "s_closed", "s_direct", "abs_diff", "gamma_part", "mu_correction"],
        (
            (r.pair_id, r.s_closed, r.s_direct, r.abs_diff, r.gamma_part,
             r.mu_correction)
            for r in reports
        ),
    )
    summary = scan_summary(reports)
    summary["seed"] = cfg["seed"]
    summary["n"] = grid.n
    write_json(os.path.join(out, "summary.json"), summary)
    return EXIT_OK


def cmd_verify(cfg: dict, fault: str | None = None) -> int:
    grid = _grid(cfg)
    if fault is None:
        fault = os.environ.get("PI2CH_TEST_INJECT") or None
    report = run_verification(grid, cfg["seed"], trials=cfg["verify_trials"],
                              fault=fault)
    out = cfg["output"]["directory"]
    write_json(os.path.join(out, "verify.json"), report)
    if not report["all_passed"]:
        failed = [k for k, v in report["identities"].items() if not v["passed"]]
        print(f"verification failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pi2ch",
        description="Spectral laboratory for the periodic two-component "
        "pi-Camassa-Holm system",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("simulate", "geodesic", "curvature", "verify"):
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--n", type=int, default=None, help="grid points")
        p.add_argument("--dt", type=float, default=None)
        p.add_argument("--t-end", type=float, default=None)
        if name == "curvature":
            p.add_argument("--pair-count", type=int, default=None)
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    o: dict = {}
    if args.out is not None:
        o["output"] = {"directory": args.out}
    if args.seed is not None:
        o["seed"] = args.seed
    if args.n is not None:
        o.setdefault("grid", {})["n"] = args.n
    if args.dt is not None:
        o.setdefault("time", {})["dt"] = args.dt
    if args.t_end is not None:
        o.setdefault("time", {})["t_end"] = args.t_end
    if getattr(args, "pair_count", None) is not None:
        o["pair_count"] = args.pair_count
    return o


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, _overrides(args))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    commands = {
        "simulate": cmd_simulate,
        "geodesic": cmd_geodesic,
        "curvature": cmd_curvature,
        "verify": cmd_verify,
    }
    try:
        return commands[args.command](cfg)
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSTABILITY


if __name__ == "__main__":
    sys.exit(main())
