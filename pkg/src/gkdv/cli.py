"""Command-line front door.

Subcommands
-----------
``dispersion``  sweep the layer's dispersion relation to CSV
``soliton``     build a solitary-wave series solution; profile CSV + JSON summary
``evolve``      pseudospectral time evolution; snapshot CSVs + JSON summary
``verify``      run the acceptance criteria; machine-readable PASS/FAIL report

All commands read a JSON config (strict schema: unknown keys are rejected)
and write byte-deterministic CSV/JSON: same config and version, same bytes.

Exit codes: 0 success, 2 bad input, 3 construction failure (resonance,
no smooth matching, band limit), 4 runtime blow-up.  The only environment
variable honored is GKDV_THREADS (worker threads for independent criteria).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import acceptance
from . import dispersion as dsp
from . import evolution as ev
from . import traveling_wave as tw
from .errors import (
    BandLimitError,
    BlowUpError,
    ConfigError,
    GkdvError,
    NoSmoothMatchingError,
    ResonanceError,
    SeriesEvaluationError,
    StabilityError,
)
from .output import write_csv, write_json
from .params import PhysicalParams
from .spectral import PeriodicGrid, SpectralField

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_CONSTRUCTION = 3
EXIT_BLOWUP = 4

_REQUIRED = object()


def _parse_config(data: dict, schema: dict, where: str) -> dict:
    """Strict-schema extraction: unknown keys rejected, types checked."""
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected a JSON object, got {type(data).__name__}")
    unknown = set(data) - set(schema)
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
    out = {}
    for key, (types, default) in schema.items():
        if key in data:
            value = data[key]
            if value is not None and not isinstance(value, types):
                raise ConfigError(
                    f"{where}: key {key!r} has type {type(value).__name__}, "
                    f"expected {'/'.join(t.__name__ for t in types)}"
                )
            out[key] = value
        elif default is _REQUIRED:
            raise ConfigError(f"{where}: missing required key {key!r}")
        else:
            out[key] = default
    return out


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc


def _physical_params(cfg: dict) -> PhysicalParams:
    try:
        return PhysicalParams(h=cfg["h"], g=cfg["g"], rho=cfg["rho"], sigma=cfg["sigma"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


_NUM = (int, float)

DISPERSION_SCHEMA = {
    "h": (_NUM, 1.0),
    "g": (_NUM, 9.81),
    "rho": (_NUM, 1000.0),
    "sigma": (_NUM, 0.0),
    "k_min": (_NUM, 0.0),
    "k_max": (_NUM, 5.0),
    "num": ((int,), 101),
}


def cmd_dispersion(args) -> int:
    cfg = _parse_config(_load_config(args.config), DISPERSION_SCHEMA, "dispersion config")
    params = _physical_params(cfg)
    k_min, k_max, num = cfg["k_min"], cfg["k_max"], cfg["num"]
    if k_min < 0 or k_max < k_min or num < 1:
        raise ConfigError(f"invalid k range [{k_min}, {k_max}] with num={num}")
    if k_max * params.h > 30.0:
        raise ConfigError(
            f"k_max*h = {k_max * params.h:.3g} exceeds the model band limit 30"
        )
    samples = dsp.dispersion_sweep(k_min, k_max, num, params)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(
        out / "dispersion.csv",
        ["k", "omega2", "omega_model", "phase_v", "group_v"],
        [(s.k, s.omega2, s.omega_model, s.phase_velocity, s.group_velocity) for s in samples],
    )
    print(f"wrote {out / 'dispersion.csv'} ({len(samples)} rows)")
    return EXIT_OK


SOLITON_SCHEMA = {
    "B": (_NUM, 1.0),
    "h": (_NUM, 1.0),
    "K": ((int,), 120),
    "mode": ((str,), tw.MODE_STEADY_DERIVED),
    "shallow": ((bool,), False),
    "X_max": (_NUM, None),
    "num_points": ((int,), 801),
    "residual_delta": (_NUM, None),
}


def cmd_soliton(args) -> int:
    cfg = _parse_config(_load_config(args.config), SOLITON_SCHEMA, "soliton config")
    if args.mode is not None:
        cfg["mode"] = args.mode
    if cfg["mode"] not in tw.MODES:
        raise ConfigError(f"unknown mode {cfg['mode']!r}; expected one of {tw.MODES}")
    if cfg["B"] <= 0 or cfg["h"] <= 0 or cfg["K"] < 2:
        raise ConfigError("need B > 0, h > 0, K >= 2")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    B, h, K = cfg["B"], cfg["h"], cfg["K"]
    try:
        sol = tw.build_solution(B, h, K, mode=cfg["mode"], shallow=cfg["shallow"])
        radius = tw.radius_estimate(sol)
        residual = tw.residual_check(sol, "gkdv_steady", delta=cfg["residual_delta"])
        X_max = cfg["X_max"] if cfg["X_max"] is not None else 20.0 / B
        X = np.linspace(-X_max, X_max, cfg["num_points"])
        eta = tw.reconstruct_profile(sol, X, check_tol=1e-5)
    except (ResonanceError, NoSmoothMatchingError, SeriesEvaluationError) as exc:
        write_json(
            out / "solution.json",
            {
                "status": "error",
                "error_type": type(exc).__name__,
                "message": str(exc),
                "B": B,
                "h": h,
                "K": K,
                "mode": cfg["mode"],
                "shallow": cfg["shallow"],
            },
        )
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION

    write_csv(out / "profile.csv", ["X", "eta"], zip(X, eta))
    write_json(
        out / "solution.json",
        {
            "status": "ok",
            "B": B,
            "h": h,
            "K": K,
            "mode": sol.mode,
            "shallow": sol.shallow,
            "A": sol.A,
            "a1": sol.a1,
            "radius": radius.radius,
            "radius_fit_residual": radius.fit_residual,
            "radius_flagged": radius.flagged,
            "eta0": float(tw.reconstruct_profile(sol, 0.0, check_tol=1e-5)),
            "residual": {
                "which": residual.which,
                "sup_abs": residual.sup_abs,
                "sup_rel": residual.sup_rel,
                "l2": residual.l2,
                "tail_bound_rel": residual.tail_bound_rel,
                "passed": residual.passed,
                "delta": residual.delta,
            },
        },
    )
    print(f"wrote {out / 'profile.csv'} and {out / 'solution.json'}")
    return EXIT_OK


EVOLVE_SCHEMA = {
    "h": (_NUM, 1.0),
    "g": (_NUM, 9.81),
    "rho": (_NUM, 1000.0),
    "sigma": (_NUM, 0.0),
    "equation": ((str,), ev.EQUATION_GKDV),
    "L": (_NUM, 80.0),
    "N": ((int,), 256),
    "dt": (_NUM, 0.02),
    "T": (_NUM, _REQUIRED),
    "snapshot_times": ((list,), None),
    "initial": ((dict,), _REQUIRED),
    "dealias_fraction": (_NUM, 2.0 / 3.0),
    "filter_on": ((bool,), None),
    "filter_gamma": (_NUM, 36.0),
    "filter_order": ((int,), 16),
    "linear_only": ((bool,), False),
    "record_every": ((int,), 10),
}

INITIAL_SCHEMAS = {
    "zero": {},
    "soliton": {
        "B": (_NUM, 0.5),
        "K": ((int,), 60),
        "mode": ((str,), tw.MODE_STEADY_DERIVED),
        "shallow": ((bool,), True),
    },
    "cosine": {
        "mode_index": ((int,), 4),
        "amplitude": (_NUM, 1e-3),
    },
}


def _initial_field(spec: dict, grid: PeriodicGrid, params: PhysicalParams) -> SpectralField:
    spec = dict(spec)
    kind = spec.pop("type", None)
    if kind not in INITIAL_SCHEMAS:
        raise ConfigError(
            f"initial condition type {kind!r} unknown; expected one of "
            f"{sorted(INITIAL_SCHEMAS)}"
        )
    cfg = _parse_config(spec, INITIAL_SCHEMAS[kind], f"initial ({kind})")
    if kind == "zero":
        return SpectralField.zero(grid)
    if kind == "cosine":
        j = cfg["mode_index"]
        if not 1 <= j <= grid.N // 2:
            raise ConfigError(f"mode_index {j} outside 1..{grid.N // 2}")
        return SpectralField.from_values(
            grid, cfg["amplitude"] * np.cos(grid.k[j] * (grid.x - grid.x0))
        )
    # soliton: centered at the domain midpoint
    sol = tw.build_solution(cfg["B"], params.h, cfg["K"], mode=cfg["mode"], shallow=cfg["shallow"])
    return SpectralField.from_values(
        grid, tw.reconstruct_profile(sol, grid.x - grid.x0, check_tol=1e-5)
    )


def cmd_evolve(args) -> int:
    cfg = _parse_config(_load_config(args.config), EVOLVE_SCHEMA, "evolve config")
    params = _physical_params(cfg)
    if cfg["T"] <= 0 or cfg["dt"] <= 0:
        raise ConfigError("need T > 0 and dt > 0")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    try:
        grid = PeriodicGrid(L=cfg["L"], N=cfg["N"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    snapshot_times = cfg["snapshot_times"]
    if snapshot_times is None:
        snapshot_times = [cfg["T"]]
    if any(not isinstance(t, (int, float)) for t in snapshot_times):
        raise ConfigError("snapshot_times must be numbers")
    snapshot_times = sorted(float(t) for t in snapshot_times)
    if snapshot_times and (snapshot_times[0] < 0 or snapshot_times[-1] > cfg["T"]):
        raise ConfigError("snapshot_times must lie in [0, T]")

    try:
        field = _initial_field(cfg["initial"], grid, params)
        state = ev.EvolutionState(
            field=field,
            t=0.0,
            params=params,
            dt=cfg["dt"],
            equation=cfg["equation"],
            dealias_fraction=cfg["dealias_fraction"],
            filter_on=cfg["filter_on"],
            filter_gamma=cfg["filter_gamma"],
            filter_order=cfg["filter_order"],
            linear_only=cfg["linear_only"],
        )
    except (ResonanceError, NoSmoothMatchingError, SeriesEvaluationError,
            BandLimitError, StabilityError) as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    snapshots = []

    def snap(s: ev.EvolutionState, index: int):
        path = out / f"snapshot_{index:03d}.csv"
        write_csv(path, ["x", "eta"], zip(s.grid.x, s.field.values))
        snapshots.append({"index": index, "t": s.t, "file": path.name})

    trajectories = []
    current = state
    try:
        for i, t_target in enumerate(snapshot_times):
            if t_target > current.t + 1e-12:
                traj = ev.evolve(current, T=t_target - current.t,
                                 record_every=cfg["record_every"])
                trajectories.append(traj)
                current = traj.final_state
            snap(current, i)
        if current.t < cfg["T"] - 1e-12:
            traj = ev.evolve(current, T=cfg["T"] - current.t,
                             record_every=cfg["record_every"])
            trajectories.append(traj)
            current = traj.final_state
    except BlowUpError as exc:
        write_json(
            out / "summary.json",
            {
                "status": "blow-up",
                "message": str(exc),
                "last_good_t": current.t,
                "snapshots": snapshots,
            },
        )
        print(f"blow-up: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except StabilityError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION

    times = np.concatenate([t.times for t in trajectories]) if trajectories else np.array([0.0])
    masses = np.concatenate([t.mass for t in trajectories]) if trajectories else np.array([state.mass()])
    peaks = np.concatenate([t.peak_x for t in trajectories]) if trajectories else np.array([0.0])
    mass0 = masses[0]
    drift = float(np.max(np.abs(masses - mass0)))
    mass_drift_rel = drift / abs(mass0) if abs(mass0) > 1e-300 else drift
    if len(times) >= 2:
        speed = float(np.polyfit(times, peaks, 1)[0])
    else:
        speed = math.nan

    write_json(
        out / "summary.json",
        {
            "status": "ok",
            "equation": cfg["equation"],
            "t_final": current.t,
            "mass_initial": float(mass0),
            "mass_drift_rel": mass_drift_rel,
            "measured_peak_speed": speed,
            "energy_initial": float(state.energy_proxy()),
            "energy_final": float(current.energy_proxy()),
            "spectral_tail_final": float(ev._spectral_tail(current.field)),
            "snapshots": snapshots,
        },
    )
    print(f"wrote {len(snapshots)} snapshots and {out / 'summary.json'}")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.list:
        for cid, _fn in acceptance.CRITERIA:
            print(f"{cid}: {acceptance.TITLES[cid]}")
        return EXIT_OK

    if args.tamper_check:
        result = acceptance.run_tampered_arbitration()
        print(result.line())
        print(f"    {result.details['explanation']}")
        return EXIT_OK if result.passed else 1

    ids = args.criterion if args.criterion else None
    try:
        results = acceptance.run_all(ids)
    except KeyError as exc:
        raise ConfigError(str(exc)) from exc
    for r in results:
        print(r.line())
    all_passed = all(r.passed for r in results)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_json(
            out / "verify.json",
            {
                "all_passed": all_passed,
                "criteria": [
                    {"id": r.cid, "title": r.title, "passed": r.passed, "details": r.details}
                    for r in results
                ],
            },
        )
        print(f"wrote {out / 'verify.json'}")
    return EXIT_OK if all_passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gkdv",
        description="Arbitrary-depth nonlinear surface waves: dispersion, "
        "solitary-wave construction, pseudospectral evolution, verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_disp = sub.add_parser("dispersion", help="sweep the dispersion relation to CSV")
    p_disp.add_argument("--config", help="JSON config path")
    p_disp.add_argument("--out", default=".", help="output directory")
    p_disp.set_defaults(func=cmd_dispersion)

    p_sol = sub.add_parser("soliton", help="construct a solitary-wave series solution")
    p_sol.add_argument("--config", help="JSON config path")
    p_sol.add_argument("--out", default=".", help="output directory")
    p_sol.add_argument("--mode", choices=list(tw.MODES), help="override the config mode")
    p_sol.set_defaults(func=cmd_soliton)

    p_ev = sub.add_parser("evolve", help="pseudospectral time evolution")
    p_ev.add_argument("--config", help="JSON config path")
    p_ev.add_argument("--out", default=".", help="output directory")
    p_ev.set_defaults(func=cmd_evolve)

    p_ver = sub.add_parser("verify", help="run the acceptance criteria")
    p_ver.add_argument("--out", help="write verify.json to this directory")
    p_ver.add_argument("--list", action="store_true", help="list criteria without running")
    p_ver.add_argument(
        "--criterion", action="append", metavar="ID", help="run only this criterion (repeatable)"
    )
    p_ver.add_argument(
        "--tamper-check",
        action="store_true",
        help="self-check: demand the printed-mode profile satisfy the steady "
        "third-order equation (must fail, naming the documented discrepancy)",
    )
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (ResonanceError, NoSmoothMatchingError, BandLimitError,
            SeriesEvaluationError, StabilityError) as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    except BlowUpError as exc:
        print(f"blow-up: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except GkdvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
