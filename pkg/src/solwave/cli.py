"""Command-line pipeline: solve waves, check identities, scan boosts, evolve.

All commands read a single JSON config (--config) with optional dotted-key
overrides (--set key=value).  Outputs land under output_dir together with a
manifest.json listing the artifacts and the normalized config.  Exit codes:
0 success, 1 config or validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import copy
import json
import os
import sys
import tempfile

import numpy as np

from .boost import (GridSpec, GridTooSmall, boost_scan, grid_for,
                    sample_boosted, scan_to_csv, scan_to_json)
from .evolve import CflViolation, NonFinite, diagnostics_to_csv, evolve
from .functionals import (SuperluminalVelocity, compute_functionals,
                          report_to_dict)
from .potential import PotentialSpec, expected_amplitude
from .radial import (NoBracket, NodeCountMismatch, StepFailure,
                     find_excited_state, find_ground_state, save_wave)

__all__ = ["main", "load_config", "normalize_config", "build_potential"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2

DEFAULT_TOLERANCES = {
    "tol_s": 1e-13,
    "quadrature_tol": 1e-6,
    "scan_rel_err": 1e-3,
}

DEFAULT_EVOLVE = {"t_final": 10.0, "dt": 0.01, "diag_stride": 50}


class ConfigError(ValueError):
    pass


def _set_path(cfg: dict, dotted: str, value) -> None:
    keys = dotted.split(".")
    node = cfg
    for key in keys[:-1]:
        node = node.setdefault(key, {})
        if not isinstance(node, dict):
            raise ConfigError(f"--set path {dotted!r} crosses a non-object value")
    node[keys[-1]] = value


def _parse_set(arg: str):
    if "=" not in arg:
        raise ConfigError(f"--set expects key=value, got {arg!r}")
    key, raw = arg.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def load_config(path: str | None, overrides) -> dict:
    cfg: dict = {}
    if path is not None:
        with open(path) as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise ConfigError("config root must be a JSON object")
    for item in overrides or []:
        key, value = _parse_set(item)
        _set_path(cfg, key, value)
    return normalize_config(cfg)


def build_potential(cfg: dict, omega: float) -> PotentialSpec:
    pot = cfg["potential"]
    terms = tuple((float(t["coupling"]), int(t["exponent"])) for t in pot["terms"])
    cap = pot.get("amplitude_cap")
    if cap is None:
        probe = PotentialSpec(mass_sq=float(pot["mass_sq"]), terms=terms, amplitude_cap=1.0)
        a_star = expected_amplitude(probe, omega)
        if a_star is None:
            raise ConfigError(
                "amplitude_cap not given and no expected amplitude exists "
                "(no admissible negative-energy amplitude for this potential)"
            )
        cap = 10.0 * a_star
    return PotentialSpec(mass_sq=float(pot["mass_sq"]), terms=terms, amplitude_cap=float(cap))


def normalize_config(cfg: dict) -> dict:
    """Fill defaults, coerce types, and re-validate every cross-field
    constraint (|v| < 1, k >= 1 implies n = 2, omega^2 < m^2).  Normalizing a
    normalized config is the identity."""
    cfg = copy.deepcopy(cfg)
    if "potential" not in cfg:
        raise ConfigError("config needs a 'potential' section")
    pot = cfg["potential"]
    if "mass_sq" not in pot:
        raise ConfigError("potential.mass_sq is required")
    pot["mass_sq"] = float(pot["mass_sq"])
    pot["terms"] = [
        {"coupling": float(t["coupling"]), "exponent": int(t["exponent"])}
        for t in pot.get("terms", [])
    ]
    if pot.get("amplitude_cap") is not None:
        pot["amplitude_cap"] = float(pot["amplitude_cap"])
    else:
        pot["amplitude_cap"] = None

    cfg["omega"] = float(cfg.get("omega", 0.8))
    cfg["n"] = int(cfg.get("n", 1))
    cfg["k"] = int(cfg.get("k", 0))
    if cfg["n"] not in (1, 2, 3):
        raise ConfigError(f"n must be 1, 2 or 3, got {cfg['n']}")
    if cfg["k"] < 0:
        raise ConfigError(f"k must be >= 0, got {cfg['k']}")
    if cfg["k"] >= 1 and cfg["n"] != 2:
        raise ConfigError("angular index k >= 1 requires n = 2")
    if cfg["omega"] ** 2 >= pot["mass_sq"]:
        raise ConfigError(
            f"omega^2 = {cfg['omega']**2:g} >= mass_sq = {pot['mass_sq']:g}: "
            "condition S1 fails, no exponentially decaying profile exists"
        )

    grid = cfg.get("grid") or {}
    grid.setdefault("h", 0.05)
    grid["h"] = float(grid["h"])
    if grid["h"] <= 0:
        raise ConfigError("grid.h must be positive")
    if ("extent" in grid) != ("points" in grid):
        raise ConfigError("grid.extent and grid.points must be given together")
    if "extent" in grid:
        grid["extent"] = [float(x) for x in grid["extent"]]
        grid["points"] = [int(p) for p in grid["points"]]
        if len(grid["extent"]) != cfg["n"] or len(grid["points"]) != cfg["n"]:
            raise ConfigError("grid extent/points must have one entry per axis")
        GridSpec(n=cfg["n"], extent=tuple(grid["extent"]), points=tuple(grid["points"]))
    cfg["grid"] = grid

    cfg["velocities"] = [float(v) for v in cfg.get("velocities", [])]
    for v in cfg["velocities"]:
        if abs(v) >= 1.0:
            raise ConfigError(f"velocity {v} is not subluminal")

    ev = dict(DEFAULT_EVOLVE)
    ev.update(cfg.get("evolve") or {})
    ev["t_final"] = float(ev["t_final"])
    ev["dt"] = float(ev["dt"])
    ev["diag_stride"] = int(ev["diag_stride"])
    if ev.get("snapshot_stride") is not None:
        ev["snapshot_stride"] = int(ev["snapshot_stride"])
    cfg["evolve"] = ev

    tol = dict(DEFAULT_TOLERANCES)
    tol.update(cfg.get("tolerances") or {})
    cfg["tolerances"] = {key: float(val) for key, val in tol.items()}

    cfg["output_dir"] = str(cfg.get("output_dir", "solwave_out"))

    order = ["potential", "omega", "n", "k", "grid", "velocities", "evolve",
             "tolerances", "output_dir"]
    return {key: cfg[key] for key in order if key in cfg} | {
        key: val for key, val in cfg.items() if key not in order
    }


def _atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp_", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_json(path: str, obj) -> None:
    _atomic_write_text(path, json.dumps(obj, indent=2) + "\n")


def _finish(cfg: dict, out_dir: str, artifacts: list[str]) -> None:
    manifest = {"config": cfg, "artifacts": sorted(artifacts)}
    _write_json(os.path.join(out_dir, "manifest.json"), manifest)


def _solve_from_config(cfg: dict):
    spec = build_potential(cfg, cfg["omega"])
    tol_s = cfg["tolerances"]["tol_s"]
    if cfg["k"] >= 1:
        wave = find_excited_state(spec, cfg["omega"], cfg["k"], tol_s=tol_s)
    else:
        wave = find_ground_state(spec, cfg["omega"], cfg["n"], tol_s=tol_s)
    return spec, wave


def _grid_from_config(cfg: dict, wave, v_max: float, t_max: float) -> GridSpec:
    grid = cfg["grid"]
    if "extent" in grid:
        return GridSpec(n=cfg["n"], extent=tuple(grid["extent"]),
                        points=tuple(grid["points"]))
    v_vec = np.zeros(cfg["n"])
    if cfg["n"] >= 1:
        v_vec[0] = v_max
    return grid_for(wave, v_vec, t_max, grid["h"])


def _boost_axis_velocity(speed: float, n: int) -> np.ndarray:
    v = np.zeros(n)
    v[0] = speed
    return v


def cmd_solve(cfg: dict) -> int:
    out = cfg["output_dir"]
    os.makedirs(out, exist_ok=True)
    spec, wave = _solve_from_config(cfg)
    stem = f"wave_n{cfg['n']}k{cfg['k']}"
    csv_path = os.path.join(out, stem + ".csv")
    json_path = os.path.join(out, stem + ".json")
    save_wave(wave, csv_path, json_path)
    tail = wave.profile.tail
    print(f"shoot_param = {wave.profile.shoot_param:.17g}")
    print(f"delta       = {tail.delta:.17g}")
    print(f"node_count  = {wave.profile.node_count}")
    _finish(cfg, out, [stem + ".csv", stem + ".json"])
    return EXIT_OK


def cmd_check(cfg: dict) -> int:
    out = cfg["output_dir"]
    os.makedirs(out, exist_ok=True)
    spec, wave = _solve_from_config(cfg)
    report = compute_functionals(wave)
    payload = report_to_dict(report)
    print(json.dumps(payload, indent=2))
    stem = f"report_n{cfg['n']}k{cfg['k']}.json"
    _write_json(os.path.join(out, stem), payload)
    _finish(cfg, out, [stem])
    tol = cfg["tolerances"]["quadrature_tol"]
    if report.pokhozhaev_residual > tol:
        print(f"FAIL: pokhozhaev_residual {report.pokhozhaev_residual:.3e} > {tol:g}",
              file=sys.stderr)
        return EXIT_NUMERICAL
    if abs(report.isotropy_defect) > tol * max(abs(report.e0), 1e-30):
        print(f"FAIL: isotropy_defect {report.isotropy_defect:.3e} exceeds "
              f"{tol:g} * |E_0|", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_boost_scan(cfg: dict) -> int:
    out = cfg["output_dir"]
    os.makedirs(out, exist_ok=True)
    spec, wave = _solve_from_config(cfg)
    report = compute_functionals(wave)
    speeds = cfg["velocities"]
    grid = _grid_from_config(cfg, wave, 0.0, 0.0)  # sized for the uncontracted case
    rows = boost_scan(wave, spec,
                      [_boost_axis_velocity(v, cfg["n"]) for v in speeds],
                      grid, report=report)
    scan_to_csv(rows, os.path.join(out, "boost_scan.csv"))
    scan_to_json(rows, os.path.join(out, "boost_scan.json"))
    for row in rows:
        print(f"v={np.linalg.norm(row.v):.3f}  E_meas={row.e_measured:.10g}  "
              f"relE={row.rel_err_e:.3e}  relP={row.rel_err_p:.3e}")
    _finish(cfg, out, ["boost_scan.csv", "boost_scan.json"])
    limit = cfg["tolerances"]["scan_rel_err"]
    worst = max((max(r.rel_err_e, r.rel_err_p) for r in rows), default=0.0)
    if worst > limit:
        print(f"FAIL: worst scan relative error {worst:.3e} > {limit:g}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_evolve(cfg: dict) -> int:
    out = cfg["output_dir"]
    os.makedirs(out, exist_ok=True)
    spec, wave = _solve_from_config(cfg)
    speed = cfg["velocities"][0] if cfg["velocities"] else 0.0
    ev = cfg["evolve"]
    grid = _grid_from_config(cfg, wave, abs(speed), ev["t_final"])
    initial = sample_boosted(wave, _boost_axis_velocity(speed, cfg["n"]), grid, t=0.0)
    snapshot_stride = ev.get("snapshot_stride")
    state = evolve(initial, spec, ev["t_final"], ev["dt"], ev["diag_stride"],
                   snapshot_stride=snapshot_stride,
                   snapshot_dir=out if snapshot_stride else None)
    diagnostics_to_csv(state.diagnostics, os.path.join(out, "evolution.csv"))
    artifacts = ["evolution.csv"] + sorted(
        f for f in os.listdir(out) if f.startswith("snapshot_"))
    _finish(cfg, out, artifacts)

    times = np.array([d.time for d in state.diagnostics])
    centers = np.array([d.center_of_energy[0] for d in state.diagnostics])
    energies = np.array([d.energy for d in state.diagnostics])
    fitted = float(np.polyfit(times, centers, 1)[0]) if len(times) > 1 else 0.0
    drift = float(np.max(np.abs(energies / energies[0] - 1.0)))
    print(f"fitted speed  = {fitted:.6f} (seeded {speed:.6f})")
    print(f"energy drift  = {drift:.3e}")
    speed_tol = cfg["tolerances"].get("speed_rel_err")
    if speed_tol is not None and abs(speed) > 0:
        if abs(fitted - speed) > speed_tol * abs(speed):
            print(f"FAIL: fitted speed off by more than {speed_tol:g} relative",
                  file=sys.stderr)
            return EXIT_NUMERICAL
    return EXIT_OK


def cmd_demo(cfg: dict) -> int:
    """Full pipeline on the canonical cubic potential in one dimension."""
    demo_cfg = {
        "potential": {"mass_sq": 1.0, "terms": [{"coupling": 1.0, "exponent": 4}]},
        "omega": 0.8,
        "n": 1,
        "k": 0,
        "grid": {"h": 0.02},
        "velocities": [0.0, 0.3, 0.6, 0.9],
        "evolve": {"t_final": 5.0, "dt": 0.01, "diag_stride": 50},
        "output_dir": cfg.get("output_dir", "solwave_out"),
    }
    demo_cfg = normalize_config(demo_cfg)
    print("== solve ==")
    status = cmd_solve(demo_cfg)
    if status:
        return status
    print("== check ==")
    status = cmd_check(demo_cfg)
    if status:
        return status
    print("== boost-scan ==")
    status = cmd_boost_scan(demo_cfg)
    if status:
        return status
    print("== evolve ==")
    status = cmd_evolve(demo_cfg)
    if status:
        return status
    out = demo_cfg["output_dir"]
    artifacts = sorted(f for f in os.listdir(out) if f != "manifest.json")
    _finish(demo_cfg, out, artifacts)
    print(f"demo artifacts in {out}/")
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "check": cmd_check,
    "boost-scan": cmd_boost_scan,
    "evolve": cmd_evolve,
    "demo": cmd_demo,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="solwave",
        description="Solitary waves of nonlinear Klein-Gordon equations: "
                    "solve profiles, verify variational identities, measure "
                    "boosted energy-momentum, evolve in time.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config entry (dotted keys, JSON values)")
    args = parser.parse_args(argv)

    try:
        if args.command == "demo":
            # demo supplies its own full configuration; only take overrides
            cfg = {}
            if args.config is not None:
                with open(args.config) as fh:
                    cfg = json.load(fh)
            for item in args.set:
                key, value = _parse_set(item)
                _set_path(cfg, key, value)
        else:
            cfg = load_config(args.config, args.set)
    except (ConfigError, OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        return COMMANDS[args.command](cfg)
    except (NoBracket, NodeCountMismatch, StepFailure, GridTooSmall,
            CflViolation, NonFinite, SuperluminalVelocity) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
