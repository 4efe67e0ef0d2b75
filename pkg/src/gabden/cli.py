"""Command-line front end: ``gabden <command> --config <path> [--out dir] [--seed n]``.

The whole config is parsed and validated, and every result computed, before
anything is written, so a bad config never leaves partial outputs. Reports
carry no timestamps; the run time lives only in ``manifest.json``.

Config layout (JSON)::

    {
      "seed": 7,
      "time_grid": {"half_width": 12, "step": 0.01, "cell_centered": false},
      "phase_grid": {"half_side": 8, "step": 0.1},
      "cases": [
        {"name": "z2", "check": "density_theorem", "hypothesis": "riesz_sequence",
         "generators": [{"kind": "gaussian"}],
         "points": {"lattice": {"v": [1, 0], "w": [0, 1]}},
         "radii": [1, 2, 4], "search_region": {"center": [0, 0], "half_side": 1}}
      ]
    }

``points`` is ``{"lattice": {...}}``, ``{"file": "pts.csv"}`` (relative to the
config), ``{"sector_family": {"n": 4, "half_side": 12}}`` or a list of those
(one per generator) for a family.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import warnings
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import io as gio
from .frames import dual_frame_bound, gram_matrix, riesz_bounds
from .pointset import (Cube, Lattice2D, PointFamily, PointSet, angular_sector_family,
                       density_profile, lattice_points)
from .report import FAIL, HYPOTHESIS_FAILURE, VerificationReport, _clean
from .signal import DEFAULT_GRID, TimeGrid, make_preset
from .stft import PhaseGrid, check_covariance, stft_field
from .theorems import (CaseSpec, _section, commutation_phase, err2_bound_check, hap_radius,
                       shifted_dual_biorthogonality, verify_density_theorem,
                       verify_uniform_minimality_density)

EXIT_PASS, EXIT_USAGE, EXIT_HYPOTHESIS, EXIT_VERIFICATION = 0, 1, 2, 3
COMMANDS = ("stft", "density", "bounds", "verify", "report")
CHECKS = ("density_theorem", "uniform_minimality", "err2_bound", "covariance",
          "shifted_dual", "commutation", "hap")
MONTE_CARLO_CHECKS = ("density_theorem",)
THREADS_ENV = "GABDEN_THREADS"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    config_path: Path
    config_hash: str
    out_dir: Path
    seed: int | None
    time_grid: TimeGrid
    phase_grid: PhaseGrid
    cases: list = field(default_factory=list)


# -- parsing ---------------------------------------------------------------

def _req(d: dict, key: str, where: str):
    if key not in d:
        raise ConfigError(f"{where}: missing '{key}'")
    return d[key]


def _time_grid(d) -> TimeGrid:
    if d is None:
        return DEFAULT_GRID
    T, step = float(d.get("half_width", 12.0)), float(d.get("step", 0.01))
    return TimeGrid.cell_centered(T, step) if d.get("cell_centered") else TimeGrid(T, step)


def _phase_grid(d) -> PhaseGrid:
    if d is None:
        return PhaseGrid.square()
    if "x_range" in d:
        return PhaseGrid(d["x_range"], _req(d, "y_range", "phase_grid"))
    return PhaseGrid.square(float(d.get("half_side", 8.0)), float(d.get("step", 0.1)))


def _cube(d, default=None) -> Cube:
    if d is None:
        if default is None:
            raise ConfigError("missing cube")
        return default
    return Cube(tuple(float(c) for c in _req(d, "center", "cube")), float(_req(d, "half_side", "cube")))


def _lattice(d) -> Lattice2D:
    return Lattice2D(tuple(_req(d, "v", "lattice")), tuple(_req(d, "w", "lattice")))


def _points(d, base: Path):
    if isinstance(d, list):
        return [_points(m, base) for m in d]
    if "lattice" in d:
        return _lattice(d["lattice"])
    if "file" in d:
        path = base / d["file"]
        if not path.is_file():
            raise ConfigError(f"point-set file not found: {path}")
        return gio.read_points_csv(path, d.get("declared_separation"))
    if "sector_family" in d:
        sf = d["sector_family"]
        h = float(sf.get("half_side", 12.0))
        return PointFamily(angular_sector_family(int(_req(sf, "n", "sector_family")),
                                                 Cube((0.0, 0.0), h)).members)
    if "array" in d:
        return np.asarray(d["array"], dtype=float).reshape(-1, 2)
    raise ConfigError("points must give 'lattice', 'file', 'sector_family' or 'array'")


def _signal(d, grid):
    return make_preset(_req(d, "kind", "generator"), d.get("params", []), grid)


def _parse_case(d: dict, i: int, cfg: dict, base: Path, tgrid, pgrid, seed) -> dict:
    name = str(d.get("name", f"case{i}"))
    check = d.get("check", "density_theorem")
    if check not in CHECKS:
        raise ConfigError(f"case {name}: unknown check {check!r}")
    tg = _time_grid(d["time_grid"]) if "time_grid" in d else tgrid
    pg = _phase_grid(d["phase_grid"]) if "phase_grid" in d else pgrid
    gens = d.get("generators", [{"kind": "gaussian"}])
    signals = [_signal(g, tg) for g in gens]       # validates presets up front
    case = {"name": name, "check": check, "raw": d, "time_grid": tg, "phase_grid": pg,
            "signals": signals}
    if "points" in d:
        case["points"] = _points(d["points"], base)
    if check in ("density_theorem", "uniform_minimality"):
        if "points" not in case:
            raise ConfigError(f"case {name}: missing 'points'")
        if seed is None and check in MONTE_CARLO_CHECKS:
            raise ConfigError(f"case {name}: a seed is required for the Monte Carlo constant")
        case["spec"] = CaseSpec(
            generators=gens, points=case["points"], radii=_req(d, "radii", name),
            hypothesis=d.get("hypothesis", "uniformly_minimal" if check == "uniform_minimality"
                             else "riesz_sequence"),
            search_region=_cube(d.get("search_region"), Cube((0.0, 0.0), 1.0)),
            section_radius=d.get("section_radius"), time_grid=tg, phase_grid=pg,
            alpha=d.get("alpha"), kappa=float(d.get("kappa", 2.0)),
            trials=int(d.get("trials", 200)), seed=int(seed or 0), name=name)
        if check == "uniform_minimality":
            case["epsilons"] = [float(e) for e in _req(d, "epsilons", name)]
    elif check == "err2_bound":
        case["alpha"] = float(_req(d, "alpha", name))
        case["radii"] = [float(r) for r in _req(d, "radii", name)]
    elif check == "covariance":
        case["shifts"] = [tuple(map(float, s)) for s in _req(d, "shifts", name)]
        case["samples"] = np.asarray(_req(d, "sample_points", name), float).reshape(-1, 2)
    elif check in ("shifted_dual", "commutation"):
        if check == "shifted_dual":
            case["lattice"] = _lattice(_req(d, "lattice", name))
            case["index_window"] = int(d.get("index_window", 3))
            case["tol"] = float(d.get("tolerance", 1e-8))
        else:
            case["pairs"] = [tuple(map(float, p)) for p in _req(d, "pairs", name)]
            case["tol"] = float(d.get("tolerance", 1e-6))
    elif check == "hap":
        if "points" not in case:
            raise ConfigError(f"case {name}: missing 'points'")
        case["epsilon"] = float(_req(d, "epsilon", name))
        case["probes"] = np.asarray(_req(d, "probe_points", name), float).reshape(-1, 2)
        case["window"] = _cube(d.get("window"), Cube((0.0, 0.0), 10.0))
    return case


def load_config(path, command: str, out_dir=None, seed=None) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config not found: {path}")
    raw = path.read_bytes()
    try:
        cfg = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    if "command" in cfg and cfg["command"] != command:
        raise ConfigError(f"config is for '{cfg['command']}', not '{command}'")
    if seed is None:
        seed = cfg.get("seed")
    if seed is not None:
        seed = int(seed)
        if not 0 <= seed < 2 ** 64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
    out = Path(out_dir if out_dir is not None else cfg.get("out", "out"))
    if out.exists() and not out.is_dir():
        raise ConfigError(f"output path {out} is not a directory")
    tg, pg = _time_grid(cfg.get("time_grid")), _phase_grid(cfg.get("phase_grid"))
    cases = cfg.get("cases")
    if not isinstance(cases, list) or not cases:
        raise ConfigError("config needs a non-empty 'cases' list")
    parsed = [_parse_case(c, i, cfg, path.parent, tg, pg, seed) for i, c in enumerate(cases)]
    names = [c["name"] for c in parsed]
    if len(set(names)) != len(names):
        raise ConfigError("case names must be unique")
    return RunConfig(command, path, hashlib.sha256(raw).hexdigest(), out, seed, tg, pg, parsed)


# -- commands --------------------------------------------------------------

def _point_array(points, case):
    if isinstance(points, list):
        return np.vstack([_point_array(p, case) for p in points])
    if isinstance(points, PointFamily):
        return points.stacked
    if isinstance(points, Lattice2D):
        return lattice_points(points, _cube(case["raw"].get("window"), Cube((0.0, 0.0), 10.0))).points
    if isinstance(points, PointSet):
        return points.points
    return np.asarray(points, float)


def _run_stft(case) -> dict:
    out = {}
    for k, g in enumerate(case["signals"]):
        fld = stft_field(g, case["phase_grid"])
        stem = f"stft_{case['name']}_{k}"
        out[stem + ".csv"] = gio.field_csv(fld)
        out[stem + ".json"] = gio.field_json(fld)
    return out


def _run_density(case) -> dict:
    if "points" not in case:
        raise ConfigError(f"case {case['name']}: missing 'points'")
    pts = _point_array(case["points"], case)
    radii = case["raw"].get("radii", [1, 2, 4])
    rep = density_profile(pts, radii, _cube(case["raw"].get("search_region"), Cube((0.0, 0.0), 1.0)))
    stem = f"density_{case['name']}"
    return {stem + ".csv": gio.density_csv(rep), stem + ".json": gio.density_json(rep)}


def _run_bounds(case) -> tuple:
    spec = case.get("spec")
    if spec is None:
        raise ConfigError(f"case {case['name']}: bounds needs a density_theorem or uniform_minimality case")
    try:
        members = spec.member_sets()
    except ValueError as exc:
        raise ConfigError(f"case {case['name']}: {exc}") from None
    sec = _section(spec, spec.signals(), members)
    gm = gram_matrix(sec)
    b = riesz_bounds(gm, "frame_section" if spec.hypothesis == "frame" else "riesz_section")
    body = {"name": case["name"], "lower": b.lower, "upper": b.upper, "kind": b.kind,
            "conditioning": b.conditioning, "section_size": len(sec), "rank": gm.rank,
            "dual_frame_bound": dual_frame_bound(gm) if len(gm) else float("nan")}
    text = json.dumps(_clean(body), sort_keys=True, indent=2) + "\n"
    return {f"bounds_{case['name']}.json": text}


def _commutation_report(case) -> VerificationReport:
    from .report import finish
    g = case["signals"][0]
    res = [commutation_phase(a, b, g)[1] for a, b in case["pairs"]]
    rep = VerificationReport("commutation_phase", inputs={"signal": g.label, "pairs": case["pairs"]},
                             measured={"residuals": res}, bound={"tolerance": case["tol"]})
    return finish(rep, case["tol"] - max(res))


def _covariance_report(case) -> VerificationReport:
    from .report import finish
    reps = [check_covariance(g, s, case["samples"]) for g in case["signals"] for s in case["shifts"]]
    worst = max(r.measured["max_discrepancy"] for r in reps)
    rep = VerificationReport("stft_covariance",
                             inputs={"signals": [g.label for g in case["signals"]],
                                     "shifts": case["shifts"], "n_points": len(case["samples"])},
                             measured={"max_discrepancy": worst,
                                       "per_check": [r.measured["max_discrepancy"] for r in reps]},
                             bound=reps[0].bound)
    return finish(rep, min(r.margin for r in reps))


def _hap_report(case) -> VerificationReport:
    pts = _point_array(case["points"], {"raw": {"window": case["raw"].get("window")}})
    hr = hap_radius(case["signals"][0], PointSet(pts), case["epsilon"], case["probes"],
                    float(case["raw"].get("max_radius", 8.0)))
    rep = VerificationReport("hap_radius",
                             inputs={"signal": case["signals"][0].label, "epsilon": case["epsilon"],
                                     "probes": case["probes"], "n_points": len(pts)},
                             measured={"radius": hr.radius, "best_error": hr.best_error,
                                       "per_probe": hr.per_probe})
    rep.passed, rep.margin = hr.found, (case["epsilon"] - hr.best_error)
    rep.status = "pass" if hr.found else FAIL
    return rep


def _verify(case) -> VerificationReport:
    check = case["check"]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        if check == "density_theorem":
            rep = verify_density_theorem(case["spec"])
        elif check == "uniform_minimality":
            rep = verify_uniform_minimality_density(case["spec"], case["epsilons"])
        elif check == "err2_bound":
            rep = err2_bound_check(case["signals"][0], case["alpha"], case["radii"], case["phase_grid"])
        elif check == "covariance":
            rep = _covariance_report(case)
        elif check == "commutation":
            rep = _commutation_report(case)
        elif check == "shifted_dual":
            g = case["signals"][0]
            h = case["signals"][1] if len(case["signals"]) > 1 else g
            rep = shifted_dual_biorthogonality(case["lattice"], g, h, case["index_window"], case["tol"])
        else:
            rep = _hap_report(case)
    rep.inputs["case"] = case["name"]
    return rep


def _summary(reports: list) -> str:
    rows = ["name,check,status,pass,margin"]
    for name, check, rep in reports:
        rows.append(f"{name},{check},{rep['status']},{str(rep['pass']).lower()},{rep['margin']!r}")
    return "\n".join(rows) + "\n"


def execute(cfg: RunConfig) -> tuple:
    """Compute every artifact in memory. Returns ``(files, exit_code)``."""
    files, code = {}, EXIT_PASS
    if cfg.command == "report":
        collected = []
        for case in cfg.cases:
            p = cfg.out_dir / f"report_{case['name']}.json"
            if not p.is_file():
                raise ConfigError(f"missing report {p}; run 'verify' first")
            collected.append((case["name"], case["check"], json.loads(p.read_text())))
        files["summary.csv"] = _summary(collected)
        statuses = [r["status"] for _, _, r in collected]
    else:
        statuses = []
        for case in cfg.cases:
            if cfg.command == "stft":
                files.update(_run_stft(case))
            elif cfg.command == "density":
                files.update(_run_density(case))
            elif cfg.command == "bounds":
                files.update(_run_bounds(case))
            else:
                rep = _verify(case)
                files[f"report_{case['name']}.json"] = rep.to_json()
                statuses.append(rep.status)
    if FAIL in statuses:
        code = EXIT_VERIFICATION
    elif HYPOTHESIS_FAILURE in statuses:
        code = EXIT_HYPOTHESIS
    return files, code


def write_outputs(cfg: RunConfig, files: dict) -> None:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    artifacts = []
    for name in sorted(files):
        data = files[name].encode("utf-8")
        (cfg.out_dir / name).write_bytes(data)
        artifacts.append({"path": name, "sha256": hashlib.sha256(data).hexdigest()})
    manifest = {
        "command": cfg.command, "config": str(cfg.config_path), "config_sha256": cfg.config_hash,
        "seed": cfg.seed, "created": datetime.now(timezone.utc).isoformat(), "artifacts": artifacts,
    }
    (cfg.out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _check_threads() -> None:
    value = os.environ.get(THREADS_ENV)
    if value is not None and not (value.isdigit() and int(value) > 0):
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {value!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gabden", description="Density checks for Gabor systems.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="JSON run configuration")
    p.add_argument("--out", default=None, help="output directory (default: config 'out' or ./out)")
    p.add_argument("--seed", type=int, default=None, help="override the config seed (u64)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        _check_threads()
        cfg = load_config(args.config, args.command, args.out, args.seed)
        files, code = execute(cfg)
    except (ConfigError, ValueError, KeyError, TypeError) as exc:
        print(f"gabden: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    write_outputs(cfg, files)
    print(f"gabden {args.command}: wrote {len(files)} artifact(s) to {cfg.out_dir} (exit {code})")
    return code


if __name__ == "__main__":
    sys.exit(main())
