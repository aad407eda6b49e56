"""Command-line front end.

Subcommands: simulate, sweep, bode, mse, stability, reproduce.  Parameters
resolve in three layers: built-in defaults, then a flat `key = value`
config file (--config), then explicit flags.  Exit codes: 0 success /
stable verdict, 1 invalid arguments, 2 unstable verdict, 3 simulation
divergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .control import (AdrcConfig, AdrcVariant, SimulationDiverged,
                      loop_gain_variants, run_closed_loop)
from .experiments import (DEFAULT_PARAMS, EXPERIMENT_IDS, ExperimentSpec,
                          UnstableConfigError, run_experiment, step_metrics,
                          summarize)
from .freqdom import (bode, ifio_evaluator, io_evaluator, log_grid, mse_ifio,
                      mse_io, write_bode_csv, write_mse_csv)
from .plant import DisturbanceSignal, FracPlant
from .stability import build_char_poly, rationalize_order, sector_test

PARAM_KEYS = ("a_o", "b_o", "b", "mu", "K", "omega_o", "Ts", "horizon",
              "variant", "memory_len")


class CliError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; this front end reserves 2 for the
    # unstable verdict, so usage errors map to 1 instead
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="FILE",
                   help="flat 'key = value' parameter file; flags override it")
    p.add_argument("--a_o", type=float, help="plant pole coefficient")
    p.add_argument("--b_o", type=float, help="true plant gain")
    p.add_argument("--b", type=float, help="controller's nominal gain")
    p.add_argument("--mu", type=float, help="fractional order in (0, 1)")
    p.add_argument("--K", type=float, help="outer-loop proportional gain")
    p.add_argument("--omega_o", type=float, help="observer bandwidth, rad/s")
    p.add_argument("--Ts", type=float, help="sample time, seconds")
    p.add_argument("--horizon", type=float, help="simulation length, seconds")
    p.add_argument("--variant", choices=[v.value for v in AdrcVariant],
                   help="controller structure (default ifadrc)")
    p.add_argument("--memory-len", dest="memory_len", type=int,
                   help="GL history truncation in samples (default: full)")
    p.add_argument("--output-dir", default="results",
                   help="artifact root directory (default: results)")


def _add_grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--omega-min", type=float, default=None)
    p.add_argument("--omega-max", type=float, default=None)
    p.add_argument("--points-per-decade", type=int, default=60)


def _build_parser() -> _Parser:
    parser = _Parser(prog="fracadrc",
                     description="ADRC structures for fractional-order "
                                 "plants: simulation, stability, and "
                                 "estimation-error analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[], help="one closed-loop step run")
    _add_param_flags(p)
    p.add_argument("--setpoint", type=float, default=1.0,
                   help="constant reference value (default 1.0)")
    p.add_argument("--dist-kind", choices=DisturbanceSignal.KINDS[:3],
                   default="zero", help="input disturbance shape")
    p.add_argument("--dist-amplitude", type=float, default=0.0)
    p.add_argument("--dist-frequency", type=float, default=0.0,
                   help="rad/s, sinusoid disturbance")
    p.add_argument("--dist-onset", type=float, default=0.0,
                   help="seconds, step disturbance")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="loop-gain or parameter grid of runs")
    _add_param_flags(p)
    p.add_argument("--scales", help="comma list of plant-gain scales")
    p.add_argument("--param", choices=["K", "omega_o", "mu", "a_o"],
                   help="parameter to grid over")
    p.add_argument("--values", help="comma list of values for --param")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bode", help="compensated-object Bode CSVs")
    _add_param_flags(p)
    _add_grid_flags(p)
    p.add_argument("--which", choices=["io", "ifio", "both"], default="both")
    p.set_defaults(func=cmd_bode)

    p = sub.add_parser("mse", help="estimation-error closed-form curves")
    _add_param_flags(p)
    _add_grid_flags(p)
    p.set_defaults(func=cmd_mse)

    p = sub.add_parser("stability", help="sector test of the closed loop "
                                         "(exit 0 stable, 2 unstable)")
    _add_param_flags(p)
    p.add_argument("--report", metavar="FILE",
                   help="also write the JSON stability report here")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("reproduce", help="run stored experiments")
    _add_param_flags(p)
    p.add_argument("experiment",
                   help=f"one of {', '.join(EXPERIMENT_IDS)}, custom, or all")
    p.set_defaults(func=cmd_reproduce)
    return parser


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key == "variant":
        return raw.lower()
    if key == "memory_len":
        if raw.lower() in ("none", ""):
            return None
        try:
            return int(raw)
        except ValueError:
            raise CliError(f"invalid value for 'memory_len': {raw!r}")
    try:
        return float(raw)
    except ValueError:
        raise CliError(f"invalid value for '{key}': {raw!r}")


def load_config_file(path) -> dict:
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise CliError(f"cannot read config file {path}: {exc}")
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in PARAM_KEYS:
            raise CliError(f"{path}:{lineno}: unknown config key '{key}'")
        out[key] = _parse_value(key, value)
    return out


def _validate(params: dict) -> dict:
    checks = {
        "mu": (lambda v: 0.0 < v < 1.0, "must lie in (0, 1)"),
        "K": (lambda v: v > 0.0, "must be positive"),
        "omega_o": (lambda v: v > 0.0, "must be positive"),
        "Ts": (lambda v: v > 0.0, "must be positive"),
        "horizon": (lambda v: v > 0.0, "must be positive"),
        "b": (lambda v: v != 0.0, "must be nonzero"),
        "b_o": (lambda v: v != 0.0, "must be nonzero"),
    }
    for key, (ok, why) in checks.items():
        if key in params and not ok(params[key]):
            raise CliError(f"invalid value for '{key}': {params[key]} ({why})")
    if params.get("memory_len") is not None and params["memory_len"] < 1:
        raise CliError(f"invalid value for 'memory_len': "
                       f"{params['memory_len']} (must be >= 1)")
    return params


def resolve_params(args) -> dict:
    params = dict(DEFAULT_PARAMS)
    params["variant"] = "ifadrc"
    params["memory_len"] = None
    if getattr(args, "config", None):
        params.update(load_config_file(args.config))
    for key in PARAM_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    return _validate(params)


def _cfg_and_plant(params: dict) -> tuple[AdrcConfig, FracPlant]:
    cfg = AdrcConfig(variant=AdrcVariant(params["variant"]), K=params["K"],
                     omega_o=params["omega_o"], b=params["b"],
                     Ts=params["Ts"], horizon=params["horizon"],
                     memory_len=params["memory_len"])
    plant = FracPlant(params["a_o"], params["b_o"], params["mu"],
                      params["Ts"], params["memory_len"])
    return cfg, plant


def _write_manifest(outdir: Path, command: str, params: dict,
                    files: list[dict]) -> None:
    manifest = {"command": command, "directory": str(outdir),
                "parameters": params, "files": files}
    with open(outdir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _grid_from(args, default_min: float, default_max: float):
    lo = args.omega_min if args.omega_min is not None else default_min
    hi = args.omega_max if args.omega_max is not None else default_max
    try:
        return log_grid(lo, hi, args.points_per_decade)
    except ValueError as exc:
        raise CliError(str(exc))


def cmd_simulate(args, params: dict) -> int:
    cfg, plant = _cfg_and_plant(params)
    if args.dist_kind == "zero":
        dist = DisturbanceSignal.zero()
    elif args.dist_kind == "step":
        dist = DisturbanceSignal.step(args.dist_amplitude, args.dist_onset)
    else:
        dist = DisturbanceSignal.sinusoid(args.dist_amplitude,
                                          args.dist_frequency)
    traj = run_closed_loop(cfg, plant, v_d=args.setpoint, d=dist)
    outdir = Path(args.output_dir) / "simulate"
    outdir.mkdir(parents=True, exist_ok=True)
    traj.to_csv(outdir / "trajectory.csv")
    meta = {**params, "setpoint": args.setpoint,
            "dist_kind": args.dist_kind,
            "dist_amplitude": args.dist_amplitude,
            "dist_frequency": args.dist_frequency,
            "dist_onset": args.dist_onset}
    _write_manifest(outdir, "simulate", meta,
                    [{"path": "trajectory.csv", "kind": "trajectory",
                      "parameters": meta}])
    m = step_metrics(traj.t, traj.y, traj.v_d, traj.u0, traj.Ts)
    print(f"simulate: {params['variant']} settle_2pct={m['settle_2pct_s']:.4g}s "
          f"overshoot={m['overshoot_pct']:.3g}% ss_error={m['ss_error']:.3g}")
    print(f"wrote {outdir / 'trajectory.csv'}")
    return 0


def _parse_float_list(raw: str, flag: str) -> list[float]:
    try:
        values = [float(x) for x in raw.split(",") if x.strip()]
    except ValueError:
        raise CliError(f"invalid value for '{flag}': {raw!r}")
    if not values:
        raise CliError(f"'{flag}' must list at least one value")
    return values


def cmd_sweep(args, params: dict) -> int:
    outdir = Path(args.output_dir) / "sweep"
    outdir.mkdir(parents=True, exist_ok=True)
    files = []
    if args.scales:
        scales = _parse_float_list(args.scales, "scales")
        if any(s <= 0 for s in scales):
            raise CliError(f"invalid value for 'scales': {args.scales!r} "
                           f"(must be positive)")
        cfg, plant = _cfg_and_plant(params)
        for scale, traj in zip(scales,
                               loop_gain_variants(cfg, plant, scales)):
            name = f"step_{params['variant']}_scale_{scale:g}.csv"
            traj.to_csv(outdir / name)
            files.append({"path": name, "kind": "trajectory",
                          "parameters": {**params, "gain_scale": scale}})
        meta = {**params, "scales": scales}
    elif args.param and args.values:
        values = _parse_float_list(args.values, "values")
        for value in values:
            point = dict(params)
            point[args.param] = value
            _validate(point)
            cfg, plant = _cfg_and_plant(point)
            traj = run_closed_loop(cfg, plant)
            name = f"step_{args.param}_{value:g}.csv"
            traj.to_csv(outdir / name)
            files.append({"path": name, "kind": "trajectory",
                          "parameters": point})
        meta = {**params, "param": args.param, "values": values}
    else:
        raise CliError("sweep needs --scales or both --param and --values")
    _write_manifest(outdir, "sweep", meta, files)
    print(f"wrote {len(files)} trajectories under {outdir}")
    return 0


def cmd_bode(args, params: dict) -> int:
    grid = _grid_from(args, 0.1, 1e5)
    outdir = Path(args.output_dir) / "bode"
    outdir.mkdir(parents=True, exist_ok=True)
    which = {"io": ("io",), "ifio": ("ifio",),
             "both": ("io", "ifio")}[args.which]
    factories = {"io": io_evaluator, "ifio": ifio_evaluator}
    files = []
    for tag in which:
        G = factories[tag](params["a_o"], params["b_o"], params["b"],
                           params["mu"], params["omega_o"])
        mag, phase = bode(G, grid)
        name = f"bode_g_{tag}.csv"
        write_bode_csv(outdir / name, grid, mag.values, phase.values)
        files.append({"path": name, "kind": "bode",
                      "parameters": {**params, "transfer": f"g_{tag}"}})
    _write_manifest(outdir, "bode", {**params, "which": args.which,
                                     "omega_min": float(grid[0]),
                                     "omega_max": float(grid[-1]),
                                     "points_per_decade":
                                         args.points_per_decade}, files)
    print(f"wrote {len(files)} Bode tables under {outdir}")
    return 0


def cmd_mse(args, params: dict) -> int:
    if params["b"] != params["b_o"]:
        raise CliError("invalid value for 'b': closed-form estimation-error "
                       "curves require matched gain b = b_o")
    grid = _grid_from(args, 1.0, 1e5)
    outdir = Path(args.output_dir) / "mse"
    outdir.mkdir(parents=True, exist_ok=True)
    write_mse_csv(outdir / "mse.csv", grid,
                  mse_io(grid, params["a_o"], params["mu"],
                         params["omega_o"]),
                  mse_ifio(grid, params["a_o"], params["mu"],
                           params["omega_o"]))
    _write_manifest(outdir, "mse", {**params, "omega_min": float(grid[0]),
                                    "omega_max": float(grid[-1]),
                                    "points_per_decade":
                                        args.points_per_decade},
                    [{"path": "mse.csv", "kind": "mse", "parameters": params}])
    print(f"wrote {outdir / 'mse.csv'}")
    return 0


def cmd_stability(args, params: dict) -> int:
    p, q_den = rationalize_order(params["mu"])
    poly = build_char_poly(params["b"], params["b_o"], params["a_o"],
                           params["K"], 2.0 * params["omega_o"],
                           params["omega_o"] ** 2, p, q_den)
    report = sector_test(poly)
    verdict = "stable" if report.stable else "unstable"
    if report.marginal:
        verdict += " (marginal)"
    print(f"{verdict}: degree={report.degree} lambda={report.lam:.6g} "
          f"margin={report.margin:.6g} rad "
          f"(K={params['K']:g}, omega_o={params['omega_o']:g}, "
          f"mu={params['mu']:g}, a_o={params['a_o']:g}, "
          f"b={params['b']:g}, b_o={params['b_o']:g})")
    if args.report:
        report.write(args.report)
        print(f"wrote {args.report}")
    return 0 if report.stable else 2


def cmd_reproduce(args, params: dict) -> int:
    ids = list(EXPERIMENT_IDS) if args.experiment == "all" \
        else [args.experiment]
    for exp_id in ids:
        if exp_id not in EXPERIMENT_IDS and exp_id != "custom":
            raise CliError(f"invalid value for 'experiment': {exp_id!r}")
    manifests = []
    for exp_id in ids:
        overrides = {}
        if exp_id == "custom":
            overrides = {k: params[k] for k in DEFAULT_PARAMS}
            overrides["variant"] = params["variant"]
            if params.get("memory_len") is not None:
                overrides["memory_len"] = params["memory_len"]
        spec = ExperimentSpec(id=exp_id, overrides=overrides,
                              output_dir=args.output_dir)
        manifest = run_experiment(spec)
        summarize(manifest)
        manifests.append(manifest)
        print(f"{exp_id}: {len(manifest['files'])} artifacts under "
              f"{manifest['directory']}")
    if args.experiment == "all":
        index = {"command": "reproduce all",
                 "experiments": [{"experiment": m["experiment"],
                                  "manifest": str(Path(m["directory"]) /
                                                  "manifest.json")}
                                 for m in manifests]}
        with open(Path(args.output_dir) / "manifest.json", "w") as fh:
            json.dump(index, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        params = resolve_params(args)
        return args.func(args, params)
    except CliError as exc:
        print(f"fracadrc: error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"fracadrc: error: {exc}", file=sys.stderr)
        return 1
    except SimulationDiverged as exc:
        print(f"fracadrc: simulation diverged: {exc}", file=sys.stderr)
        return 3
    except UnstableConfigError as exc:
        print(f"fracadrc: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
