"""Scripted reproduction harness.

Each experiment id maps to one study: estimation-error MSE curves and their
parameter families, Bode comparisons of the compensated objects, the
stability report of the reference configuration, and the step-response /
loop-gain-robustness simulation batteries.  Artifacts land under
<output_dir>/<experiment_id>/ as CSV plus a JSON manifest; `summarize`
turns a manifest into a metrics table.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .control import (AdrcConfig, AdrcVariant, Trajectory, loop_gain_variants,
                      run_closed_loop)
from .freqdom import (ifio_evaluator, io_evaluator, bode, log_grid, mse_ifio,
                      mse_io, write_bode_csv, write_mse_csv)
from .plant import DisturbanceSignal, FracPlant
from .stability import build_char_poly, rationalize_order, sector_test

# Reference bench parameters shared by the simulation experiments and the
# CLI defaults: plant 1/(s**0.8 + 10) at 8 kHz, K = 150, omega_o = 400.
DEFAULT_PARAMS = {
    "a_o": 10.0,
    "b_o": 1.0,
    "b": 1.0,
    "mu": 0.8,
    "K": 150.0,
    "omega_o": 400.0,
    "Ts": 1.0 / 8000.0,
    "horizon": 1.0,
}

# Estimation-error studies run at a higher observer bandwidth where the
# integer/fractional contrast is pronounced.
MSE_BASE = {"a_o": 10.0, "omega_o": 1600.0, "mu": 0.6}
MSE_GRID = (1.0, 1e5, 60)          # omega span (rad/s) and points/decade
MSE_FAMILIES = {
    "fig5": ("mu", (0.4, 0.6, 0.8)),
    "fig6": ("a_o", (5.0, 10.0, 20.0)),
    "fig7": ("omega_o", (800.0, 1600.0, 3200.0)),
}
BODE_MUS = {"fig8": 0.6, "fig9": 0.9}
BODE_GRID = (0.1, 1e5, 60)
LOOP_GAIN_SCALES = (0.5, 1.0, 2.0)
LOOP_GAIN_VARIANTS = {
    "fig12": AdrcVariant.IADRC,
    "fig13": AdrcVariant.FADRC,
    "fig14": AdrcVariant.IFADRC,
}

EXPERIMENT_IDS = ("fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10",
                  "fig11", "fig12", "fig13", "fig14")

TRANSIENT_WINDOW = 0.2  # s, window for the compensation-residual RMS


class UnstableConfigError(RuntimeError):
    """Custom experiment rejected because the sector test failed."""

    def __init__(self, report):
        super().__init__(f"configuration is unstable "
                         f"(sector margin {report.margin:.6g})")
        self.report = report


@dataclass
class ExperimentSpec:
    id: str
    overrides: dict = field(default_factory=dict)
    output_dir: str | Path = "results"


def _params(overrides: dict) -> dict:
    params = dict(DEFAULT_PARAMS)
    unknown = set(overrides) - set(DEFAULT_PARAMS) - {"variant", "memory_len"}
    if unknown:
        raise ValueError(f"unknown override keys {sorted(unknown)}")
    params.update(overrides)
    return params


def _make_cfg(params: dict, variant: AdrcVariant) -> AdrcConfig:
    return AdrcConfig(variant=variant, K=params["K"],
                      omega_o=params["omega_o"], b=params["b"],
                      Ts=params["Ts"], horizon=params["horizon"],
                      memory_len=params.get("memory_len"))


def _make_plant(params: dict) -> FracPlant:
    return FracPlant(params["a_o"], params["b_o"], params["mu"], params["Ts"],
                     params.get("memory_len"))


def _mse_file(outdir: Path, name: str, a_o: float, mu: float,
              omega_o: float) -> dict:
    grid = log_grid(*MSE_GRID)
    write_mse_csv(outdir / name, grid, mse_io(grid, a_o, mu, omega_o),
                  mse_ifio(grid, a_o, mu, omega_o))
    return {"path": name, "kind": "mse",
            "parameters": {"a_o": a_o, "mu": mu, "omega_o": omega_o,
                           "omega_min": MSE_GRID[0], "omega_max": MSE_GRID[1],
                           "points_per_decade": MSE_GRID[2]}}


def _trajectory_file(outdir: Path, name: str, traj: Trajectory,
                     parameters: dict) -> dict:
    traj.to_csv(outdir / name)
    return {"path": name, "kind": "trajectory", "parameters": parameters}


def run_experiment(spec: ExperimentSpec) -> dict:
    """Execute one experiment; returns the manifest (also written to disk)."""
    if spec.id not in EXPERIMENT_IDS and spec.id != "custom":
        raise ValueError(f"unknown experiment id {spec.id!r}")
    outdir = Path(spec.output_dir) / spec.id
    outdir.mkdir(parents=True, exist_ok=True)
    files: list[dict] = []
    manifest_params: dict = {}

    if spec.id == "fig4":
        base = dict(MSE_BASE)
        base.update({k: spec.overrides[k] for k in base if k in spec.overrides})
        files.append(_mse_file(outdir, "mse.csv", base["a_o"], base["mu"],
                               base["omega_o"]))
        manifest_params = base

    elif spec.id in MSE_FAMILIES:
        key, values = MSE_FAMILIES[spec.id]
        base = dict(MSE_BASE)
        for v in values:
            varied = dict(base)
            varied[key] = v
            files.append(_mse_file(outdir, f"mse_{key}_{v:g}.csv",
                                   varied["a_o"], varied["mu"],
                                   varied["omega_o"]))
        manifest_params = {**base, "family": key, "values": list(values)}

    elif spec.id in BODE_MUS:
        params = dict(MSE_BASE)
        params["mu"] = BODE_MUS[spec.id]
        params["b"] = params["b_o"] = 1.0
        grid = log_grid(*BODE_GRID)
        for tag, factory in (("io", io_evaluator), ("ifio", ifio_evaluator)):
            G = factory(params["a_o"], params["b_o"], params["b"],
                        params["mu"], params["omega_o"])
            mag, phase = bode(G, grid)
            name = f"bode_g_{tag}.csv"
            write_bode_csv(outdir / name, grid, mag.values, phase.values)
            files.append({"path": name, "kind": "bode",
                          "parameters": {**params, "transfer": f"g_{tag}"}})
        manifest_params = params

    elif spec.id == "fig10":
        params = _params(spec.overrides)
        p, q_den = rationalize_order(params["mu"])
        poly = build_char_poly(params["b"], params["b_o"], params["a_o"],
                               params["K"], 2.0 * params["omega_o"],
                               params["omega_o"] ** 2, p, q_den)
        report = sector_test(poly)
        report.write(outdir / "stability_report.json")
        files.append({"path": "stability_report.json",
                      "kind": "stability_report",
                      "parameters": {**params, "p": p, "q_den": q_den}})
        manifest_params = params

    elif spec.id == "fig11":
        params = _params(spec.overrides)
        for variant in AdrcVariant:
            cfg = _make_cfg(params, variant)
            traj = run_closed_loop(cfg, _make_plant(params))
            files.append(_trajectory_file(
                outdir, f"step_{variant.value}.csv", traj,
                {**params, "variant": variant.value}))
        manifest_params = params

    elif spec.id in LOOP_GAIN_VARIANTS:
        params = _params(spec.overrides)
        variant = LOOP_GAIN_VARIANTS[spec.id]
        cfg = _make_cfg(params, variant)
        trajs = loop_gain_variants(cfg, _make_plant(params),
                                   LOOP_GAIN_SCALES)
        for scale, traj in zip(LOOP_GAIN_SCALES, trajs):
            files.append(_trajectory_file(
                outdir, f"step_{variant.value}_scale_{scale:g}.csv", traj,
                {**params, "variant": variant.value, "gain_scale": scale}))
        manifest_params = {**params, "variant": variant.value,
                           "scales": list(LOOP_GAIN_SCALES)}

    else:  # custom
        params = _params(spec.overrides)
        variant = AdrcVariant(str(spec.overrides.get("variant",
                                                     "ifadrc")).lower())
        p, q_den = rationalize_order(params["mu"])
        poly = build_char_poly(params["b"], params["b_o"], params["a_o"],
                               params["K"], 2.0 * params["omega_o"],
                               params["omega_o"] ** 2, p, q_den)
        report = sector_test(poly)
        report.write(outdir / "stability_report.json")
        files.append({"path": "stability_report.json",
                      "kind": "stability_report",
                      "parameters": {**params, "p": p, "q_den": q_den}})
        if not report.stable:
            _write_manifest(outdir, spec.id, {**params,
                                              "variant": variant.value},
                            files)
            raise UnstableConfigError(report)
        cfg = _make_cfg(params, variant)
        traj = run_closed_loop(cfg, _make_plant(params))
        files.append(_trajectory_file(outdir, "trajectory.csv", traj,
                                      {**params, "variant": variant.value}))
        manifest_params = {**params, "variant": variant.value}

    return _write_manifest(outdir, spec.id, manifest_params, files)


def _write_manifest(outdir: Path, exp_id: str, parameters: dict,
                    files: list[dict]) -> dict:
    manifest = {"experiment": exp_id, "directory": str(outdir),
                "parameters": parameters, "files": files}
    with open(outdir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def step_metrics(t: np.ndarray, y: np.ndarray, v_d: np.ndarray,
                 u0: np.ndarray | None = None,
                 Ts: float | None = None) -> dict:
    """Step-response quality numbers for one trajectory.

    overshoot (% of target), 2%-band settling time, relative steady-state
    error, 10-90% rise time, and the RMS of the compensation residual
    ydot - u0 over the transient window.  An identically zero trajectory
    reports all zeros.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    v_d = np.asarray(v_d, dtype=float)
    Ts = float(Ts if Ts is not None else (t[1] - t[0]))
    target = float(v_d[-1])
    scale = abs(target) if target != 0.0 else float(np.max(np.abs(y)))
    if scale == 0.0:
        out = {"overshoot_pct": 0.0, "settle_2pct_s": 0.0, "ss_error": 0.0,
               "rise_10_90_s": 0.0}
    else:
        sign = 1.0 if target >= 0.0 else -1.0
        overshoot = max(0.0, float(sign * (np.max(sign * y) - target)) / scale)
        outside = np.abs(y - target) > 0.02 * scale
        settle = 0.0 if not outside.any() else float(t[np.max(np.nonzero(outside))] + Ts)
        above10 = np.nonzero(sign * y >= 0.1 * scale)[0]
        above90 = np.nonzero(sign * y >= 0.9 * scale)[0]
        rise = float("nan")
        if above10.size and above90.size:
            rise = float(t[above90[0]] - t[above10[0]])
        out = {"overshoot_pct": 100.0 * overshoot,
               "settle_2pct_s": settle,
               "ss_error": float(abs(y[-1] - target)) / scale,
               "rise_10_90_s": rise}
    if u0 is not None:
        window = t <= TRANSIENT_WINDOW
        resid = np.gradient(y, Ts)[window] - np.asarray(u0, float)[window]
        out["comp_resid_rms"] = float(np.sqrt(np.mean(resid * resid)))
    return out


def _mse_curve_metrics(path: Path) -> dict:
    data = np.genfromtxt(path, delimiter=",", names=True)
    ratio = data["e_io"] / data["e_ifio"]
    return {"max_mse_ratio": float(np.max(ratio))}


def summarize(manifest: dict | str | Path) -> list[dict]:
    """Metrics table for every trajectory/MSE artifact in a manifest.

    Also written as metrics.csv beside the manifest.  Returns the rows.
    """
    if not isinstance(manifest, dict):
        with open(manifest) as fh:
            manifest = json.load(fh)
    outdir = Path(manifest["directory"])
    rows: list[dict] = []
    for entry in manifest["files"]:
        path = outdir / entry["path"]
        if entry["kind"] == "trajectory":
            traj = Trajectory.from_csv(path)
            metrics = step_metrics(traj.t, traj.y, traj.v_d, traj.u0, traj.Ts)
        elif entry["kind"] == "mse":
            metrics = _mse_curve_metrics(path)
        else:
            continue
        rows.append({"artifact": entry["path"], "kind": entry["kind"],
                     **metrics})
    columns = ["artifact", "kind", "overshoot_pct", "settle_2pct_s",
               "ss_error", "rise_10_90_s", "comp_resid_rms", "max_mse_ratio"]
    with open(outdir / "metrics.csv", "w", newline="") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            cells = ["" if c not in row else repr(float(row[c]))
                     if isinstance(row[c], (int, float, np.floating))
                     else str(row[c]) for c in columns]
            fh.write(",".join(cells) + "\n")
    return rows
