#!/usr/bin/env python3
"""Compare the three controller variants on a unit step and print metrics.

Runs the integer, fractional, and improved-fractional observer loops on the
same plant, prints rise/settle/overshoot per variant, and optionally writes
the trajectories as CSV.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from fracadrc import AdrcConfig, AdrcVariant, FracPlant, run_closed_loop, step_metrics


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--a_o", type=float, default=10.0, help="plant pole coefficient")
    parser.add_argument("--b_o", type=float, default=1.0, help="true plant gain")
    parser.add_argument("--b", type=float, default=1.0, help="controller nominal gain")
    parser.add_argument("--mu", type=float, default=0.8, help="plant fractional order")
    parser.add_argument("--K", type=float, default=150.0, help="proportional gain")
    parser.add_argument("--omega_o", type=float, default=400.0, help="observer bandwidth")
    parser.add_argument("--Ts", type=float, default=1.0 / 8000.0, help="sample time")
    parser.add_argument("--horizon", type=float, default=1.0, help="simulation length")
    parser.add_argument(
        "--csv-dir", default=None, help="if set, write step_<variant>.csv files here"
    )
    args = parser.parse_args(argv)

    header = (
        f"{'variant':<8} {'rise_10_90_s':>13} {'settle_2pct_s':>14}"
        f" {'overshoot_pct':>14} {'ss_error':>12} {'comp_resid_rms':>15}"
    )
    print(header)
    print("-" * len(header))
    for variant in AdrcVariant:
        cfg = AdrcConfig(
            variant=variant,
            K=args.K,
            omega_o=args.omega_o,
            b=args.b,
            Ts=args.Ts,
            horizon=args.horizon,
        )
        plant = FracPlant(a_o=args.a_o, b_o=args.b_o, mu=args.mu, Ts=args.Ts)
        traj = run_closed_loop(cfg, plant, v_d=1.0)
        m = step_metrics(traj.t, traj.y, traj.v_d, u0=traj.u0, Ts=args.Ts)
        print(
            f"{variant.value:<8} {m['rise_10_90_s']:>13.6g} {m['settle_2pct_s']:>14.6g}"
            f" {m['overshoot_pct']:>14.6g} {m['ss_error']:>12.6g}"
            f" {m['comp_resid_rms']:>15.6g}"
        )
        if args.csv_dir is not None:
            outdir = Path(args.csv_dir)
            outdir.mkdir(parents=True, exist_ok=True)
            path = outdir / f"step_{variant.value}.csv"
            traj.to_csv(path)
            print(f"    wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
