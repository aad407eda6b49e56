#!/usr/bin/env python3
"""Run every registered experiment (or a chosen subset) and print a summary.

Each experiment writes its artifacts plus a manifest.json under
<output-dir>/<experiment-id>/; summarize() then derives a metrics.csv per
experiment. This is a thin wrapper over fracadrc.run_experiment — the same
thing `fracadrc reproduce all` does, but convenient for editing in place.
"""
from __future__ import annotations

import argparse
import sys

from fracadrc import EXPERIMENT_IDS, ExperimentSpec, run_experiment, summarize


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "ids",
        nargs="*",
        default=list(EXPERIMENT_IDS),
        metavar="EXPERIMENT",
        help=f"experiment ids to run (default: all of {', '.join(EXPERIMENT_IDS)})",
    )
    parser.add_argument(
        "--output-dir", default="results", help="root directory for artifacts"
    )
    parser.add_argument(
        "--horizon",
        type=float,
        default=None,
        help="override simulation horizon in seconds for time-domain experiments",
    )
    args = parser.parse_args(argv)

    unknown = [i for i in args.ids if i not in EXPERIMENT_IDS]
    if unknown:
        parser.error(f"unknown experiment ids: {', '.join(unknown)}")

    for exp_id in args.ids:
        overrides = {} if args.horizon is None else {"horizon": args.horizon}
        spec = ExperimentSpec(id=exp_id, output_dir=args.output_dir, overrides=overrides)
        manifest = run_experiment(spec)
        rows = summarize(manifest)
        print(f"{exp_id}: {', '.join(f['path'] for f in manifest['files'])}")
        for row in rows:
            cells = ", ".join(
                f"{k}={v:.6g}" for k, v in row.items() if isinstance(v, float)
            )
            print(f"    {row['artifact']}: {cells}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
