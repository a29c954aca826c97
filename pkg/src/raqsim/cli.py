"""Command-line interface.

Subcommands: ``run`` executes a sweep preset and writes CSV (and optionally
a figure), ``frontend`` prints the per-element receiver model, ``analyze``
prints the closed-form bounds and gap terms.  Exit codes: 0 on success, 2 on
configuration/validation errors, 1 on runtime errors.
"""

from __future__ import annotations

import argparse
import sys

from .config import load_config
from .errors import ConfigError, RaqsimError
from .report import analyze_report, frontend_report
from .sweep import dump_channel_csv, emit_outputs, preset_spec, run_sweep


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="raqsim",
        description="Uplink simulator for an atomic-vapor quantum receiver array",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a sweep preset and write results")
    run.add_argument("--config", required=True, help="JSON configuration file")
    run.add_argument("--preset", required=True,
                     choices=("fig-M", "fig-K", "fig-P"),
                     help="sweep campaign to run")
    run.add_argument("--trials", type=int, default=None,
                     help="Monte Carlo trials per grid point (default 500)")
    run.add_argument("--seed", type=int, default=None,
                     help="master seed (default from the configuration)")
    run.add_argument("--out", default="results.csv", help="output CSV path")
    run.add_argument("--plot", default=None, help="optional figure path (SVG)")
    run.add_argument("--dump-channel", default=None,
                     help="optional CSV with the user drop and gains")
    run.add_argument("--workers", type=int, default=None,
                     help="process count (default RAQSIM_THREADS or CPU count)")

    fe = sub.add_parser("frontend", help="print the receiver front-end model")
    fe.add_argument("--config", required=True, help="JSON configuration file")

    an = sub.add_parser("analyze", help="print closed-form bounds and gaps")
    an.add_argument("--config", required=True, help="JSON configuration file")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.command == "frontend":
            print(frontend_report(config))
        elif args.command == "analyze":
            print(analyze_report(config))
        else:
            seed = config.master_seed if args.seed is None else args.seed
            trials = config.trials if args.trials is None else args.trials
            spec = preset_spec(args.preset, trials=trials, master_seed=seed)
            table = run_sweep(spec, config, workers=args.workers)
            emit_outputs(table, args.out, args.plot)
            if args.dump_channel:
                dump_channel_csv(config, args.dump_channel, seed=(seed, 0))
            failures = sum(1 for row in table if row.err)
            print(f"wrote {len(table)} rows to {args.out}"
                  + (f" ({failures} rows carry errors)" if failures else ""))
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"configuration error: {problem}", file=sys.stderr)
        return 2
    except RaqsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
