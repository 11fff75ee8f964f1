"""Command line front end.

`ratchet list` prints the scenario table; `ratchet run <scenario>` executes
one scenario, optionally under a YAML config, and reports the artifact paths
on stdout. Failures print a one-line JSON record to stderr and exit 1.
"""

from __future__ import annotations

import argparse
import json
import sys

from .harness import SCENARIOS, ConfigError, ExperimentConfig, run_scenario


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ratchet",
        description="Kicked-atom ratchet simulations on a momentum ladder.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list available scenarios")

    run = sub.add_parser("run", help="run one scenario and write its artifacts")
    run.add_argument("scenario", help="scenario name (see 'ratchet list')")
    run.add_argument("--config", help="YAML file with params/numerics overrides")
    run.add_argument("--out", help="output directory (default results/<scenario>)")
    run.add_argument(
        "--workers", type=int, help="process count for parallelizable scans"
    )
    run.add_argument(
        "--format",
        choices=("csv", "json", "svg"),
        help="csv (default), json (adds JSON twins), or svg figures",
    )
    return parser


def _cmd_list() -> int:
    width = max(len(name) for name in SCENARIOS)
    for name in sorted(SCENARIOS):
        print(f"{name:<{width}}  {SCENARIOS[name].description}")
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    if args.config:
        config = ExperimentConfig.from_yaml(args.config)
        if config.scenario != args.scenario:
            raise ConfigError(
                f"config is for scenario {config.scenario!r}, "
                f"but {args.scenario!r} was requested"
            )
    else:
        config = ExperimentConfig(scenario=args.scenario)
    if args.out:
        config.outdir = args.out
    if args.workers is not None:
        config.numerics = {**config.numerics, "workers": args.workers}
    if args.format:
        config.output_format = args.format

    result = run_scenario(config)
    print(f"scenario : {result['scenario']}")
    print(f"outdir   : {result['outdir']}")
    for path in result["outputs"]:
        print(f"wrote    : {path}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list":
            return _cmd_list()
        return _cmd_run(args)
    except Exception as exc:  # surface everything as a machine-readable record
        record = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(record), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
