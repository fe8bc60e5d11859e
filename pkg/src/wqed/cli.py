"""Command-line entry point.

    wqed <subcommand> [--config file.yaml] [--set key.path=value ...] --out DIR

Exit codes: 0 success, 1 configuration error, 2 convergence failure,
3 solver failure. WQED_THREADS caps sweep parallelism.
"""
from __future__ import annotations

import argparse
import sys

from .config import config_hash, load_config
from .errors import ConfigError, ConvergenceError, SolverError, WqedError
from .runner import SUBCOMMANDS, run


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wqed",
        description="Polaron-frame simulator for qubits ultrastrongly coupled "
                    "to a cavity-array waveguide")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in sorted(SUBCOMMANDS):
        p = sub.add_parser(name)
        p.add_argument("--config", default=None,
                       help="YAML run configuration (defaults apply if omitted)")
        p.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE",
                       help="override a dotted config path, e.g. model.g=0.4")
        p.add_argument("--out", default="wqed-out",
                       help="output directory for CSV tables and metadata")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.overrides)
        code = run(args.subcommand, cfg, config_hash(cfg), args.out)
    except ConfigError as err:
        print(f"wqed: config error [{args.subcommand}]: {err}", file=sys.stderr)
        return 1
    except ConvergenceError as err:
        print(f"wqed: convergence error [{args.subcommand}]: {err}",
              file=sys.stderr)
        return 2
    except SolverError as err:
        print(f"wqed: solver error [{args.subcommand}]: {err}", file=sys.stderr)
        return 3
    except WqedError as err:
        print(f"wqed: error [{args.subcommand}]: {err}", file=sys.stderr)
        return err.exit_code
    if code == 2:
        print(f"wqed: {args.subcommand} finished with flagged points "
              "(see sidecar metadata)", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
