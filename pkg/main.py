#!/usr/bin/env python3
"""
LiePlateau - Main Entry Point

    python main.py dla --config configs/tfim.json --n 4
    python main.py variance --config configs/setup0.json
    python main.py reproduce-si --n-range 3 9 --samples 5000

Exit codes: 0 success, 1 config error, 2 truncated closure, 3 outside theory,
4 no convergence.
"""

import sys
import argparse
from pathlib import Path

# Add the project root to the path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from lie_plateau import __version__  # noqa: E402
from lie_plateau.cli.commands import COMMANDS, cmd_reproduce_si  # noqa: E402
from lie_plateau.cli.reports import print_summary  # noqa: E402
from lie_plateau.config.experiment import load_experiment_config  # noqa: E402
from lie_plateau.config.settings import get_settings  # noqa: E402
from lie_plateau.core.constants import EXIT_CONFIG  # noqa: E402
from lie_plateau.core.exceptions import LiePlateauError  # noqa: E402
from lie_plateau.core.utils.logger import get_logger, set_log_level  # noqa: E402

logger = get_logger("lie_plateau.main")

SUBCOMMANDS = {
    "dla": "Lie closure and reductive decomposition",
    "purity": "g-purities of the state and observable",
    "variance": "exact loss mean and variance (+ BP diagnosis over an n-range)",
    "montecarlo": "Monte Carlo variance next to the exact prediction",
    "depth": "lambda_max, 2-design depths and gap bounds for Haar brickwork",
    "reproduce-si": "Setups 0-3 over an n-range with Monte Carlo cross-checks",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="LiePlateau - barren plateaus from dynamical Lie algebras")
    parser.add_argument("--version", action="version", version=f"LiePlateau {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    for name, help_text in SUBCOMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("--config", type=Path, help="Experiment config (JSON)")
        size = sub.add_mutually_exclusive_group()
        size.add_argument("--n", type=int, help="System size, overrides the config")
        size.add_argument("--n-range", type=int, nargs=2, metavar=("LOW", "HIGH"), help="Inclusive size range")
        sub.add_argument("--samples", type=int, help="Monte Carlo samples")
        sub.add_argument("--seed", type=int, help="Run seed")
        sub.add_argument("--out", type=Path, help="Output directory for reports and CSV tables")
        sub.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
        sub.add_argument("--quiet", action="store_true", help="Skip the summary table")
        if name == "reproduce-si":
            sub.add_argument("--no-mc", action="store_true", help="Exact predictions only")
            sub.add_argument("--setups", type=int, nargs="+", choices=[0, 1, 2, 3], help="Subset of setups")

    return parser


def run(argv=None) -> int:
    """Parse arguments, run one subcommand and return its exit code"""
    args = build_parser().parse_args(argv)
    settings = get_settings()
    set_log_level(args.log_level or settings.log_level)
    settings.create_directories()

    try:
        config = load_experiment_config(
            args.config,
            n=args.n,
            n_range=args.n_range,
            setups=getattr(args, "setups", None),
            samples=args.samples,
            seed=args.seed,
            out=args.out,
        )
        if args.command == "reproduce-si":
            result = cmd_reproduce_si(config, settings, run_mc=not args.no_mc)
        else:
            result = COMMANDS[args.command](config, settings)
    except LiePlateauError as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"ERROR: {e}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.exception(f"Unexpected error in {args.command}: {e}")
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_CONFIG

    if not args.quiet and result.rows:
        print_summary(result.rows, result.columns, title=f"{args.command} (exit {result.exit_code})")
    for path in result.paths:
        print(f">> {path}")
    return result.exit_code


def main():
    """Main entry point"""
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        print("\n>> LiePlateau stopped")
        sys.exit(130)


if __name__ == "__main__":
    main()
