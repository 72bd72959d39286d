"""Command-line entry point."""

import argparse
import os
import sys
from pathlib import Path
from typing import List, Optional

from .api.commands import BATTERIES, CommandResult, Commands
from .api.schemas import ErrorReport
from .domain.errors import (
    CertificateError,
    ConfigurationError,
    InvariantViolation,
    SmallnessLabError,
)
from .infra.logger import StructLogger, setup_logging
from .infra.settings import load_settings
from .infra.storage import FileStore

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_CONFIGURATION = 2

logger = StructLogger("smallness-lab")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--workers", type=int, help="worker processes (overrides SMALLNESS_LAB_WORKERS)"
    )
    common.add_argument("--output", type=Path, help="report file (default: standard output)")
    common.add_argument("--format", choices=("json", "csv"), default="json", help="report format")

    parser = argparse.ArgumentParser(
        prog="smallness-lab",
        description=(
            "Thresholds, expectation thresholds and explicit covers with exact certificates."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    thresholds = sub.add_parser(
        "thresholds", parents=[common], help="p_c, q and q_f with certificates"
    )
    thresholds.add_argument("--family", type=Path, required=True)

    singleton = sub.add_parser(
        "cover-singleton", parents=[common], help="prefix-binomial cover for vertex weights"
    )
    source = singleton.add_mutually_exclusive_group(required=True)
    source.add_argument("--graph", type=Path)
    source.add_argument("--zeta", type=Path)
    singleton.add_argument("--p", required=True)
    singleton.add_argument("--J", required=True)
    singleton.add_argument("--verify", action="store_true", help="exhaustive coverage check")

    graph = sub.add_parser(
        "cover-graph", parents=[common], help="star-forest cover of a simple graph"
    )
    graph.add_argument("--graph", type=Path, required=True)
    graph.add_argument("--p", required=True)
    graph.add_argument("--J", required=True)
    graph.add_argument("--T", required=True)
    graph.add_argument("--mu", help="default |G|p²")
    graph.add_argument("--verify", action="store_true", help="exhaustive coverage check")

    weighted = sub.add_parser(
        "cover-weighted", parents=[common], help="full cover for an edge-weighted graph"
    )
    weighted.add_argument("--graph", type=Path, required=True)
    weighted.add_argument("--p", required=True)
    weighted.add_argument("--R", required=True)
    weighted.add_argument("--verify", help="exhaustive or sampled:N:seed")
    weighted.add_argument(
        "--reduced-guard",
        action="store_true",
        help="accept R >= 32; costs reported, not asserted",
    )

    chain = sub.add_parser(
        "verify-chain", parents=[common], help="randomized verification batteries"
    )
    chain.add_argument("--n", type=int, default=8, help="largest ground set for random families")
    chain.add_argument("--trials", type=int, default=200)
    chain.add_argument("--seed", type=int, default=0)
    chain.add_argument(
        "--battery",
        action="append",
        choices=BATTERIES + ("all",),
        help="battery to run, repeatable (default: chain)",
    )

    sub.add_parser("fixtures", parents=[common], help="emit the built-in instances")

    check = sub.add_parser("check", parents=[common], help="re-verify a certificate file")
    check.add_argument("--family", type=Path, required=True)
    check.add_argument("--certificate", type=Path, required=True)
    check.add_argument("--require-small", action="store_true")
    return parser


def dispatch(commands: Commands, args: argparse.Namespace) -> CommandResult:
    if args.command == "thresholds":
        return commands.thresholds(args.family)
    if args.command == "cover-singleton":
        return commands.cover_singleton(args.p, args.J, args.graph, args.zeta, args.verify)
    if args.command == "cover-graph":
        return commands.cover_graph(args.graph, args.p, args.J, args.T, args.mu, args.verify)
    if args.command == "cover-weighted":
        return commands.cover_weighted(args.graph, args.p, args.R, args.verify, args.reduced_guard)
    if args.command == "verify-chain":
        chosen = args.battery or ["chain"]
        batteries = BATTERIES if "all" in chosen else tuple(dict.fromkeys(chosen))
        return commands.verify_chain(args.n, args.trials, args.seed, batteries)
    if args.command == "fixtures":
        return commands.fixtures()
    return commands.check(args.family, args.certificate, args.require_small)


def exit_code(error: SmallnessLabError) -> int:
    if isinstance(error, (InvariantViolation, CertificateError)):
        return EXIT_VERIFICATION_FAILED
    return EXIT_CONFIGURATION


def report_failure(store: FileStore, args: argparse.Namespace, error: SmallnessLabError) -> int:
    logger.error("Command failed", command=args.command, reason=error.reason, error=str(error))
    store.write_json(ErrorReport.of(error), args.output)
    return exit_code(error)


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand; 0 on success, 1 on failed verification, 2 on bad input."""
    args = build_parser().parse_args(argv)
    setup_logging(os.getenv("LOG_LEVEL", "INFO"))
    store = FileStore()
    try:
        settings = load_settings()
        if args.workers is not None:
            settings = settings.model_copy(update={"workers": max(1, args.workers)})
        logger.info("Running command", command=args.command, workers=settings.workers)
        result = dispatch(Commands(logger, settings, store), args)
    except SmallnessLabError as e:
        return report_failure(store, args, e)
    except ValueError as e:
        # pydantic ValidationError is a ValueError
        error = ConfigurationError(f"invalid input: {e}", error=type(e).__name__)
        return report_failure(store, args, error)

    if args.format == "csv":
        store.write_csv(result.rows, args.output)
    else:
        store.write_json(result.report, args.output)
    if not result.ok:
        logger.warning("Verification failed", command=args.command)
        return EXIT_VERIFICATION_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
