"""gridspectra: command-line entry point."""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Callable, Optional, Sequence

from . import __version__
from .commands import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, CommandFailure
from .commands.analyze import analyze_command, limit_cdf_command, shift_profile_command
from .commands.eigenvector import eigenvector_command
from .commands.spectrum import spectrum_command
from .commands.verify import verify_command
from .config import log_level
from .services.errors import ConfigError
from .services.output_service import FORMATS, write_output

logger = logging.getLogger("gridspectra")

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
_KINDS = ("combinatorial", "unoriented", "normalized", "randomwalk")


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def _count(minimum: int) -> Callable[[str], int]:
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {value}")
        return value
    return parse


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, so ``run`` owns the exit code."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise CommandFailure(EXIT_USAGE, f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="csv")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--threads", type=_count(0), default=None,
                        help="worker count for shift solves, 0 = one per CPU (default: GRIDSPECTRA_THREADS)")
    common.add_argument("--log-level", type=str.upper, choices=_LOG_LEVELS, default=None)

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--dims", required=True, help="layer counts, e.g. 3,4")
    grid.add_argument("--weights", default=None, help="direction weights, e.g. 1,2 (default: all 1)")
    grid.add_argument("--laplacian", default="combinatorial", help=" | ".join(_KINDS))

    parser = _Parser(prog="gridspectra", description="Analytic eigensystems of grid-graph Laplacians.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", parents=[common, grid], help="all eigenvalues")
    p.set_defaults(handler=spectrum_command)

    p = sub.add_parser("eigenvector", parents=[common, grid], help="one eigenpair")
    p.add_argument("--z", required=True, help="eigen index, e.g. '1;1'")
    p.add_argument("--normalize", action="store_true", help="scale the vector to unit length")
    p.set_defaults(handler=eigenvector_command)

    p = sub.add_parser("verify", parents=[common, grid], help="compare against the dense oracle")
    p.add_argument("--tol", type=_positive_float, default=1e-8)
    p.set_defaults(handler=verify_command)

    p = sub.add_parser("analyze", parents=[common, grid], help="histogram, CDF and KS statistic")
    p.add_argument("--bins", type=_count(1), default=50)
    p.add_argument("--paired", action="store_true",
                   help="include combinatorial/normalized eigenvalue pairs")
    p.set_defaults(handler=analyze_command)

    p = sub.add_parser("limit-cdf", parents=[common], help="eigenvalue CDF of an infinitely large grid")
    p.add_argument("--d", type=_count(1), required=True)
    p.add_argument("--resolution", type=_count(2), default=512)
    p.add_argument("--samples", type=_count(2), default=201)
    p.add_argument("--laplacian", default="combinatorial", help=" | ".join(_KINDS))
    p.set_defaults(handler=limit_cdf_command)

    p = sub.add_parser("shift-profile", parents=[common], help="shifts of one index pattern as grids grow")
    p.add_argument("--d", type=_count(1), required=True)
    p.add_argument("--layers", required=True, help="layer counts to sweep, e.g. 4,8,16")
    p.add_argument("--pattern", choices=("fiedler", "middle"), default="fiedler")
    p.set_defaults(handler=shift_profile_command)
    return parser


def _configure_logging(level: Optional[str]) -> None:
    name = level or log_level()
    if name not in _LOG_LEVELS:
        raise ConfigError(f"GRIDSPECTRA_LOG_LEVEL must be one of {', '.join(_LOG_LEVELS)}, got {name!r}")
    logging.basicConfig(
        level=name,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, run one subcommand and return its exit code."""
    args: Optional[argparse.Namespace] = None
    try:
        args = build_parser().parse_args(argv)
        _configure_logging(args.log_level)
        logger.debug("running %s", args.command)
        text = args.handler(args)
        write_output(text, args.out)
    except CommandFailure as e:
        if e.output is not None:
            write_output(e.output, args.out if args is not None else None)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0)
    except OSError as e:
        print(f"error: cannot write output: {e}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
