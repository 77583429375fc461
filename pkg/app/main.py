"""
Command-line entry point.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import structlog

from app.cli import register_all
from app.cli.context import RunContext
from app.core.config import settings
from app.core.error_handlers import handle_exception
from app.core.exceptions import InvalidParameterError


def configure_logging(level: Optional[str] = None) -> None:
    """Route structlog through stdlib logging on stderr; stdout carries command output only."""
    level = (level or settings.LOG_LEVEL).upper()
    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=level, force=True)
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            structlog.processors.JSONRenderer() if settings.LOG_FORMAT == "json" else structlog.dev.ConsoleRenderer()
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )


logger = structlog.get_logger()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zak-zcz",
        description="Zak-transform ZCZ sequence families, their certification and OTFS preamble simulation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.VERSION}")
    parser.add_argument("--seed", type=int, default=None,
                        help=f"master seed for every random draw (default {settings.DEFAULT_SEED})")
    parser.add_argument("--out", default=None, help=f"output directory (default {settings.OUTPUT_DIR})")
    parser.add_argument("--tolerance", type=float, default=None,
                        help=f"relative zero tolerance, multiplied by N (default {settings.ZERO_TOLERANCE:g})")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    subparsers = parser.add_subparsers(dest="command", required=True)
    register_all(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    configure_logging(args.log_level)

    ctx = RunContext(
        command=args.command,
        out_dir=Path(args.out or settings.OUTPUT_DIR),
        seed=settings.DEFAULT_SEED if args.seed is None else args.seed,
        seed_given=args.seed is not None,
        argv=argv,
    )
    saved_tolerance = settings.ZERO_TOLERANCE
    try:
        if args.tolerance is not None:
            if args.tolerance <= 0:
                raise InvalidParameterError("--tolerance must be positive", precondition="tolerance > 0")
            settings.ZERO_TOLERANCE = args.tolerance
        logger.info("Command started", command=args.command, version=settings.VERSION, out=str(ctx.out_dir))
        return args.handler(args, ctx)
    except Exception as exc:
        return handle_exception(exc, args.command)
    finally:
        settings.ZERO_TOLERANCE = saved_tolerance


if __name__ == "__main__":
    sys.exit(main())
