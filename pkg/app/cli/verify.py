"""
verify: certify every correlation property of a sequence file.
"""
import argparse

import structlog

from app.cli.context import RunContext
from app.core.exceptions import EXIT_OK, EXIT_PROPERTY_VIOLATION
from app.schemas.sequence_file import load_family
from app.services.sequence_analysis import certify_family, parameter_summary

logger = structlog.get_logger()


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="certify a sequence family file")
    parser.add_argument("seq_file", help="sequence family JSON")
    parser.add_argument("--file", default="certificate.json", help="certificate file name inside --out")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, ctx: RunContext) -> int:
    family = load_family(args.seq_file)
    certificate = certify_family(family)
    summary = parameter_summary(family)
    report = {
        "schema_version": ctx.schema_version,
        "source": args.seq_file,
        "summary": summary.model_dump(),
        "certificate": certificate.model_dump(),
    }
    path = ctx.output_path(args.file)
    ctx.write_json(path, report)
    ctx.emit(report)
    ctx.finish(config={"seq_file": args.seq_file})
    if not certificate.all_hold:
        logger.warning("Property violation", source=args.seq_file, failures=certificate.failures)
        return EXIT_PROPERTY_VIOLATION
    return EXIT_OK
