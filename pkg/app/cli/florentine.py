"""
florentine: generate, extend, search, verify and bound circular Florentine arrays.
"""
import argparse

import structlog

from app.cli.context import RunContext
from app.core.exceptions import EXIT_OK, EXIT_PROPERTY_VIOLATION
from app.models.florentine import CircularFlorentineArray, ExtensionPermutation
from app.services import florentine
from app.utils.file_utils import read_array_csv, write_array_csv

logger = structlog.get_logger()


def register(subparsers) -> None:
    parser = subparsers.add_parser("florentine", help="circular Florentine array tools")
    actions = parser.add_subparsers(dest="action", required=True)

    p = actions.add_parser("gen-prime", help="base array of prime order T")
    p.add_argument("T", type=int)
    p.add_argument("--file", default="florentine.csv")
    p.set_defaults(handler=run_gen_prime)

    p = actions.add_parser("extend", help="Construction-I extension of an array file")
    p.add_argument("array_csv")
    p.add_argument("--q", type=int, required=True, help="extension index, 1 <= q < (T-2)!")
    p.add_argument("--file", default="florentine_extended.csv")
    p.set_defaults(handler=run_extend)

    p = actions.add_parser("search", help="backtracking search for a small array")
    p.add_argument("T", type=int)
    p.add_argument("--rows", type=int, required=True, help="number of rows wanted")
    p.add_argument("--budget", type=int, default=None, help="node budget")
    p.add_argument("--file", default="florentine_search.csv")
    p.set_defaults(handler=run_search)

    p = actions.add_parser("verify", help="check an array file")
    p.add_argument("array_csv")
    p.set_defaults(handler=run_verify)

    p = actions.add_parser("bounds", help="capacity bounds and extension count for order T")
    p.add_argument("T", type=int)
    p.set_defaults(handler=run_bounds)


def run_gen_prime(args: argparse.Namespace, ctx: RunContext) -> int:
    array = florentine.base_array_prime(args.T)
    path = ctx.record(write_array_csv(ctx.output_path(args.file), array.to_lists()))
    ctx.emit({"file": str(path), "rows": array.row_count, "T": args.T})
    ctx.finish(config={"action": "gen-prime", "T": args.T})
    return EXIT_OK


def run_extend(args: argparse.Namespace, ctx: RunContext) -> int:
    base = CircularFlorentineArray(read_array_csv(args.array_csv))
    perm = ExtensionPermutation.from_index(base.symbol_count, args.q)
    array = florentine.extend_construction1(base, perm)
    path = ctx.record(write_array_csv(ctx.output_path(args.file), array.to_lists()))
    ctx.emit({"file": str(path), "q": args.q, "row0": array.to_lists()[0]})
    ctx.finish(config={"action": "extend", "source": args.array_csv, "q": args.q})
    return EXIT_OK


def run_search(args: argparse.Namespace, ctx: RunContext) -> int:
    outcome = florentine.search_small(args.T, args.rows, budget=args.budget)
    result = {
        "T": args.T,
        "rows": args.rows,
        "status": "found" if outcome.found else ("budget-exhausted" if outcome.budget_exhausted else "not-found"),
        "nodes_visited": outcome.nodes_visited,
        "tabulated_rows": outcome.tabulated_rows,
    }
    if outcome.found:
        result["file"] = str(ctx.record(write_array_csv(ctx.output_path(args.file), outcome.array.to_lists())))
    ctx.emit(result)
    ctx.finish(config={"action": "search", "T": args.T, "rows": args.rows, "budget": args.budget})
    return EXIT_OK if outcome.found else EXIT_PROPERTY_VIOLATION


def run_verify(args: argparse.Namespace, ctx: RunContext) -> int:
    verdict = florentine.verify(read_array_csv(args.array_csv))
    report = verdict.model_dump()
    ctx.write_json(ctx.output_path("florentine_verdict.json"), {"schema_version": ctx.schema_version, **report})
    ctx.emit(report)
    ctx.finish(config={"action": "verify", "source": args.array_csv})
    if not verdict.valid:
        logger.warning("Array is not circular Florentine", source=args.array_csv,
                       violations=len(verdict.violations))
        return EXIT_PROPERTY_VIOLATION
    return EXIT_OK


def run_bounds(args: argparse.Namespace, ctx: RunContext) -> int:
    lower, upper = florentine.capacity_bounds(args.T)
    ctx.emit({
        "T": args.T,
        "lower": lower,
        "upper": upper,
        "extension_count": florentine.extension_count(args.T),
        "note": florentine.capacity_note(args.T),
    })
    ctx.finish(config={"action": "bounds", "T": args.T})
    return EXIT_OK
