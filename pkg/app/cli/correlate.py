"""
correlate: export periodic correlation profiles as CSV.
"""
import argparse
from itertools import product

from app.cli.arguments import index_pair
from app.cli.context import RunContext
from app.core.exceptions import EXIT_OK
from app.schemas.sequence_file import load_family
from app.services.sequence_analysis import pccf
from app.utils.file_utils import write_csv

PROFILE_HEADER = ["u", "set_a", "v", "set_b", "tau [samples]", "magnitude", "real", "imag"]


def register(subparsers) -> None:
    parser = subparsers.add_parser("correlate", help="periodic correlation profiles as CSV")
    parser.add_argument("seq_file", help="sequence family JSON")
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--pair", type=index_pair, nargs=2, metavar="U,M",
                       help="two sequences, each given as 'u,m' (sequence u of set m)")
    group.add_argument("--all", action="store_true", help="every ordered pair of the family")
    parser.add_argument("--file", default="correlation.csv", help="CSV file name inside --out")
    parser.set_defaults(handler=run)


def _profile_rows(family, a, b):
    (u, m), (v, m2) = a, b
    values = pccf(family.sequence(m, u), family.sequence(m2, v)).values
    for tau, value in enumerate(values):
        yield [u, m, v, m2, tau, float(abs(value)), float(value.real), float(value.imag)]


def run(args: argparse.Namespace, ctx: RunContext) -> int:
    family = load_family(args.seq_file)
    if args.all:
        indices = [(u, m) for m in range(family.set_count) for u in range(family.params.T)]
        pairs = list(product(indices, indices))
    else:
        pairs = [tuple(args.pair)]
    rows = [row for a, b in pairs for row in _profile_rows(family, a, b)]
    path = ctx.record(write_csv(ctx.output_path(args.file), PROFILE_HEADER, rows))
    ctx.emit({"file": str(path), "pairs": len(pairs), "period": family.params.N})
    ctx.finish(config={"seq_file": args.seq_file, "pairs": [list(map(list, p)) for p in pairs]})
    return EXIT_OK
