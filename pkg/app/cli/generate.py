"""
generate: build a sequence family and write it in exponent form.
"""
import argparse
from math import sqrt

from app.cli.arguments import int_list, int_rows
from app.cli.context import RunContext
from app.core.exceptions import EXIT_OK
from app.models.family import Theorem
from app.schemas.sequence_file import BodyEncoding, save_family
from app.services.zcz_generator import generate_family


def register(subparsers) -> None:
    parser = subparsers.add_parser("generate", help="generate a ZCZ sequence family")
    parser.add_argument("theorem", choices=[t.value for t in Theorem], help="construction (T1, C1, T2, C2, T3, C3)")
    parser.add_argument("--r", dest="R", type=int, default=1, help="block count R")
    parser.add_argument("--t", dest="T", type=int, required=True, help="set size T (> 3)")
    parser.add_argument("--q", type=int, default=None, help="Construction-I extension index")
    parser.add_argument("--rows", type=int_list, default=None, help="index-array rows to use, e.g. 0,1")
    parser.add_argument("--index-rows", type=int_rows, default=None,
                        help="explicit index matrix, rows separated by ';'")
    parser.add_argument("--budget", type=int, default=None, help="node budget for the Florentine search")
    parser.add_argument("--encoding", choices=[e.value for e in BodyEncoding],
                        default=BodyEncoding.EXPONENT.value)
    parser.add_argument("--file", default="family.json", help="output file name inside --out")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, ctx: RunContext) -> int:
    family = generate_family(
        Theorem(args.theorem),
        args.R,
        args.T,
        q=args.q,
        row_selection=args.rows,
        index_rows=args.index_rows,
        budget=args.budget,
    )
    path = ctx.record(save_family(family, ctx.output_path(args.file), BodyEncoding(args.encoding)))
    p = family.params
    summary = {
        "file": str(path),
        "theorem": p.theorem.value,
        "N": p.N,
        "R": p.R,
        "T": p.T,
        "M": p.M,
        "q": p.q,
        "rows": p.rows,
        "zcz_width": p.R * p.T,
        "expected_theta_c": sqrt(p.R) * p.T if p.M > 1 else None,
    }
    ctx.emit(summary)
    ctx.finish(config={k: v for k, v in summary.items() if k != "file"})
    return EXIT_OK
