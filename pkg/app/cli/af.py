"""
af: export the periodic ambiguity function of one sequence as CSV.
"""
import argparse

import numpy as np

from app.cli.arguments import index_pair, shift_range
from app.cli.context import RunContext
from app.core.exceptions import EXIT_OK
from app.schemas.sequence_file import load_family
from app.services.sequence_analysis import ambiguity, centred_shifts
from app.utils.file_utils import write_csv

AMBIGUITY_HEADER = ["tau [samples]", "doppler [bins of 1/N]", "magnitude", "real", "imag"]


def register(subparsers) -> None:
    parser = subparsers.add_parser("af", help="periodic ambiguity function as CSV")
    parser.add_argument("seq_file", help="sequence family JSON")
    parser.add_argument("--seq", type=index_pair, default=(0, 0), metavar="U,M", help="sequence u of set m")
    parser.add_argument("--delays", type=shift_range, default=None, help="delay shifts 'a:b' (default all)")
    parser.add_argument("--dopplers", type=shift_range, default=None, help="Doppler shifts 'a:b' (default all)")
    parser.add_argument("--centred", action="store_true", help="order both axes from -N/2 to N/2 - 1")
    parser.add_argument("--file", default="ambiguity.csv", help="CSV file name inside --out")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, ctx: RunContext) -> int:
    family = load_family(args.seq_file)
    u, m = args.seq
    seq = family.sequence(m, u)
    N = seq.period
    delays, dopplers = args.delays, args.dopplers
    if args.centred:
        delays = centred_shifts(N) if delays is None else delays
        dopplers = centred_shifts(N) if dopplers is None else dopplers
    af = ambiguity(seq, doppler_range=dopplers, delay_range=delays)
    rows = [
        [int(tau), int(v), float(abs(af.values[i, k])), float(af.values[i, k].real), float(af.values[i, k].imag)]
        for i, tau in enumerate(af.delays)
        for k, v in enumerate(af.dopplers)
    ]
    path = ctx.record(write_csv(ctx.output_path(args.file), AMBIGUITY_HEADER, rows))
    sidelobe = None
    if np.any(af.dopplers == 0):
        cut = np.abs(af.zero_doppler_cut())
        sidelobe = float(np.max(cut[af.delays != 0], initial=0.0))
    ctx.emit({"file": str(path), "sequence": [u, m], "period": N, "zero_doppler_sidelobe": sidelobe})
    ctx.finish(config={"seq_file": args.seq_file, "sequence": [u, m], "centred": args.centred})
    return EXIT_OK
