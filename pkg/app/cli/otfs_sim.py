"""
otfs-sim: run a synchronisation, BER or velocity-sweep campaign from a JSON config.
"""
import argparse
import json
from pathlib import Path

import structlog
from pydantic import ValidationError

from app.cli.context import RunContext
from app.core.config import settings
from app.core.error_handlers import format_validation_errors
from app.core.exceptions import EXIT_OK, ConfigurationError
from app.core.metrics import write_metrics
from app.models.otfs import CampaignConfig, SimMode
from app.services.otfs_experiments import run_campaign
from app.utils.file_utils import write_csv

logger = structlog.get_logger()

RESULTS_HEADER = [
    "preamble",
    "snr_db [dB]",
    "v_max [km/h]",
    "trials",
    "successes",
    "success_prob",
    "ci_low",
    "ci_high",
    "ber",
    "ber_perfect_sync",
]


def register(subparsers) -> None:
    parser = subparsers.add_parser("otfs-sim", help="OTFS preamble synchronisation and BER campaigns")
    parser.add_argument("config_json", help="campaign configuration JSON")
    parser.add_argument("--mode", choices=[m.value for m in SimMode], default=None,
                        help="override the campaign mode")
    parser.add_argument("--trials", type=int, default=None, help="override the trial count")
    parser.add_argument("--workers", type=int, default=None, help="override the worker process count")
    parser.set_defaults(handler=run)


def load_campaign(path: str, **overrides) -> CampaignConfig:
    """
    Read and validate a campaign file; ``overrides`` that are not None replace top-level fields.

    Raises:
        ConfigurationError: missing file, malformed JSON or invalid fields (each named)
    """
    source = Path(path)
    if not source.exists():
        raise ConfigurationError(f"campaign file not found: {path}")
    try:
        data = json.loads(source.read_text())
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"invalid JSON in {path}: {e.msg}", errors=[{"line": e.lineno}])
    if not isinstance(data, dict):
        raise ConfigurationError("campaign file must hold a JSON object")
    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return CampaignConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError("campaign configuration is invalid", errors=format_validation_errors(e))


def run(args: argparse.Namespace, ctx: RunContext) -> int:
    campaign = load_campaign(
        args.config_json,
        mode=args.mode,
        trials=args.trials,
        workers=args.workers,
        master_seed=ctx.seed if ctx.seed_given else None,
    )
    points = run_campaign(campaign)
    rows = [
        [p.preamble, p.snr_db, p.v_max, p.trials, p.successes, p.success_prob, p.ci_low, p.ci_high,
         p.ber, p.ber_perfect_sync]
        for p in points
    ]
    results = ctx.record(write_csv(ctx.output_path(f"{campaign.mode.value}.csv"), RESULTS_HEADER, rows))
    if settings.METRICS_ENABLED:
        # not digested: timing histograms differ between runs
        write_metrics(ctx.output_path(settings.METRICS_FILENAME))
    ctx.emit({
        "file": str(results),
        "mode": campaign.mode.value,
        "master_seed": campaign.master_seed,
        "points": [p.model_dump() for p in points],
    })
    ctx.finish(config=campaign.model_dump(mode="json"), master_seed=campaign.master_seed)
    logger.info("Campaign finished", mode=campaign.mode.value, points=len(points), results=str(results))
    return EXIT_OK
