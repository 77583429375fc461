"""
Prometheus metrics for generation, verification and simulation runs.

Metrics live in a dedicated registry and are written to a text file at the end
of a run; nothing is served.
"""
from pathlib import Path
from typing import Union

from prometheus_client import CollectorRegistry, Counter, Histogram, write_to_textfile

registry = CollectorRegistry()

families_generated = Counter(
    'zcz_families_generated_total',
    'Total number of generated sequence families',
    ['theorem'],
    registry=registry,
)

verification_verdicts = Counter(
    'zcz_verification_verdicts_total',
    'Verification verdicts by outcome',
    ['outcome'],
    registry=registry,
)

simulated_trials = Counter(
    'zcz_simulated_trials_total',
    'Monte Carlo trials run by the OTFS simulator',
    ['mode', 'preamble'],
    registry=registry,
)

operation_duration = Histogram(
    'zcz_operation_duration_seconds',
    'Wall time of long-running operations',
    ['operation'],
    registry=registry,
)


def write_metrics(path: Union[str, Path]) -> Path:
    """Write the registry in Prometheus text format."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    write_to_textfile(str(path), registry)
    return path
