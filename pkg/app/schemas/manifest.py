"""
Run manifest written next to every command's outputs.
"""
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import structlog
from pydantic import BaseModel, Field

from app.core.config import settings
from app.utils.file_utils import get_file_hash

logger = structlog.get_logger()

MANIFEST_FILENAME = "manifest.json"


class OutputDigest(BaseModel):
    path: str
    sha256: str
    schema_version: int = Field(default_factory=lambda: settings.SCHEMA_VERSION)


class RunManifest(BaseModel):
    """Provenance of one command run."""
    schema_version: int = Field(default_factory=lambda: settings.SCHEMA_VERSION)
    command: str
    argv: List[str] = Field(default_factory=list)
    config: Dict[str, Any] = Field(default_factory=dict, description="echo of the effective configuration")
    master_seed: Optional[int] = None
    toolkit_version: str = Field(default_factory=lambda: settings.VERSION)
    started_at: datetime
    finished_at: Optional[datetime] = None
    outputs: List[OutputDigest] = Field(default_factory=list)

    class Config:
        json_schema_extra = {
            "example": {
                "schema_version": 1,
                "command": "otfs-sim",
                "argv": ["otfs-sim", "campaign.json", "--mode", "sync"],
                "master_seed": 20240601,
                "toolkit_version": "0.3.0",
                "outputs": [{"path": "sync.csv", "sha256": "9f86d0...", "schema_version": 1}],
            }
        }


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


def write_manifest(
    out_dir: Union[str, Path],
    command: str,
    outputs: List[Path],
    started_at: datetime,
    argv: Optional[List[str]] = None,
    config: Optional[Dict[str, Any]] = None,
    master_seed: Optional[int] = None,
) -> Path:
    """Digest ``outputs`` and write ``manifest.json`` into ``out_dir``; paths are stored relative to it."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    digests = []
    for path in outputs:
        path = Path(path)
        try:
            name = str(path.resolve().relative_to(out_dir.resolve()))
        except ValueError:
            name = str(path)
        digests.append(OutputDigest(path=name, sha256=get_file_hash(path)))
    manifest = RunManifest(
        command=command,
        argv=list(argv or []),
        config=config or {},
        master_seed=master_seed,
        started_at=started_at,
        finished_at=utc_now(),
        outputs=digests,
    )
    target = out_dir / MANIFEST_FILENAME
    target.write_text(manifest.model_dump_json(indent=2) + "\n")
    logger.info("Manifest written", path=str(target), outputs=len(digests))
    return target
