"""
Per-invocation state shared by the subcommands.
"""
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

from app.core.config import settings
from app.schemas.manifest import utc_now, write_manifest
from app.utils.file_utils import ensure_directory


@dataclass
class RunContext:
    command: str
    out_dir: Path
    seed: int
    seed_given: bool = False
    argv: List[str] = field(default_factory=list)
    started_at: datetime = field(default_factory=utc_now)
    stdout: TextIO = field(default_factory=lambda: sys.stdout)
    outputs: List[Path] = field(default_factory=list)

    def output_path(self, name: str) -> Path:
        ensure_directory(self.out_dir)
        return self.out_dir / name

    def record(self, path: Path) -> Path:
        self.outputs.append(Path(path))
        return path

    @property
    def schema_version(self) -> int:
        return settings.SCHEMA_VERSION

    def write_json(self, path: Path, payload: Any) -> Path:
        """Write ``payload`` as JSON and record it as an output."""
        path.write_text(json.dumps(payload, indent=2, default=str) + "\n")
        return self.record(path)

    def emit(self, payload: Any) -> None:
        """Print a JSON document on stdout."""
        self.stdout.write(json.dumps(payload, indent=2, default=str) + "\n")

    def finish(self, config: Optional[Dict[str, Any]] = None, master_seed: Optional[int] = None) -> Path:
        return write_manifest(
            self.out_dir,
            self.command,
            self.outputs,
            self.started_at,
            argv=self.argv,
            config=config,
            master_seed=master_seed,
        )
