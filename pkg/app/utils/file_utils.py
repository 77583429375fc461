"""
File utility functions.
"""
import csv
import hashlib
from pathlib import Path
from typing import Iterable, List, Sequence, Union

import structlog

from app.core.exceptions import SequenceFileError

logger = structlog.get_logger()

PathLike = Union[str, Path]


def get_file_hash(file_path: PathLike) -> str:
    """
    Calculate SHA256 hash of a file.

    Args:
        file_path: Path to file

    Returns:
        SHA256 hash as hex string
    """
    sha256_hash = hashlib.sha256()
    with open(file_path, "rb") as f:
        for byte_block in iter(lambda: f.read(4096), b""):
            sha256_hash.update(byte_block)
    return sha256_hash.hexdigest()


def ensure_directory(directory: PathLike) -> Path:
    """
    Ensure directory exists, create if not.

    Args:
        directory: Path to directory
    """
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """
    Write a CSV whose first row names the columns (with units where they apply).

    Floats are written with repr precision so repeated runs give identical bytes.
    """
    path = Path(path)
    ensure_directory(path.parent)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    logger.debug("CSV written", path=str(path))
    return path


def write_array_csv(path: PathLike, rows: Sequence[Sequence[int]]) -> Path:
    """One array row per line, symbols comma-separated, no header."""
    path = Path(path)
    ensure_directory(path.parent)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerows([[int(v) for v in row] for row in rows])
    return path


def read_array_csv(path: PathLike) -> List[List[int]]:
    """
    Read an integer array written one row per line.

    Raises:
        SequenceFileError: missing file, non-integer cell or ragged rows
    """
    path = Path(path)
    if not path.exists():
        raise SequenceFileError("array file not found", path=str(path))
    rows: List[List[int]] = []
    with open(path, newline="") as f:
        for line_no, row in enumerate(csv.reader(f), start=1):
            cells = [c.strip() for c in row if c.strip()]
            if not cells:
                continue
            try:
                rows.append([int(c) for c in cells])
            except ValueError:
                raise SequenceFileError(
                    f"non-integer entry on line {line_no}", path=str(path), details={"line": line_no}
                )
    if not rows:
        raise SequenceFileError("array file is empty", path=str(path))
    if len({len(r) for r in rows}) != 1:
        raise SequenceFileError("array rows have different lengths", path=str(path))
    return rows
