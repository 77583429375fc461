"""
argparse value types shared by the subcommands.
"""
import argparse
from typing import List, Tuple


def int_list(value: str) -> List[int]:
    """'0,1,3' -> [0, 1, 3]."""
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}")


def int_rows(value: str) -> List[List[int]]:
    """'0,1,2;0,2,1' -> [[0, 1, 2], [0, 2, 1]]."""
    rows = [int_list(part) for part in value.split(";") if part.strip()]
    if not rows:
        raise argparse.ArgumentTypeError("no rows given")
    return rows


def index_pair(value: str) -> Tuple[int, int]:
    """'u,m' -> (u, m): sequence u of set m."""
    parts = int_list(value)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'u,m', got {value!r}")
    return parts[0], parts[1]


def shift_range(value: str) -> List[int]:
    """'a:b' -> [a, ..., b - 1]; a single integer selects one shift."""
    try:
        if ":" in value:
            lo, hi = (int(v) for v in value.split(":", 1))
            return list(range(lo, hi))
        return [int(value)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a:b' or an integer, got {value!r}")
