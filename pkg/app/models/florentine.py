"""
Circular Florentine arrays and the Construction-I extension permutation.
"""
from dataclasses import dataclass
from math import factorial
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field
from sympy.combinatorics import Permutation

from app.core.exceptions import DimensionMismatchError, InvalidParameterError


@dataclass(frozen=True)
class CircularFlorentineArray:
    """M x T integer array over Z_T; validity is checked by ``florentine.verify``."""

    rows: np.ndarray

    def __post_init__(self):
        rows = np.array(self.rows, dtype=np.int64, copy=True)
        if rows.ndim != 2 or 0 in rows.shape:
            raise DimensionMismatchError("array must be a nonempty M x T matrix", actual=list(rows.shape))
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def row_count(self) -> int:
        return int(self.rows.shape[0])

    @property
    def symbol_count(self) -> int:
        return int(self.rows.shape[1])

    def row(self, m: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.rows[m])

    def select(self, indices: Sequence[int]) -> "CircularFlorentineArray":
        for i in indices:
            if not 0 <= i < self.row_count:
                raise InvalidParameterError(
                    f"row {i} outside [0, {self.row_count})", precondition="row selection in range"
                )
        return CircularFlorentineArray(self.rows[list(indices)])

    def to_lists(self) -> List[List[int]]:
        return [list(self.row(m)) for m in range(self.row_count)]


@dataclass(frozen=True)
class ExtensionPermutation:
    """
    Rearrangement of the last T-2 symbols of row 0.

    ``q_index`` is the lexicographic rank of the tail arrangement, so q = 0 is
    the identity and 0 <= q < (T-2)!.
    """

    q_index: int
    tail_permutation: tuple[int, ...]

    @property
    def symbol_count(self) -> int:
        return len(self.tail_permutation) + 2

    @staticmethod
    def count(T: int) -> int:
        return factorial(T - 2)

    @classmethod
    def from_index(cls, T: int, q: int) -> "ExtensionPermutation":
        if T < 3:
            raise InvalidParameterError("extension needs T >= 3", precondition="T >= 3")
        if not 0 <= q < factorial(T - 2):
            raise InvalidParameterError(
                f"q={q} outside [0, {factorial(T - 2)})", precondition="0 <= q < (T-2)!"
            )
        perm = Permutation.unrank_lex(T - 2, q)
        return cls(q_index=q, tail_permutation=tuple(perm.array_form))

    @classmethod
    def from_rows(cls, base_row0: Sequence[int], target_row0: Sequence[int]) -> "ExtensionPermutation":
        """Recover q from a printed extended row 0."""
        base, target = list(base_row0), list(target_row0)
        if len(base) != len(target):
            raise DimensionMismatchError("rows differ in length", expected=len(base), actual=len(target))
        if base[:2] != target[:2]:
            raise InvalidParameterError(
                "the first two symbols of row 0 must stay fixed", precondition="fixed prefix"
            )
        if sorted(base[2:]) != sorted(target[2:]):
            raise InvalidParameterError("target tail is not a rearrangement of the base tail",
                                        precondition="tail rearrangement")
        index_perm = [base[2:].index(v) for v in target[2:]]
        perm = Permutation(index_perm)
        return cls(q_index=int(perm.rank()), tail_permutation=tuple(index_perm))

    def apply(self, base_row0: Sequence[int]) -> tuple[int, ...]:
        base = list(base_row0)
        if len(base) != self.symbol_count:
            raise DimensionMismatchError(
                "extension permutation does not match the row length",
                expected=self.symbol_count,
                actual=len(base),
            )
        tail = base[2:]
        return tuple(base[:2] + [tail[i] for i in self.tail_permutation])


class FlorentineViolation(BaseModel):
    """One reason an array is not a circular Florentine array."""
    kind: str = Field(..., description="'not_permutation' or 'repeated_step'")
    rows: List[int] = Field(..., description="row index (or the two clashing rows)")
    symbols: Optional[List[int]] = Field(None, description="ordered symbol pair (s, t)")
    step: Optional[int] = Field(None, description="circular step a")


class FlorentineVerdict(BaseModel):
    valid: bool
    row_count: int
    symbol_count: int
    violations: List[FlorentineViolation] = Field(default_factory=list)


@dataclass(frozen=True)
class SearchOutcome:
    """Result of a backtracking search; ``array`` is None when nothing was found."""

    array: Optional[CircularFlorentineArray]
    nodes_visited: int
    budget_exhausted: bool
    tabulated_rows: int = 0

    @property
    def found(self) -> bool:
        return self.array is not None
