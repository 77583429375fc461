"""
Index matrices, phase matrices and generated sequence families.
"""
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from app.core.exceptions import DimensionMismatchError, InvalidParameterError
from app.models.sequence import ComplexSequence, UnitRootPhase, unit_roots


class Theorem(str, Enum):
    """Construction a family comes from."""
    T1 = "T1"
    C1 = "C1"
    T2 = "T2"
    C2 = "C2"
    T3 = "T3"
    C3 = "C3"

    @property
    def is_corollary(self) -> bool:
        return self.value.startswith("C")


class IndexSource(str, Enum):
    BASE = "base"
    EXTENDED = "extended"
    SEARCH = "search"
    USER = "user"


@dataclass(frozen=True)
class IndexMatrix:
    """M x T support selector; row m places set m's nonzero Zak entries."""

    rows: np.ndarray
    source: IndexSource = IndexSource.USER
    q: Optional[int] = None

    def __post_init__(self):
        rows = np.array(self.rows, dtype=np.int64, copy=True)
        if rows.ndim == 1:
            rows = rows[None, :]
        if rows.ndim != 2 or 0 in rows.shape:
            raise DimensionMismatchError("index matrix must be M x T", actual=list(rows.shape))
        T = rows.shape[1]
        for m, row in enumerate(rows):
            if sorted(row.tolist()) != list(range(T)):
                raise InvalidParameterError(
                    f"index row {m} is not a permutation of Z_{T}", precondition="index rows are permutations"
                )
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def row_count(self) -> int:
        return int(self.rows.shape[0])

    @property
    def symbol_count(self) -> int:
        return int(self.rows.shape[1])

    def row(self, m: int) -> np.ndarray:
        return self.rows[m]


@dataclass(frozen=True)
class PhaseMatrix:
    """
    T x L matrix of unit roots exp(2*pi*i*exponents/denominator).

    Row u holds P_u(t + rT) for 0 <= t < T, 0 <= r < R.
    """

    exponents: np.ndarray
    denominator: int
    set_index: int = 0

    def __post_init__(self):
        if self.denominator <= 0:
            raise InvalidParameterError("denominator must be positive", precondition="denominator > 0")
        exps = np.mod(np.array(self.exponents, dtype=np.int64), self.denominator)
        if exps.ndim != 2 or 0 in exps.shape:
            raise DimensionMismatchError("phase matrix must be 2-D", actual=list(exps.shape))
        exps.setflags(write=False)
        object.__setattr__(self, "exponents", exps)

    @property
    def shape(self) -> Tuple[int, int]:
        return int(self.exponents.shape[0]), int(self.exponents.shape[1])

    @property
    def values(self) -> np.ndarray:
        return unit_roots(self.exponents, self.denominator)

    def entry(self, u: int, column: int) -> UnitRootPhase:
        return UnitRootPhase(int(self.exponents[u, column]), self.denominator)

    def check_block_shape(self, R: int, T: int) -> None:
        if self.shape != (T, R * T):
            raise DimensionMismatchError(
                "phase matrix must be T x RT", expected=[T, R * T], actual=list(self.shape)
            )

    def rescaled(self, denominator: int) -> "PhaseMatrix":
        if denominator % self.denominator:
            raise InvalidParameterError(
                f"{denominator} is not a multiple of {self.denominator}", precondition="common denominator"
            )
        factor = denominator // self.denominator
        return PhaseMatrix(self.exponents * factor, denominator, self.set_index)

    def with_entry(self, u: int, column: int, exponent: int) -> "PhaseMatrix":
        exps = self.exponents.copy()
        exps[u, column] = exponent
        return PhaseMatrix(exps, self.denominator, self.set_index)


class FamilyParams(BaseModel):
    """Construction provenance of a family."""
    theorem: Optional[Theorem] = Field(None, description="construction, None for hand-built families")
    R: int = Field(..., ge=1)
    T: int = Field(..., ge=2)
    L: int = Field(..., description="R*T")
    N: int = Field(..., description="R*T^2")
    M: int = Field(..., ge=1, description="number of sets")
    q: Optional[int] = Field(None, description="Construction-I extension index")
    rows: List[int] = Field(default_factory=list, description="selected index-array rows")
    index_source: IndexSource = IndexSource.USER


@dataclass(frozen=True)
class SequenceFamily:
    """M sets of T sequences, each of period N = R*T^2."""

    sets: Tuple[Tuple[ComplexSequence, ...], ...]
    params: FamilyParams
    index_matrix: Optional[IndexMatrix] = None
    phase_matrices: Tuple[PhaseMatrix, ...] = ()

    def __post_init__(self):
        p = self.params
        if p.N != p.R * p.T * p.T:
            raise DimensionMismatchError("N must equal R*T^2", expected=p.R * p.T * p.T, actual=p.N)
        if len(self.sets) != p.M:
            raise DimensionMismatchError("set count differs from M", expected=p.M, actual=len(self.sets))
        for s in self.sets:
            if len(s) != p.T:
                raise DimensionMismatchError("every set holds T sequences", expected=p.T, actual=len(s))
            for seq in s:
                if seq.period != p.N:
                    raise DimensionMismatchError("sequence period differs from N", expected=p.N, actual=seq.period)

    @property
    def set_count(self) -> int:
        return len(self.sets)

    def sequence(self, m: int, u: int) -> ComplexSequence:
        if not 0 <= m < self.set_count or not 0 <= u < self.params.T:
            raise InvalidParameterError(
                f"sequence ({u}, {m}) out of range", precondition="sequence index in range"
            )
        return self.sets[m][u]

    def all_sequences(self) -> List[ComplexSequence]:
        return [seq for s in self.sets for seq in s]

    @classmethod
    def from_sets(
        cls, sets: Sequence[Sequence[ComplexSequence]], R: int, T: int, **params
    ) -> "SequenceFamily":
        frozen = tuple(tuple(s) for s in sets)
        info = FamilyParams(R=R, T=T, L=R * T, N=R * T * T, M=len(frozen), **params)
        return cls(sets=frozen, params=info)
