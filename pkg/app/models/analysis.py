"""
Correlation profiles, certificates and ambiguity maps.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field


class ProfileKind(str, Enum):
    AUTO = "auto"
    CROSS = "cross"


@dataclass(frozen=True)
class CorrelationProfile:
    """Periodic correlation indexed by the shift tau in [0, N)."""

    values: np.ndarray
    kind: ProfileKind = ProfileKind.CROSS

    @property
    def period(self) -> int:
        return int(self.values.size)

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)

    def sidelobe_peak(self) -> float:
        """Largest magnitude over nonzero shifts for auto profiles, over all shifts otherwise."""
        mags = self.magnitudes
        if self.kind is ProfileKind.AUTO:
            return float(np.max(mags[1:])) if mags.size > 1 else 0.0
        return float(np.max(mags))


@dataclass(frozen=True)
class AmbiguityMap:
    """Periodic ambiguity values on a (delay, Doppler) grid."""

    values: np.ndarray  # (delays, dopplers)
    delays: np.ndarray
    dopplers: np.ndarray
    source: str = ""

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)

    def at(self, tau: int, v: int) -> complex:
        i = int(np.flatnonzero(self.delays == tau)[0])
        k = int(np.flatnonzero(self.dopplers == v)[0])
        return complex(self.values[i, k])

    def zero_doppler_cut(self) -> np.ndarray:
        k = np.flatnonzero(self.dopplers == 0)
        if k.size == 0:
            raise KeyError("grid has no zero-Doppler column")
        return self.values[:, int(k[0])]


class ZczCertificate(BaseModel):
    """Measured ZCZ parameters of one sequence set."""
    N: int = Field(..., description="period")
    set_size: int = Field(..., description="number of sequences T")
    zcz_width: int = Field(..., description="measured zero-correlation-zone length Z")
    tfm_optimal: bool = Field(..., description="set_size * zcz_width == N")
    theta_a: float = Field(..., description="max out-of-phase autocorrelation magnitude")
    theta_c: float = Field(..., description="max within-set cross-correlation magnitude")
    perfect: bool = Field(..., description="all autocorrelation sidelobes vanish")
    unimodular: bool


class InterSetReport(BaseModel):
    applicable: bool
    theta_c: Optional[float] = Field(None, description="max inter-set cross-correlation magnitude")
    min_magnitude: Optional[float] = None
    constant_over_shift: Optional[bool] = None
    per_pair: Dict[str, float] = Field(default_factory=dict, description="'m1-m2' -> max magnitude")


class FamilyCertificate(BaseModel):
    sets: List[ZczCertificate]
    inter_set: InterSetReport
    sarwate_lhs: Optional[float] = None
    distinct: List[List[List[bool]]] = Field(
        default_factory=list, description="per set, pairwise cyclic-distinctness matrix"
    )
    lemma_conditions: Optional[Dict[str, bool]] = None
    expected_zcz_width: Optional[int] = None
    expected_theta_c: Optional[float] = None
    all_hold: bool
    failures: List[str] = Field(default_factory=list)


class ParameterSummary(BaseModel):
    """One row of a family comparison table."""
    theorem: Optional[str] = None
    period: int
    alphabet_size: Optional[int] = Field(None, description="order of the phase alphabet, None if not roots of unity")
    set_size: int
    zcz_width: int
    set_count: int
    theta_c: Optional[float] = Field(None, description="inter-set theta, None when M = 1")
    cyclically_distinct: bool
    available_families: int = Field(..., description="distinct extended index arrays from Construction I")


class ZakSupport(BaseModel):
    positions: List[List[int]] = Field(..., description="(j, t) of nonzero entries")
    magnitudes: List[float]
    count: int
