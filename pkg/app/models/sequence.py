"""
Value types shared by the transform, generator and analysis services.
"""
from dataclasses import dataclass, field
from math import gcd, lcm
from typing import Iterable, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import DimensionMismatchError, InvalidParameterError


def _frozen(array: np.ndarray, dtype) -> np.ndarray:
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


def unit_roots(exponents: np.ndarray, denominator: int) -> np.ndarray:
    """Evaluate exp(2*pi*i*k/D) for an integer exponent array."""
    k = np.mod(np.asarray(exponents, dtype=np.int64), denominator)
    return np.exp(2j * np.pi * k / denominator)


@dataclass(frozen=True)
class UnitRootPhase:
    """exp(2*pi*i*numerator/denominator), kept as an exact integer pair."""

    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator <= 0:
            raise InvalidParameterError(
                "denominator must be positive", precondition="denominator > 0"
            )
        object.__setattr__(self, "numerator", self.numerator % self.denominator)

    @classmethod
    def reduced(cls, numerator: int, denominator: int) -> "UnitRootPhase":
        numerator %= denominator
        g = gcd(numerator, denominator) or denominator
        return cls(numerator // g, denominator // g)

    def rescale(self, denominator: int) -> int:
        """Exponent of the same root over a multiple of the current denominator."""
        if denominator % self.denominator:
            raise InvalidParameterError(
                f"{denominator} is not a multiple of {self.denominator}",
                precondition="common denominator",
            )
        return self.numerator * (denominator // self.denominator)

    def __mul__(self, other: "UnitRootPhase") -> "UnitRootPhase":
        d = self.denominator * other.denominator // gcd(self.denominator, other.denominator)
        return UnitRootPhase.reduced(self.rescale(d) + other.rescale(d), d)

    def conjugate(self) -> "UnitRootPhase":
        return UnitRootPhase(-self.numerator, self.denominator)

    def __complex__(self) -> complex:
        return complex(np.exp(2j * np.pi * self.numerator / self.denominator))

    def __eq__(self, other) -> bool:
        if not isinstance(other, UnitRootPhase):
            return NotImplemented
        a, b = UnitRootPhase.reduced(self.numerator, self.denominator), UnitRootPhase.reduced(
            other.numerator, other.denominator
        )
        return (a.numerator, a.denominator) == (b.numerator, b.denominator)

    def __hash__(self) -> int:
        r = UnitRootPhase.reduced(self.numerator, self.denominator)
        return hash((r.numerator, r.denominator))

    @staticmethod
    def evaluate(phases: Iterable["UnitRootPhase"]) -> np.ndarray:
        """Complex values of ``phases``, rescaled to their least common denominator first."""
        phases = list(phases)
        if not phases:
            return np.zeros(0, dtype=np.complex128)
        D = lcm(*(p.denominator for p in phases))
        return unit_roots(np.array([p.rescale(D) for p in phases], dtype=np.int64), D)


@dataclass(frozen=True)
class ComplexSequence:
    """A period-N vector of complex samples."""

    samples: np.ndarray
    label: str = ""

    def __post_init__(self):
        samples = np.asarray(self.samples)
        if samples.ndim != 1 or samples.size == 0:
            raise DimensionMismatchError(
                "sequence samples must be a nonempty 1-D vector", actual=list(samples.shape)
            )
        object.__setattr__(self, "samples", _frozen(samples, np.complex128))

    @property
    def period(self) -> int:
        return int(self.samples.size)

    def __len__(self) -> int:
        return self.period

    @classmethod
    def from_phases(cls, phases: Iterable[UnitRootPhase], label: str = "") -> "ComplexSequence":
        return cls(UnitRootPhase.evaluate(phases), label=label)

    @classmethod
    def from_exponents(cls, exponents: Iterable[int], denominator: int, label: str = "") -> "ComplexSequence":
        return cls.from_phases((UnitRootPhase(int(k), denominator) for k in exponents), label=label)

    def is_unimodular(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(np.abs(self.samples) - 1.0) <= tol))

    def to_exponents(self, denominator: int, tol: float = None) -> np.ndarray:
        """Exact exponent form over ``denominator``; raises if a sample is not such a root."""
        tol = settings.EXPONENT_TOLERANCE if tol is None else tol
        k = np.mod(np.rint(np.angle(self.samples) * denominator / (2 * np.pi)), denominator).astype(np.int64)
        err = np.abs(self.samples - unit_roots(k, denominator))
        if np.any(err > tol):
            worst = int(np.argmax(err))
            raise InvalidParameterError(
                f"sample {worst} is not a {denominator}-th root of unity",
                precondition="exponent form",
                details={"error": float(err[worst])},
            )
        return k

    def to_phases(self, denominator: int, tol: float = None) -> Tuple[UnitRootPhase, ...]:
        """Samples as reduced exact phases; see ``to_exponents``."""
        return tuple(UnitRootPhase.reduced(int(k), denominator) for k in self.to_exponents(denominator, tol))

    def cyclic_shift(self, shift: int) -> "ComplexSequence":
        """Sequence n -> s((n + shift) mod N)."""
        return ComplexSequence(np.roll(self.samples, -shift), label=self.label)

    def scaled(self, c: complex) -> "ComplexSequence":
        return ComplexSequence(self.samples * c, label=self.label)

    def energy(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2))


@dataclass(frozen=True)
class ZakMatrix:
    """L x T Zak-domain array X(j, t) of a period-LT sequence."""

    entries: np.ndarray
    label: str = field(default="")

    def __post_init__(self):
        entries = np.asarray(self.entries)
        if entries.ndim != 2 or 0 in entries.shape:
            raise DimensionMismatchError(
                "Zak matrix must be a nonempty 2-D array", actual=list(entries.shape)
            )
        object.__setattr__(self, "entries", _frozen(entries, np.complex128))

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def period(self) -> int:
        return self.rows * self.cols

    def energy(self) -> float:
        return float(np.sum(np.abs(self.entries) ** 2))

    def support(self, tol: float = 1e-9) -> np.ndarray:
        """(j, t) positions of the nonzero entries, shape (K, 2)."""
        scale = max(float(np.max(np.abs(self.entries))), 1.0)
        return np.argwhere(np.abs(self.entries) > tol * scale)
