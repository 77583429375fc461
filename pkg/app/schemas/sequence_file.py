"""
Sequence family file format.

Families are stored as JSON. The canonical body is the exponent form: sample
n of sequence u in set m is exp(2*pi*i*exponents[m][u][n] / denominator).
Families whose samples are not roots of unity fall back to real/imag pairs.
"""
import json
from enum import Enum
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
import structlog
from pydantic import BaseModel, Field, ValidationError, model_validator

from app.core.config import settings
from app.core.exceptions import InvalidParameterError, SequenceFileError
from app.models.family import IndexSource, SequenceFamily, Theorem
from app.models.sequence import ComplexSequence
from app.services.zcz_generator import family_denominator, sequence_exponents, sequence_from_exponents

logger = structlog.get_logger()


class BodyEncoding(str, Enum):
    EXPONENT = "exponent"
    COMPLEX = "complex"


class SequenceHeader(BaseModel):
    N: int = Field(..., ge=1, description="period R*T^2")
    R: int = Field(..., ge=1)
    T: int = Field(..., ge=2, description="sequences per set")
    M: int = Field(..., ge=1, description="number of sets")
    theorem: Optional[Theorem] = None
    q: Optional[int] = Field(None, description="Construction-I extension index")
    rows: List[int] = Field(default_factory=list, description="selected index-array rows")
    index_source: IndexSource = IndexSource.USER
    denominator: Optional[int] = Field(None, ge=1, description="exponent denominator D, a multiple of 2RT")

    @model_validator(mode="after")
    def check_period(self) -> "SequenceHeader":
        if self.N != self.R * self.T * self.T:
            raise ValueError(f"N must equal R*T^2 = {self.R * self.T * self.T}")
        if self.denominator is not None and self.denominator % (2 * self.R * self.T):
            raise ValueError(f"denominator must be divisible by 2RT = {2 * self.R * self.T}")
        return self


class SequenceFileRecord(BaseModel):
    """A whole family; ``exponents`` or ``samples`` is filled according to ``encoding``."""
    schema_version: int = Field(default_factory=lambda: settings.SCHEMA_VERSION)
    header: SequenceHeader
    encoding: BodyEncoding = BodyEncoding.EXPONENT
    exponents: Optional[List[List[List[int]]]] = Field(None, description="[set][u][n] integers mod D")
    samples: Optional[List[List[List[List[float]]]]] = Field(None, description="[set][u][n] -> [real, imag]")

    class Config:
        json_schema_extra = {
            "example": {
                "schema_version": 1,
                "header": {"N": 16, "R": 1, "T": 4, "M": 1, "theorem": None, "denominator": 32},
                "encoding": "exponent",
                "exponents": [[[0] * 16] * 4],
            }
        }

    @model_validator(mode="after")
    def check_body(self) -> "SequenceFileRecord":
        h = self.header
        if self.encoding is BodyEncoding.EXPONENT:
            body = self.exponents
            if body is None or h.denominator is None:
                raise ValueError("exponent encoding needs 'exponents' and 'header.denominator'")
        else:
            body = self.samples
            if body is None:
                raise ValueError("complex encoding needs 'samples'")
        if len(body) != h.M:
            raise ValueError(f"body holds {len(body)} sets, header says M = {h.M}")
        for m, seqs in enumerate(body):
            if len(seqs) != h.T:
                raise ValueError(f"set {m} holds {len(seqs)} sequences, expected T = {h.T}")
            for u, seq in enumerate(seqs):
                if len(seq) != h.N:
                    raise ValueError(f"sequence ({u}, {m}) has length {len(seq)}, expected N = {h.N}")
                if self.encoding is BodyEncoding.COMPLEX and any(len(pair) != 2 for pair in seq):
                    raise ValueError(f"sequence ({u}, {m}) has samples that are not [real, imag] pairs")
        return self


def record_from_family(family: SequenceFamily, encoding: BodyEncoding = BodyEncoding.EXPONENT) -> SequenceFileRecord:
    """Serialise ``family``; exponent form falls back to complex when samples are not unit roots."""
    p = family.params
    header = SequenceHeader(
        N=p.N, R=p.R, T=p.T, M=p.M, theorem=p.theorem, q=p.q, rows=p.rows, index_source=p.index_source
    )
    if encoding is BodyEncoding.EXPONENT:
        D = family_denominator(p.R, p.T)
        try:
            exponents = [[sequence_exponents(s, D).tolist() for s in seqs] for seqs in family.sets]
        except InvalidParameterError:
            logger.warning("Samples are not roots of unity, writing complex samples", R=p.R, T=p.T)
        else:
            header.denominator = D
            return SequenceFileRecord(header=header, encoding=encoding, exponents=exponents)
    samples = [
        [np.column_stack([s.samples.real, s.samples.imag]).tolist() for s in seqs] for seqs in family.sets
    ]
    return SequenceFileRecord(header=header, encoding=BodyEncoding.COMPLEX, samples=samples)


def family_from_record(record: SequenceFileRecord) -> SequenceFamily:
    h = record.header
    sets = []
    for m in range(h.M):
        if record.encoding is BodyEncoding.EXPONENT:
            seqs = [
                sequence_from_exponents(record.exponents[m][u], h.denominator, label=f"s_{u}^{m}")
                for u in range(h.T)
            ]
        else:
            seqs = [
                ComplexSequence(np.array(record.samples[m][u]) @ np.array([1.0, 1j]), label=f"s_{u}^{m}")
                for u in range(h.T)
            ]
        sets.append(seqs)
    return SequenceFamily.from_sets(
        sets, h.R, h.T, theorem=h.theorem, q=h.q, rows=h.rows, index_source=h.index_source
    )


def save_family(
    family: SequenceFamily, path: Union[str, Path], encoding: BodyEncoding = BodyEncoding.EXPONENT
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    record = record_from_family(family, encoding)
    path.write_text(record.model_dump_json(indent=2) + "\n")
    logger.info("Sequence file written", path=str(path), encoding=record.encoding.value, M=family.set_count)
    return path


def load_record(path: Union[str, Path]) -> SequenceFileRecord:
    """
    Parse a sequence file.

    Raises:
        SequenceFileError: missing file, malformed JSON, invalid fields or an
            unsupported schema version
    """
    path = Path(path)
    if not path.exists():
        raise SequenceFileError("sequence file not found", path=str(path))
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise SequenceFileError(f"invalid JSON: {e.msg}", path=str(path), details={"line": e.lineno})
    version = data.get("schema_version") if isinstance(data, dict) else None
    if version != settings.SCHEMA_VERSION:
        raise SequenceFileError(
            f"unsupported schema version {version}",
            path=str(path),
            details={"supported": settings.SCHEMA_VERSION},
        )
    try:
        return SequenceFileRecord.model_validate(data)
    except ValidationError as e:
        errors = [
            {"field": ".".join(str(loc) for loc in err["loc"]), "message": err["msg"]} for err in e.errors()
        ]
        raise SequenceFileError("sequence file failed validation", path=str(path), details={"errors": errors})


def load_family(path: Union[str, Path]) -> SequenceFamily:
    return family_from_record(load_record(path))
