from typing import Optional, Union
from pydantic_settings import BaseSettings
from pydantic import field_validator


class Settings(BaseSettings):
    # Project
    PROJECT_NAME: str = "Zak ZCZ Toolkit"
    VERSION: str = "0.3.0"
    SCHEMA_VERSION: int = 1

    # Numerical tolerances
    ZERO_TOLERANCE: float = 1e-9  # relative, multiplied by the period N
    MAGNITUDE_TOLERANCE: float = 1e-9
    EXPONENT_TOLERANCE: float = 1e-9  # max distance to the nearest unit root

    # Randomness
    DEFAULT_SEED: int = 20240601

    # Storage
    OUTPUT_DIR: str = "outputs"

    # Florentine search
    SEARCH_NODE_BUDGET: int = 2_000_000

    # Simulation
    SIM_TRIALS: int = 500
    SIM_WORKERS: int = 1
    SIM_SNR_LIST: Union[list[float], str] = [0.0, 5.0, 10.0, 15.0, 20.0]
    SYNC_FIRST_ARRIVAL_FRACTION: float = 0.15  # of the correlation peak
    SYNC_NOISE_THRESHOLD: float = 3.0  # in correlator noise standard deviations

    # Metrics
    METRICS_ENABLED: bool = True
    METRICS_FILENAME: str = "metrics.prom"

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "plain"  # json or plain

    @field_validator("SIM_SNR_LIST", mode="before")
    @classmethod
    def assemble_snr_list(cls, v: Union[str, list[float]]) -> list[float]:
        if isinstance(v, str) and not v.startswith("["):
            return [float(i.strip()) for i in v.split(",") if i.strip()]
        elif isinstance(v, (list, str)):
            return v
        raise ValueError(v)

    @field_validator("ZERO_TOLERANCE", "MAGNITUDE_TOLERANCE", "EXPONENT_TOLERANCE", "SYNC_NOISE_THRESHOLD")
    @classmethod
    def check_positive_tolerance(cls, v: float) -> float:
        if v <= 0:
            raise ValueError("must be positive")
        return v

    @field_validator("SYNC_FIRST_ARRIVAL_FRACTION")
    @classmethod
    def check_fraction(cls, v: float) -> float:
        if not 0 < v <= 1:
            raise ValueError("must lie in (0, 1]")
        return v

    @field_validator("SIM_TRIALS", "SIM_WORKERS", "SEARCH_NODE_BUDGET")
    @classmethod
    def check_positive_count(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    class Config:
        env_file = ".env"
        env_prefix = "ZCZ_"
        case_sensitive = True


settings = Settings()


def get_settings(output_dir: Optional[str] = None) -> Settings:
    if output_dir is not None:
        return settings.model_copy(update={"OUTPUT_DIR": output_dir})
    return settings
