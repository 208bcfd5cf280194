"""Environment-driven configuration."""

from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class GKZSettings(BaseSettings):
    """Defaults for truncation, enumeration bounds and numeric precision.

    Every field can be overridden with a ``GKZ_``-prefixed environment variable, e.g.
    ``GKZ_PRECISION_BITS=256``.
    """

    model_config = SettingsConfigDict(env_prefix="GKZ_", extra="ignore")

    precision_bits: int = Field(default=128, ge=16)
    max_precision_bits: int = Field(default=1024, ge=16)
    t_order: int = Field(default=12, ge=0)
    x_degree: int = Field(default=12, ge=0)
    operator_degree: int = Field(default=6, ge=1)
    lattice_bound: int = Field(default=64, ge=1)
    perturbation_base: int = Field(default=7, ge=2)
    log_level: str = "INFO"


@lru_cache(maxsize=1)
def get_settings() -> GKZSettings:
    """Return the process-wide settings instance."""
    return GKZSettings()
