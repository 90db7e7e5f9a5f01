"""
Runtime configuration for holder_regularity.

Values are read once from the environment at import time; explicit
function arguments always take precedence over these defaults.
"""

import os

from pydantic import BaseModel, ConfigDict, Field


class Settings(BaseModel):
    """
    Environment-driven settings.

    Attributes:
        log_level: Logging level used by the CLI and API entry points
        enclosure_rtol: Relative width required of a spectral radius enclosure
        table_decimals: Decimal places used when rendering regularity tables
        table_workers: Worker processes for table generation (1 = sequential)
        jmax_full: Default depth for full-array subdivision iterations
        jmax_central: Default depth for the central-coefficient recursion
    """

    log_level: str = Field(default="WARNING")
    enclosure_rtol: float = Field(default=1e-10, gt=0.0, lt=1e-3)
    table_decimals: int = Field(default=5, ge=0, le=15)
    table_workers: int = Field(default=1, ge=1)
    jmax_full: int = Field(default=10, ge=0)
    jmax_central: int = Field(default=40, ge=2)

    model_config = ConfigDict(extra="forbid", frozen=True)


def load_settings() -> Settings:
    """Build Settings from HOLDER_* environment variables."""
    return Settings(
        log_level=os.getenv("HOLDER_LOG_LEVEL", "WARNING").upper(),
        enclosure_rtol=float(os.getenv("HOLDER_ENCLOSURE_RTOL", "1e-10")),
        table_decimals=int(os.getenv("HOLDER_TABLE_DECIMALS", "5")),
        table_workers=int(os.getenv("HOLDER_TABLE_WORKERS", "1")),
        jmax_full=int(os.getenv("HOLDER_JMAX_FULL", "10")),
        jmax_central=int(os.getenv("HOLDER_JMAX_CENTRAL", "40")),
    )


settings = load_settings()

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
