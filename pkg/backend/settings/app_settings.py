from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load environment variables from .env if present
load_dotenv(override=True)

DEFAULT_DIM = 16


class AppSettings(BaseSettings):
    app_name: str = Field("dissipative-stationary")
    dim: int = Field(DEFAULT_DIM, ge=4)
    hbar: float = Field(1.0, gt=0.0)
    mass: float = Field(1.0, gt=0.0)
    omega: float = Field(1.0, gt=0.0)
    stationary_tol: float = Field(1e-10, gt=0.0)
    svd_tol: float = Field(1e-9, gt=0.0)
    match_tol: float = Field(1e-9, gt=0.0)
    evolve_dt: float = Field(1e-3, gt=0.0)
    workers: int = Field(1, ge=1)
    log_level: str = Field("WARNING")
    log_file: Optional[Path] = Field(None)

    model_config = SettingsConfigDict(
        env_prefix="DISSIPATIVE_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    @field_validator("log_file", mode="before")
    def validate_log_file(cls, v):
        if v is None or v == "":
            return None
        # Expand tilde to home directory
        path = Path(v).expanduser().resolve()
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    @field_validator("log_level", mode="before")
    def validate_log_level(cls, v):
        level = str(v).upper()
        if level not in {"TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR"}:
            raise ValueError(f"Unknown log level {v}")
        return level


# Singleton instance for global access
settings = AppSettings()
