"""
Configuration settings for the ENSEI toolkit.
Loads environment variables and provides application-wide settings.
"""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
        populate_by_name=True,
    )

    # Logging
    log_level: str = Field(default="INFO", alias="ENSEI_LOG_LEVEL")
    log_dir: str = Field(default="logs", alias="ENSEI_LOG_DIR")
    log_file: str = Field(default="ensei.log", alias="ENSEI_LOG_FILE")

    # Protocol defaults
    default_preset: str = Field(default="toy", alias="ENSEI_DEFAULT_PRESET")
    default_seed: int = Field(default=0, alias="ENSEI_DEFAULT_SEED")

    # Transport
    tcp_host: str = Field(default="127.0.0.1", alias="ENSEI_TCP_HOST")
    tcp_timeout_s: float = Field(default=30.0, gt=0, alias="ENSEI_TCP_TIMEOUT_S")
    max_frame_bytes: int = Field(default=1 << 30, gt=0, le=1 << 30, alias="ENSEI_MAX_FRAME_BYTES")

    # Benchmarks
    bench_iterations: int = Field(default=10, ge=1, alias="ENSEI_BENCH_ITERATIONS")


def get_settings() -> Settings:
    """Get settings instance."""
    return Settings()
