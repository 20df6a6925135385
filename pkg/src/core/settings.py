"""
Application settings configuration using pydantic-settings.
"""

import os
from enum import StrEnum
from functools import lru_cache
from pathlib import Path

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class AppEnvironment(StrEnum):
    development = "development"
    staging = "staging"
    production = "production"


class Settings(BaseSettings):
    """Numerical and service settings loaded from ``CCT_*`` environment variables."""

    model_config = SettingsConfigDict(env_prefix="CCT_")

    # Environment
    app_env: AppEnvironment = Field(
        AppEnvironment.development, description="Environment name"
    )
    log_level: str = Field("WARNING", description="Root log level")

    # Numerical tolerances
    tolerance: float = Field(
        1e-12, gt=0, description="Mass and equality tolerance in float mode"
    )
    series_tolerance: float = Field(
        1e-10, gt=0, description="Agreement tolerance between float evaluators"
    )
    dominance_tolerance: float = Field(
        1e-9, ge=0, description="Pointwise tolerance for stochastic comparisons"
    )
    default_delta: float = Field(
        1e-9, gt=0, lt=1, description="Tail target used to truncate survival curves"
    )

    # Workload guards
    workload_limit: int = Field(
        20_000_000, gt=0, description="Maximum subset terms for inclusion-exclusion"
    )
    composition_limit: int = Field(
        20_000_000, gt=0, description="Maximum compositions for the composition sum"
    )
    state_limit: int = Field(
        10_000_000, gt=0, description="Maximum transient states of the chain oracle"
    )
    enumeration_limit: int = Field(
        10_000_000, gt=0, description="Maximum draw sequences for enumeration"
    )

    # Randomness and parallelism
    default_seed: int = Field(20160601, ge=0, description="Seed used by `verify`")
    mc_block_size: int = Field(
        65536, gt=0, description="Replicates drawn from one generator stream"
    )
    workers: int = Field(1, ge=1, description="Worker count for parallel sections")
    curve_cache_size: int = Field(
        256, ge=1, description="Memoized survival curves per process"
    )

    # API Configuration
    api_host: str = Field("localhost", description="API host")
    api_port: int = Field(8000, description="API port")

    @property
    def is_production(self) -> bool:
        return self.app_env == AppEnvironment.production


class AppEnvSetting(BaseSettings):
    """Internal settings class intended to bootstrap the .env file loading with validation."""

    model_config = SettingsConfigDict(env_prefix="CCT_")

    app_env: AppEnvironment = AppEnvironment.development


@lru_cache
def get_settings() -> Settings:
    stage = AppEnvSetting().app_env

    root = Path(__file__).parent.parent.parent
    env_files = [
        str(root / file)
        for file in [
            f".env.{stage}.secrets.local",
            f".env.{stage}.local",
            f".env.{stage}",
            ".env.local",
            ".env",
        ]
    ]

    for env_file in filter(os.path.exists, env_files):
        load_dotenv(env_file)

    return Settings()


settings = get_settings()
