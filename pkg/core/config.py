import os
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from core.exceptions import OutOfDomain


load_dotenv()


class Settings(BaseSettings):
    """
    Budgets and tolerances for scans. Every field has a default, a `.env`
    file or CACTAZ_* variables only override them.
    """

    model_config = SettingsConfigDict(env_prefix='CACTAZ_', env_file='.env', extra='ignore')

    cacti_n_max: int = Field(10, ge=3)
    tree_n_max: int = Field(16, ge=3)
    conjecture_n_max: int = Field(18, ge=3)
    brute_force_n_max: int = Field(8, ge=1)
    abc_tie_tolerance: float = Field(1e-9, gt=0.0)
    abc_flag_band: float = Field(1e-6, gt=0.0)
    default_workers: Optional[int] = Field(None, ge=1)
    climb_max_steps: int = Field(200, ge=0)
    show_progress: bool = False
    log_level: str = 'WARNING'


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings()


def get_worker_count(requested: Optional[int] = None) -> int:
    if requested is not None:
        if requested < 1:
            raise OutOfDomain(f'worker count must be at least 1, got {requested}')
        return requested
    configured = get_settings().default_workers
    if configured is not None:
        return configured
    return os.cpu_count() or 1


def get_tie_tolerance() -> float:
    return get_settings().abc_tie_tolerance


def get_flag_band() -> float:
    return get_settings().abc_flag_band
