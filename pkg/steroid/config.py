from functools import lru_cache
from typing import Literal

from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict


# Load environment variables
load_dotenv()

# Significant digits written to tensor and decomposition files
FLOAT_DIGITS = 17


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="STEROID_", extra="ignore")

    tau: float = 1e-10
    max_tail_iters: int = 10
    dedup_tol: float = 1e-10
    sym_tol: float = 1e-12
    prune_tol: float = 1e-12
    stagnation_tol: float = 1e-3
    max_sweeps: int = 100
    head: Literal["ls", "eigenproduct"] = "ls"
    log_level: str = "WARNING"


@lru_cache
def get_settings() -> Settings:
    return Settings()
