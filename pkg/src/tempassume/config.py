import logging
import os
from dataclasses import dataclass

logger = logging.getLogger(__name__)


@dataclass(kw_only=True, frozen=True)
class Settings:
    workers: int = 1
    seed: int = 0
    log_level: str = "WARNING"


def load_settings() -> Settings:
    """Read runner defaults from the environment."""
    workers = os.environ.get("TEMPASSUME_WORKERS", "1")
    seed = os.environ.get("TEMPASSUME_SEED", "0")
    log_level = os.environ.get("TEMPASSUME_LOG_LEVEL", "WARNING").upper()
    try:
        settings = Settings(workers=max(1, int(workers)), seed=int(seed), log_level=log_level)
    except ValueError as e:
        logger.warning(f"Ignoring malformed environment settings: {e}")
        settings = Settings(log_level=log_level)
    return settings
