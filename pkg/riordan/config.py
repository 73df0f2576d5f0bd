import logging
import os
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field

# Load environment variables (an .env file is optional)
load_dotenv()

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class Settings(BaseModel):
    model_config = ConfigDict(frozen=True)

    precision_bits: int = Field(128, ge=64)
    digits: int = Field(20, ge=1)
    per_term_cap: int = Field(1000, ge=0)
    oracle_factor: int = Field(2, ge=2)  # oracle runs at oracle_factor * precision_bits
    log_level: str = "INFO"


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Settings from the environment, read once per process."""
    return Settings(
        precision_bits=int(os.environ.get('RIORDAN_PRECISION_BITS', 128)),
        digits=int(os.environ.get('RIORDAN_DIGITS', 20)),
        per_term_cap=int(os.environ.get('RIORDAN_PER_TERM_CAP', 1000)),
        oracle_factor=int(os.environ.get('RIORDAN_ORACLE_FACTOR', 2)),
        log_level=os.environ.get('RIORDAN_LOG_LEVEL', 'INFO').upper(),
    )


def configure_logging(level: Optional[str] = None) -> None:
    logging.basicConfig(
        level=getattr(logging, level or get_settings().log_level, logging.INFO),
        format=LOG_FORMAT,
    )
