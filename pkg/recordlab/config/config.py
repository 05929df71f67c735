import logging
import os
from typing import Optional

logger = logging.getLogger(__name__)


def _default_threads() -> int:
    return max(1, min(16, os.cpu_count() or 1))


class Config:
    """Configuration settings for RecordLab"""

    # Simulation
    THREADS: int = int(os.getenv("RECORDLAB_THREADS", str(_default_threads())))
    SEED: int = int(os.getenv("RECORDLAB_SEED", str(0x5EED)), 0)
    CHUNK: int = int(os.getenv("RECORDLAB_CHUNK", "64"))
    MAX_REPLICATIONS: int = int(os.getenv("RECORDLAB_MAX_REPLICATIONS", "1000000"))

    # Series evaluation
    EPS: float = float(os.getenv("RECORDLAB_EPS", "1e-10"))
    PRECISION: str = os.getenv("RECORDLAB_PRECISION", "double").lower()
    TERM_CAP: int = int(os.getenv("RECORDLAB_TERM_CAP", "10000000"))
    DD_DPS: int = int(os.getenv("RECORDLAB_DD_DPS", "34"))

    # Output
    SIGNIFICANT_DIGITS: int = 15
    LOG_LEVEL: str = os.getenv("RECORDLAB_LOG_LEVEL", "INFO").upper()
    SCHEMA_PATH: Optional[str] = os.getenv("RECORDLAB_SCHEMA_PATH")

    @classmethod
    def threads(cls, override: Optional[int] = None) -> int:
        """Worker thread count. RECORDLAB_THREADS is read at call time."""
        if override is not None:
            return max(1, int(override))
        return max(1, int(os.getenv("RECORDLAB_THREADS", str(cls.THREADS))))

    @classmethod
    def validate(cls) -> bool:
        """Validate configuration"""
        ok = True
        if cls.PRECISION not in ("double", "dd"):
            logger.warning(f"Unknown RECORDLAB_PRECISION '{cls.PRECISION}', expected double or dd")
            ok = False
        if not 0 < cls.EPS < 1:
            logger.warning(f"RECORDLAB_EPS={cls.EPS} outside (0, 1)")
            ok = False
        if cls.CHUNK < 1 or cls.THREADS < 1:
            logger.warning("RECORDLAB_CHUNK and RECORDLAB_THREADS must be positive")
            ok = False
        if cls.TERM_CAP > 10_000_000:
            logger.warning("RECORDLAB_TERM_CAP above 10^7; tails beyond the cap need a closure path")
            ok = False
        return ok


# Global settings instance
settings = Config()
