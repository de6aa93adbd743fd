import logging
import os

from dotenv import load_dotenv

logger = logging.getLogger(__name__)


class ConfigManager:
    """Manages environment-driven defaults for verification runs."""

    def __init__(self):
        load_dotenv()

    def _get_number(self, name: str, default, cast):
        raw = os.getenv(name)
        if raw is None or not raw.strip():
            return default
        try:
            return cast(raw.strip())
        except ValueError:
            logger.warning(f"ignoring {name}={raw!r}: not a valid {cast.__name__}")
            return default

    def get_jobs(self) -> int:
        """Default worker count for pair scans."""
        return max(1, self._get_number("EXTREMAL_JOBS", 1, int))

    def get_tolerance(self) -> float:
        """Numeric tolerance for dense and eigenbasis audits."""
        return self._get_number("EXTREMAL_TOLERANCE", 1e-9, float)

    def get_seed(self) -> int:
        return self._get_number("EXTREMAL_SEED", 0, int)

    def get_debug_mode(self) -> bool:
        """Get debug mode setting."""
        return os.getenv("DEBUG", "false").lower() == "true"

    def get_environment(self) -> str:
        """Get current environment setting."""
        return os.getenv("ENVIRONMENT", "development")
