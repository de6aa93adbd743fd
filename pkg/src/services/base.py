import logging
from typing import Any, Callable

from core.exceptions import ExtremalError, OperationError

logger = logging.getLogger(__name__)


class BaseService:
    """Base service with error handling"""

    def _run(self, fn: Callable[[], Any], error_context: str = "Operation") -> Any:
        """Run fn; toolkit errors pass through, anything else becomes OperationError."""
        try:
            return fn()
        except ExtremalError:
            raise
        except Exception as e:
            logger.exception(f"{error_context} failed")
            raise OperationError(f"{error_context} failed: {str(e)}") from e
