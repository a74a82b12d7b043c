import logging
from contextvars import ContextVar
from typing import Optional

__all__ = (
    "get_current_run_id",
    "log_run",
    "log_error",
)

logger = logging.getLogger(__name__)

_RUN_ID: ContextVar[Optional[str]] = ContextVar("run_id", default=None)


def get_current_run_id() -> Optional[str]:
    return _RUN_ID.get() or None


def log_run(run_id: Optional[str], name: str) -> None:
    _RUN_ID.set(run_id)
    logger.info("%s %s", run_id, name)


def log_error(run_id: Optional[str], name: str, text: str) -> None:
    _RUN_ID.set(run_id)
    logger.error("%s %s %s", run_id, name, text)
