from functools import wraps
from typing import Any, Callable, TypeVar, cast

from .exceptions import DgdError, ScenarioError
from .logging import get_current_run_id, log_error

TFunc = TypeVar("TFunc", bound=Callable[..., Any])


def handle_stage_error(field: str) -> Callable[[TFunc], TFunc]:
    """Re-raise builder failures as ScenarioError naming the config field."""

    def decorator(func: TFunc) -> TFunc:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            try:
                return func(*args, **kwargs)
            except ScenarioError:
                raise
            except (DgdError, ValueError, TypeError, KeyError) as e:
                log_error(get_current_run_id(), field, f"{type(e).__name__} {e}")
                raise ScenarioError(field, str(e)) from e

        return cast(TFunc, wrapper)

    return decorator
