import dataclasses
import hashlib
import json
from collections import abc
from enum import Enum
from typing import (
    Any,
    Dict,
    List,
    Tuple,
    Union,
    get_args,
    get_origin,
    get_type_hints,
)

import numpy as np

__all__ = (
    "dataclass_from_dict",
    "dataclass_to_dict",
    "json_default",
    "stable_hash",
    "log_grid",
    "stack",
    "unstack",
)


def dataclass_from_dict(klass: Any, d: Any) -> Any:
    if d is None:
        return None
    origin = get_origin(klass)
    if origin is Union:
        options = [a for a in get_args(klass) if a is not type(None)]
        return dataclass_from_dict(options[0], d)
    if origin in (list, abc.Sequence):
        (item,) = get_args(klass) or (Any,)
        return [dataclass_from_dict(item, v) for v in d]
    if origin is tuple:
        args = get_args(klass)
        if len(args) == 2 and args[1] is Ellipsis:
            return tuple(dataclass_from_dict(args[0], v) for v in d)
        if isinstance(d, (str, bytes)) or len(d) != len(args):
            raise TypeError(f"expected {len(args)} entries, got {d!r}")
        return tuple(dataclass_from_dict(a, v) for a, v in zip(args, d))
    if klass is Any:
        return d
    if isinstance(klass, type) and issubclass(klass, Enum):
        return klass(d)
    if klass is bool:
        return bool(d)
    if klass is int:
        if isinstance(d, float) and not d.is_integer():
            raise TypeError(f"expected an integer, got {d!r}")
        return int(d)
    if klass is float:
        return float(d)
    if klass is str:
        return str(d)
    if not dataclasses.is_dataclass(klass):
        return d
    if not isinstance(d, dict):
        raise TypeError(f"expected a table for {klass.__name__}, got {d!r}")
    fieldtypes = get_type_hints(klass)
    unknown = set(d) - set(fieldtypes)
    if unknown:
        raise KeyError(f"unknown keys {sorted(unknown)} for {klass.__name__}")
    return klass(**{f: dataclass_from_dict(fieldtypes[f], d[f]) for f in d})


def json_default(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Enum):
        return value.value
    if dataclasses.is_dataclass(value):
        return dataclass_to_dict(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def _dict_factory(items: List[Tuple[str, Any]]) -> Dict[str, Any]:
    return {k: v.value if isinstance(v, Enum) else v for k, v in items}


def dataclass_to_dict(obj: Any) -> Dict[str, Any]:
    return dataclasses.asdict(obj, dict_factory=_dict_factory)


def stable_hash(payload: Any) -> str:
    text = json.dumps(payload, sort_keys=True, default=json_default)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def log_grid(t_end: float, points: int, start: float = 0.0) -> np.ndarray:
    """Grid on [start, t_end] that is uniform in log(1 + t)."""
    return np.expm1(np.linspace(np.log1p(start), np.log1p(t_end), points))


def stack(blocks: np.ndarray) -> np.ndarray:
    return np.asarray(blocks, dtype=float).reshape(-1)


def unstack(x: np.ndarray, agent_count: int, dimension: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != agent_count * dimension:
        raise ValueError(
            f"state length {x.shape[-1]} does not match N*d = "
            f"{agent_count}*{dimension}"
        )
    return x.reshape(x.shape[:-1] + (agent_count, dimension))
