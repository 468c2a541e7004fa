"""Детерминированная выдача артефактов: JSON с сортировкой ключей и 17 значащими цифрами, CSV из DataFrame."""

from __future__ import annotations

import dataclasses
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel

from .numbers import LogNumber


def _float(x: float) -> Any:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def sanitize(obj: Any) -> Any:
    """Приведение к JSON-совместимым типам (numpy, Fraction, LogNumber, dataclass, pydantic)."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, Fraction):
        return {"fraction": f"{obj.numerator}/{obj.denominator}", "value": _float(float(obj))}
    if isinstance(obj, LogNumber):
        return sanitize(obj.to_json())
    if isinstance(obj, np.ndarray):
        return sanitize(obj.tolist())
    if isinstance(obj, pd.DataFrame):
        return sanitize(obj.to_dict(orient="records"))
    if isinstance(obj, BaseModel):
        return sanitize(obj.model_dump())
    if hasattr(obj, "to_dict"):
        return sanitize(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return sanitize({f.name: getattr(obj, f.name) for f in dataclasses.fields(obj)})
    if isinstance(obj, dict):
        return {str(k): sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [sanitize(v) for v in obj]
        return sorted(items, key=repr) if isinstance(obj, (set, frozenset)) else items
    return str(obj)


def _encode(obj: Any, level: int) -> str:
    pad, inner = "  " * level, "  " * (level + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(key, ensure_ascii=False)}: {_encode(obj[key], level + 1)}" for key in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(inner + _encode(v, level + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, float):
        return format(obj, ".17g")
    return json.dumps(obj, ensure_ascii=False)


def dumps(doc: Any) -> str:
    """JSON с сортировкой ключей; float -- 17 значащих цифр."""
    return _encode(sanitize(doc), 0)


def envelope(config: Dict[str, Any], seed: Optional[int], result: Any) -> Dict[str, Any]:
    from . import __version__

    return {"version": __version__, "config": config, "seed": seed, "result": result}


def to_csv(table: pd.DataFrame) -> str:
    return table.to_csv(index=False, float_format="%.17g")


def write_artifact(text: str, out: Optional[Path]) -> None:
    if out is None:
        print(text)
        return
    Path(out).write_text(text + "\n", encoding="utf-8")


__all__ = ["sanitize", "dumps", "envelope", "to_csv", "write_artifact"]
