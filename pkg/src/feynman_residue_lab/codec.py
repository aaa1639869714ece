"""JSON rendering for command results.

Floats are written with 17 significant digits so that every value
round-trips exactly; complex numbers become ``{"re": ..., "im": ...}``.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any

import numpy as np


def format_float(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError(f"cannot encode non-finite float {value!r}")
    text = format(value, ".17g")
    if "." not in text and "e" not in text:
        text += ".0"
    return text


def _encode(value: Any, indent: int, level: int) -> str:
    if value is None or isinstance(value, bool):
        return json.dumps(value)
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, complex):
        return _encode({"re": value.real, "im": value.imag}, indent, level)
    if isinstance(value, (str, Fraction)):
        return json.dumps(str(value))
    if hasattr(value, "to_dict"):
        return _encode(value.to_dict(), indent, level)

    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    close = "\n" + " " * (indent * level) if indent else ""
    separator = "," + pad if indent else ", "
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = (
            f"{json.dumps(str(key))}: {_encode(item, indent, level + 1)}"
            for key, item in value.items()
        )
        return "{" + pad + separator.join(items) + close + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        if len(value) == 0:
            return "[]"
        items = (_encode(item, indent, level + 1) for item in value)
        return "[" + pad + separator.join(items) + close + "]"
    raise TypeError(f"cannot encode {type(value).__name__}")


def dumps(value: Any, indent: int = 0) -> str:
    return _encode(value, indent, 0)
