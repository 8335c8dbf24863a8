"""
Report Writer - Deterministic JSON serialization for verification reports
"""

import json
import math
from typing import Any

import numpy as np

INDENT = "  "


def _number(value: float) -> str:
    if not math.isfinite(value):
        return "null"
    text = format(value, ".17g")
    if text in ("-0", "0"):
        return "0.0"
    if not any(c in text for c in ".e"):
        text += ".0"
    return text


def _encode(value: Any, depth: int) -> str:
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _number(float(value))
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, np.ndarray):
        return _encode(value.tolist(), depth)
    pad, inner = INDENT * depth, INDENT * (depth + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{inner}{json.dumps(str(k), ensure_ascii=False)}: {_encode(value[k], depth + 1)}"
                 for k in sorted(value, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in value):
            return "[" + ", ".join(_encode(v, depth + 1) for v in value) + "]"
        return "[\n" + ",\n".join(inner + _encode(v, depth + 1) for v in value) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def format_report(payload: Any) -> str:
    """JSON with sorted keys, 17 significant digits per float and null for non-finite values"""
    return _encode(payload, 0) + "\n"
