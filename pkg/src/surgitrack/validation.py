"""Input validation helpers shared across the toolkit.

Small check_* functions in the spirit of sklearn's validation utilities:
each either returns the (possibly coerced) value or raises ValueError with
a message naming the offending parameter.
"""

from __future__ import annotations

import math
from typing import Sequence


def check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def check_non_negative(name: str, value: float) -> float:
    value = check_finite(name, value)
    if value < 0:
        raise ValueError(f"{name} must be >= 0, got {value!r}")
    return value


def check_positive(name: str, value: float) -> float:
    value = check_finite(name, value)
    if value <= 0:
        raise ValueError(f"{name} must be > 0, got {value!r}")
    return value


def check_unit_interval(name: str, value: float) -> float:
    """Validate value in the closed interval [0, 1]."""
    value = check_finite(name, value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value!r}")
    return value


def check_open_unit_interval(name: str, value: float) -> float:
    """Validate value in the open interval (0, 1)."""
    value = check_finite(name, value)
    if not 0.0 < value < 1.0:
        raise ValueError(f"{name} must be in (0, 1), got {value!r}")
    return value


def check_alpha(name: str, value: float) -> float:
    value = check_finite(name, value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value!r}")
    return value


def check_corner_coords(x1: float, y1: float, x2: float, y2: float) -> tuple[float, float, float, float]:
    """Validate corner-format box coordinates: finite, x2 >= x1, y2 >= y1."""
    x1 = check_finite("x1", x1)
    y1 = check_finite("y1", y1)
    x2 = check_finite("x2", x2)
    y2 = check_finite("y2", y2)
    if x2 < x1 or y2 < y1:
        raise ValueError(
            f"box has negative extent: ({x1}, {y1}, {x2}, {y2}) requires x2 >= x1 and y2 >= y1"
        )
    return x1, y1, x2, y2


def check_nonempty(name: str, values: Sequence) -> Sequence:
    if len(values) == 0:
        raise ValueError(f"{name} must not be empty")
    return values
