"""Bounding-box primitives: corner boxes, center/scale/ratio boxes, and IoU.

Coordinate convention is corner-format (x1, y1, x2, y2) in continuous pixels
with the origin at the top-left; width = x2 - x1 with no pixel-inclusive
"+1" correction, so sub-pixel boxes interpolate cleanly. Zero-area boxes are
valid geometry (IoU treats them as empty) but are rejected by the
center/scale/ratio conversion, which is the tracker's measurement space.

All functions are pure and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .validation import check_corner_coords, check_finite, check_non_negative


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box in pixel coordinates, x2 >= x1 and y2 >= y1."""

    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self):
        x1, y1, x2, y2 = check_corner_coords(self.x1, self.y1, self.x2, self.y2)
        object.__setattr__(self, "x1", x1)
        object.__setattr__(self, "y1", y1)
        object.__setattr__(self, "x2", x2)
        object.__setattr__(self, "y2", y2)

    @property
    def width(self) -> float:
        return self.x2 - self.x1

    @property
    def height(self) -> float:
        return self.y2 - self.y1

    @property
    def area(self) -> float:
        return self.width * self.height

    def as_tuple(self) -> tuple[float, float, float, float]:
        return self.x1, self.y1, self.x2, self.y2

    def shifted(self, dx: float, dy: float) -> "BoundingBox":
        return BoundingBox(self.x1 + dx, self.y1 + dy, self.x2 + dx, self.y2 + dy)

    def scaled(self, factor: float) -> "BoundingBox":
        if factor <= 0:
            raise ValueError(f"scale factor must be > 0, got {factor!r}")
        return BoundingBox(self.x1 * factor, self.y1 * factor, self.x2 * factor, self.y2 * factor)


@dataclass(frozen=True)
class CsrBox:
    """Center/scale/ratio box: the tracker's measurement parameterization.

    u, v are the box center in pixels, s is the area in px^2, and r the
    width/height aspect ratio. r must be strictly positive, which excludes
    degenerate boxes from the measurement space.
    """

    u: float
    v: float
    s: float
    r: float

    def __post_init__(self):
        object.__setattr__(self, "u", check_finite("u", self.u))
        object.__setattr__(self, "v", check_finite("v", self.v))
        object.__setattr__(self, "s", check_non_negative("s", self.s))
        r = check_finite("r", self.r)
        if r <= 0:
            raise ValueError(f"aspect ratio r must be > 0, got {r!r}")
        object.__setattr__(self, "r", r)

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v, self.s, self.r], dtype=float)


def center(box: BoundingBox) -> tuple[float, float]:
    """Geometric center (epicenter) of a box."""
    return (box.x1 + box.x2) / 2.0, (box.y1 + box.y2) / 2.0


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection-over-union of two boxes, in [0, 1].

    Returns 0.0 when the union has zero area (both boxes degenerate).
    """
    ix1 = max(a.x1, b.x1)
    iy1 = max(a.y1, b.y1)
    ix2 = min(a.x2, b.x2)
    iy2 = min(a.y2, b.y2)
    inter = max(0.0, ix2 - ix1) * max(0.0, iy2 - iy1)
    union = a.area + b.area - inter
    if union <= 0.0:
        return 0.0
    return inter / union


def iou_matrix(boxes_a: Sequence[BoundingBox], boxes_b: Sequence[BoundingBox]) -> np.ndarray:
    """Pairwise IoU between two box lists, shape (len(a), len(b))."""
    n, m = len(boxes_a), len(boxes_b)
    if n == 0 or m == 0:
        return np.zeros((n, m), dtype=float)
    a = boxes_to_array(boxes_a)
    b = boxes_to_array(boxes_b)
    ix1 = np.maximum(a[:, 0][:, None], b[:, 0][None, :])
    iy1 = np.maximum(a[:, 1][:, None], b[:, 1][None, :])
    ix2 = np.minimum(a[:, 2][:, None], b[:, 2][None, :])
    iy2 = np.minimum(a[:, 3][:, None], b[:, 3][None, :])
    inter = np.maximum(0.0, ix2 - ix1) * np.maximum(0.0, iy2 - iy1)
    area_a = ((a[:, 2] - a[:, 0]) * (a[:, 3] - a[:, 1]))[:, None]
    area_b = ((b[:, 2] - b[:, 0]) * (b[:, 3] - b[:, 1]))[None, :]
    union = area_a + area_b - inter
    out = np.where(union > 0.0, inter / np.where(union > 0.0, union, 1.0), 0.0)
    return out


def to_csr(box: BoundingBox) -> CsrBox:
    """Convert a corner box to center/scale/ratio measurement form.

    Degenerate boxes (zero width or height) have no defined aspect ratio and
    are rejected; they must not enter the Kalman filter.
    """
    w = box.width
    h = box.height
    if h <= 0 or w <= 0:
        raise ValueError(f"degenerate box {box.as_tuple()} has no aspect ratio")
    u, v = center(box)
    return CsrBox(u=u, v=v, s=w * h, r=w / h)


def from_csr(csr: CsrBox) -> BoundingBox:
    """Invert to_csr: solve w = sqrt(s * r), h = s / w."""
    w = math.sqrt(csr.s * csr.r)
    h = csr.s / w if w > 0 else 0.0
    return BoundingBox(csr.u - w / 2.0, csr.v - h / 2.0, csr.u + w / 2.0, csr.v + h / 2.0)


def boxes_to_array(boxes: Sequence[BoundingBox]) -> np.ndarray:
    """Stack boxes into an (n, 4) float array of corner coordinates."""
    if len(boxes) == 0:
        return np.zeros((0, 4), dtype=float)
    return np.array([b.as_tuple() for b in boxes], dtype=float)
