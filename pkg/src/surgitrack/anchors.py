"""Anchor grid generation and IoU-based anchor labeling.

Anchors are reference boxes tiled over the image at each pyramid stride.
Each anchor is labeled positive against its best-IoU ground-truth box when
that IoU reaches the positive threshold, and background otherwise; there is
no intermediate "ignore" band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .geometry import BoundingBox, iou_matrix
from .validation import check_positive

# Boundary rule: IoU exactly at the threshold counts as positive, matching
# the evaluation side's "at least" convention, so the label function is total.
POSITIVE_IOU = 0.5


@dataclass(frozen=True)
class AnchorConfig:
    """Anchor-generation parameters.

    One anchor per (scale, ratio) pair is centered on every grid point; grid
    points are spaced one stride apart per pyramid level. Anchor side length
    is base_size * scale (independent of the level), and ratio = width/height.
    """

    strides: tuple[float, ...]
    scales: tuple[float, ...] = (1.0,)
    ratios: tuple[float, ...] = (1.0,)
    base_size: float = 8.0

    def __post_init__(self):
        for name in ("strides", "scales", "ratios"):
            values = tuple(getattr(self, name))
            if len(values) == 0:
                raise ValueError(f"{name} must not be empty")
            for v in values:
                check_positive(f"{name} entry", v)
            object.__setattr__(self, name, values)
        object.__setattr__(self, "base_size", check_positive("base_size", self.base_size))


@dataclass(frozen=True)
class AnchorLabel:
    """Label for one anchor: matched ground-truth index or background (None)."""

    gt_index: Optional[int]
    iou: float

    @property
    def is_positive(self) -> bool:
        return self.gt_index is not None


@dataclass(frozen=True)
class AnchorAssignment:
    """Per-anchor labels; every anchor gets exactly one."""

    labels: tuple[AnchorLabel, ...]

    @property
    def num_positive(self) -> int:
        return sum(1 for label in self.labels if label.is_positive)

    @property
    def num_background(self) -> int:
        return len(self.labels) - self.num_positive

    def __len__(self) -> int:
        return len(self.labels)


def generate_anchors(config: AnchorConfig, image_w: float, image_h: float) -> list[BoundingBox]:
    """Tile anchors over the image, one grid per stride.

    Grid centers sit at (stride/2 + i*stride) so the grid covers
    ceil(image/stride) positions per axis. Anchors are not clipped to the
    image bounds.
    """
    check_positive("image_w", image_w)
    check_positive("image_h", image_h)
    anchors: list[BoundingBox] = []
    for stride in config.strides:
        nx = math.ceil(image_w / stride)
        ny = math.ceil(image_h / stride)
        for j in range(ny):
            cy = stride / 2.0 + j * stride
            for i in range(nx):
                cx = stride / 2.0 + i * stride
                for scale in config.scales:
                    side = config.base_size * scale
                    for ratio in config.ratios:
                        w = side * math.sqrt(ratio)
                        h = side / math.sqrt(ratio)
                        anchors.append(
                            BoundingBox(cx - w / 2.0, cy - h / 2.0, cx + w / 2.0, cy + h / 2.0)
                        )
    return anchors


def assign_anchors(
    anchors: Sequence[BoundingBox],
    gts: Sequence[BoundingBox],
    iou_positive: float = POSITIVE_IOU,
) -> AnchorAssignment:
    """Label each anchor positive (best gt, IoU >= iou_positive) or background.

    With no ground-truth boxes every anchor is background. Ties between
    ground-truth boxes at equal IoU go to the lowest index.
    """
    if len(anchors) == 0:
        raise ValueError("anchors must not be empty")
    if len(gts) == 0:
        return AnchorAssignment(tuple(AnchorLabel(None, 0.0) for _ in anchors))
    ious = iou_matrix(anchors, gts)
    best_gt = np.argmax(ious, axis=1)  # argmax takes the lowest index on ties
    best_iou = ious[np.arange(len(anchors)), best_gt]
    labels = tuple(
        AnchorLabel(int(g), float(v)) if v >= iou_positive else AnchorLabel(None, float(v))
        for g, v in zip(best_gt, best_iou)
    )
    return AnchorAssignment(labels)
