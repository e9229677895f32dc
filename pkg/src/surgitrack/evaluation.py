"""Detection evaluation: greedy IoU matching and average precision at a
fixed IoU threshold.

Matching follows the usual protocol: predictions are visited in descending
confidence order (input order breaks ties) and claim the highest-IoU
still-unmatched ground-truth box at or above the threshold. AP is the area
under the all-point-interpolated precision envelope; with a single class,
mAP equals AP.

Everything here is a pure function: evaluating disjoint frame sets
concurrently and merging the records afterwards is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .geometry import BoundingBox, iou_matrix
from .records import Detection, FrameAnnotation

DEFAULT_IOU_MIN = 0.5


@dataclass(frozen=True)
class EvalRecord:
    """Per-prediction (confidence, is_true_positive) outcomes plus the
    ground-truth count they were matched against."""

    outcomes: tuple[tuple[float, bool], ...]
    num_gt: int

    def __post_init__(self):
        if self.num_gt < 0:
            raise ValueError("num_gt must be >= 0")
        object.__setattr__(self, "outcomes", tuple((float(s), bool(t)) for s, t in self.outcomes))

    @property
    def num_tp(self) -> int:
        return sum(1 for _, tp in self.outcomes if tp)

    @property
    def num_fp(self) -> int:
        return len(self.outcomes) - self.num_tp

    @property
    def num_fn(self) -> int:
        return self.num_gt - self.num_tp

    @staticmethod
    def merge(records: Iterable["EvalRecord"]) -> "EvalRecord":
        outcomes: list[tuple[float, bool]] = []
        num_gt = 0
        for rec in records:
            outcomes.extend(rec.outcomes)
            num_gt += rec.num_gt
        return EvalRecord(tuple(outcomes), num_gt)


def match_detections(
    preds: Sequence[Detection],
    gts: Sequence[BoundingBox],
    iou_min: float = DEFAULT_IOU_MIN,
) -> EvalRecord:
    """Greedily match one frame's predictions against its ground truth.

    Predictions are processed in descending confidence (stable under ties);
    each claims the highest-IoU unmatched gt with IoU >= iou_min, consuming
    it, and is a true positive; otherwise it is a false positive.
    """
    if not 0.0 < iou_min <= 1.0:
        raise ValueError(f"iou_min must be in (0, 1], got {iou_min!r}")
    order = sorted(range(len(preds)), key=lambda i: -preds[i].score)
    ious = iou_matrix([p.box for p in preds], list(gts))
    gt_taken = [False] * len(gts)
    is_tp = [False] * len(preds)
    for i in order:
        best_j = -1
        best_iou = 0.0
        for j in range(len(gts)):
            if gt_taken[j]:
                continue
            v = ious[i, j]
            if v >= iou_min and v > best_iou:
                best_iou = v
                best_j = j
        if best_j >= 0:
            gt_taken[best_j] = True
            is_tp[i] = True
    outcomes = tuple((preds[i].score, is_tp[i]) for i in order)
    return EvalRecord(outcomes, len(gts))


def evaluate_detections(
    preds: Sequence[Detection],
    annotations: Sequence[FrameAnnotation],
    iou_min: float = DEFAULT_IOU_MIN,
) -> EvalRecord:
    """Match per (video, frame) and pool the outcomes into one record.

    Frames that appear only in the annotations still contribute their
    ground-truth count; predictions on frames with no annotation record are
    matched against an empty ground truth (all false positives).
    """
    by_frame: dict[tuple[str, int], list[Detection]] = {}
    for det in preds:
        by_frame.setdefault((det.video_id, det.frame_index), []).append(det)
    gt_by_frame: dict[tuple[str, int], list[BoundingBox]] = {}
    for ann in annotations:
        key = (ann.video_id, ann.frame_index)
        gt_by_frame.setdefault(key, []).extend(ann.boxes())
    keys = sorted(set(by_frame) | set(gt_by_frame))
    records = [
        match_detections(by_frame.get(key, []), gt_by_frame.get(key, []), iou_min) for key in keys
    ]
    return EvalRecord.merge(records)


def _sorted_cumulative(record: EvalRecord) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative (recall, precision) arrays over confidence-sorted outcomes."""
    outcomes = sorted(record.outcomes, key=lambda o: -o[0])
    tp = np.cumsum([1.0 if t else 0.0 for _, t in outcomes])
    fp = np.cumsum([0.0 if t else 1.0 for _, t in outcomes])
    recall = tp / record.num_gt
    precision = tp / np.maximum(tp + fp, 1.0)
    return recall, precision


def precision_recall_curve(record: EvalRecord) -> list[tuple[float, float]]:
    """(recall, precision) points in descending-confidence order."""
    if record.num_gt == 0:
        raise ValueError("undefined AP: no ground-truth boxes")
    recall, precision = _sorted_cumulative(record)
    return list(zip(recall.tolist(), precision.tolist()))


def average_precision(record: EvalRecord) -> float:
    """Area under the all-point-interpolated precision envelope, in [0, 1].

    Precision at each recall level is the maximum precision at any recall
    at or above it. Invariant under strictly monotone rescaling of the
    confidence scores.
    """
    if record.num_gt == 0:
        raise ValueError("undefined AP: no ground-truth boxes")
    if len(record.outcomes) == 0:
        return 0.0
    recall, precision = _sorted_cumulative(record)
    # Envelope from the right, then sum precision over recall increments.
    envelope = np.maximum.accumulate(precision[::-1])[::-1]
    prev_recall = 0.0
    ap = 0.0
    for r, p in zip(recall, envelope):
        if r > prev_recall:
            ap += (r - prev_recall) * p
            prev_recall = r
    return float(ap)
