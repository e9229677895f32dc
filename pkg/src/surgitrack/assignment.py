"""Minimum-cost assignment and IoU-gated track/detection association."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .geometry import BoundingBox, iou_matrix

DEFAULT_ASSOCIATION_IOU = 0.3


def hungarian(cost) -> list[tuple[int, int]]:
    """Minimum-cost maximum matching on a rectangular cost matrix.

    Implements the potentials / shortest-augmenting-path form of the
    Hungarian method, O(n^2 * m). Rectangular inputs are handled by solving
    the transposed problem, so the matching always covers the smaller
    dimension. Among equal-cost alternatives the scan order prefers the
    lowest column index, which makes the result deterministic under ties.

    Args:
        cost: (n_rows, n_cols) array-like of finite costs.

    Returns:
        (row, col) pairs sorted by row; empty for an empty matrix.
    """
    a = np.asarray(cost, dtype=float)
    if a.size == 0:
        return []
    if a.ndim != 2:
        raise ValueError(f"cost must be a 2-d matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("cost matrix entries must be finite")
    transposed = a.shape[0] > a.shape[1]
    if transposed:
        a = a.T
    n, m = a.shape

    # Row/column potentials with 1-based columns; column 0 is the virtual
    # start of each augmenting path.
    INF = float("inf")
    u = [0.0] * (n + 1)
    v = [0.0] * (m + 1)
    match = [0] * (m + 1)  # match[j] = row assigned to column j (1-based; 0 = free)
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv = [INF] * (m + 1)
        used = [False] * (m + 1)
        way = [0] * (m + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            delta = INF
            j1 = 0
            row = a[i0 - 1]
            for j in range(1, m + 1):
                if used[j]:
                    continue
                cur = row[j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(m + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1

    pairs = []
    for j in range(1, m + 1):
        if match[j] != 0:
            r, c = match[j] - 1, j - 1
            pairs.append((c, r) if transposed else (r, c))
    pairs.sort()
    return pairs


def associate(
    predicted: Sequence[tuple[int, BoundingBox]],
    detections: Sequence[BoundingBox],
    iou_min: float = DEFAULT_ASSOCIATION_IOU,
) -> tuple[list[tuple[int, int]], list[int], list[int]]:
    """Match predicted track boxes to detections by IoU.

    Runs the Hungarian method on cost = 1 - IoU, then demotes any matched
    pair whose IoU falls below the gate. The three outputs partition the
    inputs: (track_identity, detection_index) matches, unmatched track
    identities, and unmatched detection indices.
    """
    if not 0.0 < iou_min < 1.0:
        raise ValueError(f"iou_min must be in (0, 1), got {iou_min!r}")
    identities = [identity for identity, _ in predicted]
    boxes = [box for _, box in predicted]
    ious = iou_matrix(boxes, list(detections))
    pairs = hungarian(1.0 - ious) if ious.size else []
    matches: list[tuple[int, int]] = []
    matched_rows: set[int] = set()
    matched_cols: set[int] = set()
    for r, c in pairs:
        if ious[r, c] >= iou_min:
            matches.append((identities[r], c))
            matched_rows.add(r)
            matched_cols.add(c)
    unmatched_tracks = [identities[r] for r in range(len(predicted)) if r not in matched_rows]
    unmatched_detections = [c for c in range(len(detections)) if c not in matched_cols]
    return matches, unmatched_tracks, unmatched_detections
