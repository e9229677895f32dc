"""Detection smoothing over a three-frame sliding window.

Each interior frame is corrected by a presence vote among its two temporal
neighbors: a box seen in both neighbors but missing in the middle frame is
inserted as the midpoint interpolation of the neighbor boxes, and a box seen
only in the middle frame is dropped. Boxes are associated across frames by
greedy best-IoU matching. Every window reads the original, uncorrected
frames, so the pass is a pure function of its input and corrections cannot
cascade. The first and last frames are never modified.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator

from .geometry import BoundingBox, iou_matrix
from .records import Detection
from .validation import check_alpha, check_open_unit_interval

DEFAULT_LINK_IOU = 0.3  # same gate as the tracker's association step


@dataclass(frozen=True)
class FrameWindow:
    """Boxes of three consecutive frames t-1, t, t+1 of one video."""

    prev: tuple[BoundingBox, ...]
    mid: tuple[BoundingBox, ...]
    next: tuple[BoundingBox, ...]

    def __post_init__(self):
        object.__setattr__(self, "prev", tuple(self.prev))
        object.__setattr__(self, "mid", tuple(self.mid))
        object.__setattr__(self, "next", tuple(self.next))


def interpolate_box(a: BoundingBox, b: BoundingBox, alpha: float = 0.5) -> BoundingBox:
    """Coordinate-wise linear interpolation (1-alpha)*a + alpha*b."""
    check_alpha("alpha", alpha)
    return BoundingBox(
        x1=(1.0 - alpha) * a.x1 + alpha * b.x1,
        y1=(1.0 - alpha) * a.y1 + alpha * b.y1,
        x2=(1.0 - alpha) * a.x2 + alpha * b.x2,
        y2=(1.0 - alpha) * a.y2 + alpha * b.y2,
    )


def greedy_iou_links(
    a: Sequence[BoundingBox], b: Sequence[BoundingBox], iou_min: float
) -> list[tuple[int, int]]:
    """One-to-one links between two box lists, best IoU first.

    Pairs with IoU below iou_min are never linked. Ties break toward the
    lowest index in `a`, then in `b`, so the result is deterministic.
    """
    if not a or not b:
        return []
    ious = iou_matrix(a, b)
    candidates = [
        (ious[i, j], i, j)
        for i in range(len(a))
        for j in range(len(b))
        if ious[i, j] >= iou_min
    ]
    candidates.sort(key=lambda c: (-c[0], c[1], c[2]))
    used_a: set[int] = set()
    used_b: set[int] = set()
    links: list[tuple[int, int]] = []
    for _, i, j in candidates:
        if i in used_a or j in used_b:
            continue
        used_a.add(i)
        used_b.add(j)
        links.append((i, j))
    links.sort()
    return links


@dataclass(frozen=True)
class WindowActions:
    """What a voting pass decided for the middle frame.

    kept_mid: indices into mid that survive (boxes with neighbor support on
    at least one side). insertions: (prev_index, next_index) pairs whose
    boxes agree with each other but have no middle-frame counterpart.
    """

    kept_mid: tuple[int, ...]
    insertions: tuple[tuple[int, int], ...]


def vote_window(w: FrameWindow, iou_link: float = DEFAULT_LINK_IOU) -> WindowActions:
    check_open_unit_interval("iou_link", iou_link)
    prev_of_mid = dict(greedy_iou_links(w.mid, w.prev, iou_link))
    next_of_mid = dict(greedy_iou_links(w.mid, w.next, iou_link))
    kept = tuple(
        m for m in range(len(w.mid)) if m in prev_of_mid or m in next_of_mid
    )
    free_prev = [p for p in range(len(w.prev)) if p not in set(prev_of_mid.values())]
    free_next = [n for n in range(len(w.next)) if n not in set(next_of_mid.values())]
    bridge = greedy_iou_links(
        [w.prev[p] for p in free_prev], [w.next[n] for n in free_next], iou_link
    )
    insertions = tuple((free_prev[i], free_next[j]) for i, j in bridge)
    return WindowActions(kept_mid=kept, insertions=insertions)


def smooth_window(w: FrameWindow, iou_link: float = DEFAULT_LINK_IOU) -> list[BoundingBox]:
    """Corrected middle-frame box list under the 2-of-3 presence vote."""
    actions = vote_window(w, iou_link)
    out = [w.mid[m] for m in actions.kept_mid]
    out.extend(interpolate_box(w.prev[p], w.next[n], 0.5) for p, n in actions.insertions)
    return out


def run_smoothing(
    frames: Sequence[Sequence[BoundingBox]], iou_link: float = DEFAULT_LINK_IOU
) -> list[list[BoundingBox]]:
    """Apply the window vote at every interior frame, stride one.

    All windows read `frames` as given, never earlier corrections. Sequences
    shorter than three frames pass through unchanged.
    """
    check_open_unit_interval("iou_link", iou_link)
    if len(frames) < 3:
        return [list(f) for f in frames]
    out = [list(frames[0])]
    for t in range(1, len(frames) - 1):
        window = FrameWindow(prev=frames[t - 1], mid=frames[t], next=frames[t + 1])
        out.append(smooth_window(window, iou_link))
    out.append(list(frames[-1]))
    return out


class DetectionSmoother(BaseEstimator):
    """Record-level smoothing front-end with the estimator API.

    transform() consumes Detection records, applies the window vote per
    video over the contiguous frame range covered by that video's records,
    and returns corrected Detection records sorted by (video, frame). A
    surviving box keeps its record's score; an inserted box gets the mean
    score of its two supporting neighbors.
    """

    def __init__(self, iou_link: float = DEFAULT_LINK_IOU):
        self.iou_link = iou_link

    def fit(self, X=None, y=None):
        check_open_unit_interval("iou_link", self.iou_link)
        return self

    def transform(self, X: Iterable[Detection]) -> list[Detection]:
        check_open_unit_interval("iou_link", self.iou_link)
        per_video: dict[str, dict[int, list[Detection]]] = {}
        for det in X:
            per_video.setdefault(det.video_id, {}).setdefault(det.frame_index, []).append(det)
        out: list[Detection] = []
        for video_id in sorted(per_video):
            frames = per_video[video_id]
            lo, hi = min(frames), max(frames)
            index = list(range(lo, hi + 1))
            dets: list[list[Detection]] = [frames.get(t, []) for t in index]
            if len(index) < 3:
                for frame_dets in dets:
                    out.extend(frame_dets)
                continue
            out.extend(dets[0])
            for t in range(1, len(index) - 1):
                prev, mid, nxt = dets[t - 1], dets[t], dets[t + 1]
                window = FrameWindow(
                    prev=[d.box for d in prev],
                    mid=[d.box for d in mid],
                    next=[d.box for d in nxt],
                )
                actions = vote_window(window, self.iou_link)
                out.extend(mid[m] for m in actions.kept_mid)
                for p, n in actions.insertions:
                    out.append(
                        Detection(
                            video_id=video_id,
                            frame_index=index[t],
                            box=interpolate_box(prev[p].box, nxt[n].box, 0.5),
                            score=(prev[p].score + nxt[n].score) / 2.0,
                        )
                    )
            out.extend(dets[-1])
        return out

    def fit_transform(self, X: Iterable[Detection], y=None) -> list[Detection]:
        return self.fit(X, y).transform(X)
