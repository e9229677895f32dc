"""Dataset construction: frame-sampling plans and the stratified video split.

Videos are normalized to 15 fps; only the middle twenty minutes of long
videos are considered, and ten frames are drawn per video at the centers of
ten equal sub-intervals of that window. The train/val/test split operates on
whole videos (never frames), stratifies by surgical category, and is a
deterministic function of the seed that ignores input ordering.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .records import CATEGORIES, VideoManifest

WORKING_FPS = 15
WINDOW_S = 20.0 * 60.0  # long videos contribute only their middle 20 minutes
FRAMES_PER_VIDEO = 10
DEFAULT_TARGETS = (940, 380, 560)  # train/val/test frame counts
SPLIT_NAMES = ("train", "val", "test")


@dataclass(frozen=True)
class SamplingPlan:
    """Which frames of one video enter the dataset."""

    video_id: str
    window: tuple[float, float]  # seconds, [start, end]
    sampled_frame_indices: tuple[int, ...]
    working_fps: int = WORKING_FPS

    def __post_init__(self):
        start, end = self.window
        if not 0.0 <= start < end:
            raise ValueError(f"window must satisfy 0 <= start < end, got {self.window!r}")
        object.__setattr__(self, "sampled_frame_indices", tuple(self.sampled_frame_indices))
        idx = self.sampled_frame_indices
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("sampled frame indices must strictly increase")
        lo = start * self.working_fps - 0.5
        hi = end * self.working_fps + 0.5
        if idx and not (lo <= idx[0] and idx[-1] <= hi):
            raise ValueError("sampled frame indices must lie within the window")


def compute_sampling_plan(m: VideoManifest) -> SamplingPlan:
    """Ten frame indices at the centers of ten equal window sub-intervals.

    The window is the whole video when it runs twenty minutes or less,
    otherwise the centered twenty-minute interval. Index k is the time
    start + (k + 0.5) / 10 * window_length converted to a frame number at
    15 fps with half-up rounding.
    """
    if m.duration_s * WORKING_FPS < FRAMES_PER_VIDEO:
        raise ValueError(
            f"video {m.video_id!r} is too short: {m.duration_s} s holds fewer than "
            f"{FRAMES_PER_VIDEO} frames at {WORKING_FPS} fps"
        )
    if m.duration_s <= WINDOW_S:
        start, end = 0.0, m.duration_s
    else:
        start = (m.duration_s - WINDOW_S) / 2.0
        end = start + WINDOW_S
    length = end - start
    indices = tuple(
        int(math.floor((start + (k + 0.5) * length / FRAMES_PER_VIDEO) * WORKING_FPS + 0.5))
        for k in range(FRAMES_PER_VIDEO)
    )
    # right at the duration minimum, rounding can land two interval centers
    # on the same frame; such a video cannot yield ten distinct samples
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise ValueError(
            f"video {m.video_id!r} is too short to yield {FRAMES_PER_VIDEO} distinct "
            f"frames at {WORKING_FPS} fps"
        )
    return SamplingPlan(video_id=m.video_id, window=(start, end), sampled_frame_indices=indices)


def sampling_plan_to_obj(plan: SamplingPlan) -> dict:
    return {
        "video_id": plan.video_id,
        "working_fps": plan.working_fps,
        "window": [float(plan.window[0]), float(plan.window[1])],
        "frames": list(plan.sampled_frame_indices),
    }


@dataclass(frozen=True)
class SplitResult:
    """Disjoint video-id sets; frame counts are len(set) * frames_per_video."""

    train: tuple[str, ...]
    val: tuple[str, ...]
    test: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "train", tuple(self.train))
        object.__setattr__(self, "val", tuple(self.val))
        object.__setattr__(self, "test", tuple(self.test))
        sets = [set(self.train), set(self.val), set(self.test)]
        if sum(len(s) for s in sets) != len(set().union(*sets)):
            raise ValueError("split sets must be pairwise disjoint")

    def to_obj(self) -> dict:
        return {"train": list(self.train), "val": list(self.val), "test": list(self.test)}


def _apportion(n: int, weights: Sequence[float]) -> list[int]:
    """Split n items proportionally to weights by largest remainder."""
    total = float(sum(weights))
    quotas = [n * w / total for w in weights]
    counts = [int(math.floor(q)) for q in quotas]
    leftover = n - sum(counts)
    by_remainder = sorted(range(len(weights)), key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in by_remainder[:leftover]:
        counts[i] += 1
    return counts


def _video_targets(targets: Sequence[int], frames_per_video: int, n_videos: int) -> list[int]:
    if len(targets) != 3:
        raise ValueError(f"targets must have three entries, got {targets!r}")
    if any(t < 0 for t in targets):
        raise ValueError(f"targets must be non-negative, got {targets!r}")
    achievable_counts = _apportion(n_videos, [max(t, 1e-9) for t in targets])
    achievable = tuple(c * frames_per_video for c in achievable_counts)
    if sum(targets) != n_videos * frames_per_video or any(
        t % frames_per_video != 0 for t in targets
    ):
        raise ValueError(
            f"frame targets {tuple(targets)} are infeasible with {n_videos} videos at "
            f"{frames_per_video} frames per video; nearest achievable allocation is {achievable}"
        )
    return [t // frames_per_video for t in targets]


def split_dataset(
    manifests: Sequence[VideoManifest],
    frames_per_video: int = FRAMES_PER_VIDEO,
    targets: Sequence[int] = DEFAULT_TARGETS,
    seed: int = 0,
) -> SplitResult:
    """Partition videos into train/val/test, stratified by category.

    Every category's videos are distributed across the three sets in the
    global target proportion (largest-remainder rounding), then a repair
    pass moves single videos between sets until the exact per-set video
    counts are met. Membership is randomized by the seed; the result does
    not depend on the order of the input manifests.
    """
    if frames_per_video < 1:
        raise ValueError(f"frames_per_video must be >= 1, got {frames_per_video!r}")
    ids = [m.video_id for m in manifests]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate video_id in manifests")
    set_targets = _video_targets(targets, frames_per_video, len(manifests))

    by_category: dict[str, list[str]] = {c: [] for c in CATEGORIES}
    for m in manifests:
        by_category[m.category].append(m.video_id)

    rng = random.Random(seed)
    alloc: dict[str, list[int]] = {}
    shuffled: dict[str, list[str]] = {}
    for category in CATEGORIES:
        vids = sorted(by_category[category])
        rng.shuffle(vids)
        shuffled[category] = vids
        alloc[category] = _apportion(len(vids), [max(t, 1e-9) for t in targets])

    # repair: per-category rounding can leave column sums off by a video or
    # two; move videos from over-full to under-full sets until exact
    deficits = [
        set_targets[j] - sum(alloc[c][j] for c in CATEGORIES) for j in range(3)
    ]
    while any(d != 0 for d in deficits):
        over = min(j for j in range(3) if deficits[j] < 0)
        under = min(j for j in range(3) if deficits[j] > 0)
        donor = max(
            (c for c in CATEGORIES if alloc[c][over] > 0),
            key=lambda c: (alloc[c][over], c),
        )
        alloc[donor][over] -= 1
        alloc[donor][under] += 1
        deficits[over] += 1
        deficits[under] -= 1

    sets: list[list[str]] = [[], [], []]
    for category in CATEGORIES:
        vids = shuffled[category]
        a, b, _ = alloc[category]
        sets[0].extend(vids[:a])
        sets[1].extend(vids[a : a + b])
        sets[2].extend(vids[a + b :])
    return SplitResult(
        train=tuple(sorted(sets[0])),
        val=tuple(sorted(sets[1])),
        test=tuple(sorted(sets[2])),
    )
