"""Domain record types shared by the pipeline stages and the file formats."""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import BoundingBox
from .validation import check_positive, check_unit_interval

# Handedness labels as stored on annotations. They are kept for bookkeeping
# only; no pipeline stage consumes them.
SIDE_LEFT = "L"
SIDE_RIGHT = "R"
SIDE_UNKNOWN = "U"
SIDES = (SIDE_LEFT, SIDE_RIGHT, SIDE_UNKNOWN)

PROVENANCE_DETECTED = "det"
PROVENANCE_PREDICTED = "pred"
PROVENANCES = (PROVENANCE_DETECTED, PROVENANCE_PREDICTED)

CATEGORY_BREAST = "breast"
CATEGORY_GI = "gastrointestinal"
CATEGORY_HEAD_NECK = "head_and_neck"
CATEGORIES = (CATEGORY_BREAST, CATEGORY_GI, CATEGORY_HEAD_NECK)


def _check_video_id(video_id: str) -> str:
    if not isinstance(video_id, str) or not video_id:
        raise ValueError(f"video_id must be a non-empty string, got {video_id!r}")
    return video_id


def _check_frame_index(frame_index) -> int:
    if not isinstance(frame_index, int) or isinstance(frame_index, bool) or frame_index < 0:
        raise ValueError(f"frame index must be a non-negative integer, got {frame_index!r}")
    return frame_index


@dataclass(frozen=True)
class Detection:
    """A scored box on one frame of one video: tracker and evaluator input."""

    video_id: str
    frame_index: int
    box: BoundingBox
    score: float

    def __post_init__(self):
        _check_video_id(self.video_id)
        _check_frame_index(self.frame_index)
        object.__setattr__(self, "score", check_unit_interval("score", self.score))


@dataclass(frozen=True)
class HandBox:
    """One annotated hand: a box plus its stored-but-unused side label."""

    box: BoundingBox
    side: str = SIDE_UNKNOWN

    def __post_init__(self):
        if self.side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}, got {self.side!r}")


@dataclass(frozen=True)
class FrameAnnotation:
    """Ground-truth hand boxes for one frame; zero boxes is a valid annotation."""

    video_id: str
    frame_index: int
    hands: tuple[HandBox, ...] = ()
    annotator_id: str = ""
    revision: int = 0

    def __post_init__(self):
        _check_video_id(self.video_id)
        _check_frame_index(self.frame_index)
        object.__setattr__(self, "hands", tuple(self.hands))
        if not isinstance(self.revision, int) or self.revision < 0:
            raise ValueError(f"revision must be a non-negative integer, got {self.revision!r}")

    def boxes(self) -> list[BoundingBox]:
        return [h.box for h in self.hands]


@dataclass(frozen=True)
class VideoManifest:
    """Source-video metadata needed for sampling plans and dataset splits."""

    video_id: str
    category: str
    duration_s: float
    native_fps: float
    resolution: tuple[int, int]

    def __post_init__(self):
        _check_video_id(self.video_id)
        if self.category not in CATEGORIES:
            raise ValueError(f"category must be one of {CATEGORIES}, got {self.category!r}")
        object.__setattr__(self, "duration_s", check_positive("duration_s", self.duration_s))
        object.__setattr__(self, "native_fps", check_positive("native_fps", self.native_fps))
        w, h = self.resolution
        if w <= 0 or h <= 0:
            raise ValueError(f"resolution must be positive, got {self.resolution!r}")
        object.__setattr__(self, "resolution", (int(w), int(h)))


@dataclass(frozen=True)
class TrackRecord:
    """One tracked box row as serialized to a tracks file."""

    video_id: str
    frame_index: int
    box: BoundingBox
    identity: int
    provenance: str

    def __post_init__(self):
        _check_video_id(self.video_id)
        _check_frame_index(self.frame_index)
        if not isinstance(self.identity, int) or self.identity < 0:
            raise ValueError(f"identity must be a non-negative integer, got {self.identity!r}")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"provenance must be one of {PROVENANCES}, got {self.provenance!r}")
