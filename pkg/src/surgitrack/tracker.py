"""Online multi-hand tracker: Kalman prediction, IoU/Hungarian association,
and lifespan management with first-out-first-in identity reuse.

Hands repeatedly leave and re-enter the surgical field, so instead of
deleting a track after a sustained run of missed frames and minting a fresh
identity on re-entry, the tracker parks the identity in a FIFO queue and
re-seeds the oldest parked identity from the next unmatched detection. With
reuse enabled, the number of identities ever minted equals the peak number
of simultaneously live tracks.

An OnlineTracker instance is strictly single-sequence: calls to step() must
be externally serialized and frame indices must strictly increase.
Independent instances for different videos can run in parallel.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

from sklearn.base import BaseEstimator

from . import kalman
from .assignment import associate
from .geometry import BoundingBox, from_csr, to_csr
from .kalman import TrackState, TrackStatus, kf_init, kf_predict, kf_update
from .records import PROVENANCE_DETECTED, PROVENANCE_PREDICTED, Detection, TrackRecord


@dataclass(frozen=True)
class TrackerConfig:
    """Tracker knobs; defaults are tuned for 15 fps surgical video."""

    iou_min: float = 0.3  # association gate
    max_age: int = 3  # frames a track survives unmatched (0.2 s at 15 fps)
    min_hits: int = 1  # consecutive matches before a track is reported
    reuse_identities: bool = True  # FIFO reuse vs. baseline delete-on-exit
    initial_covariance_diag: tuple = kalman.INITIAL_COVARIANCE_DIAG
    process_noise_diag: tuple = kalman.PROCESS_NOISE_DIAG
    measurement_noise_diag: tuple = kalman.MEASUREMENT_NOISE_DIAG
    scale_floor: float = kalman.SCALE_FLOOR

    def __post_init__(self):
        if not 0.0 < self.iou_min < 1.0:
            raise ValueError(f"iou_min must be in (0, 1), got {self.iou_min!r}")
        if self.max_age < 1:
            raise ValueError(f"max_age must be >= 1, got {self.max_age!r}")
        if self.min_hits < 1:
            raise ValueError(f"min_hits must be >= 1, got {self.min_hits!r}")
        object.__setattr__(self, "initial_covariance_diag", tuple(self.initial_covariance_diag))
        object.__setattr__(self, "process_noise_diag", tuple(self.process_noise_diag))
        object.__setattr__(self, "measurement_noise_diag", tuple(self.measurement_noise_diag))


@dataclass(frozen=True)
class TrackedBox:
    """Tracker output for one frame: a box attributed to an active identity."""

    frame_index: int
    identity: int
    box: BoundingBox
    provenance: str  # "det" (matched detection) or "pred" (coasting)


class OnlineTracker:
    """Stateful per-video tracker; feed frames in strictly increasing order."""

    def __init__(self, config: Optional[TrackerConfig] = None):
        self.config = config if config is not None else TrackerConfig()
        self._tracks: list[TrackState] = []  # live tracks in creation order
        self._dormant: deque[int] = deque()  # parked identities, oldest first
        self._next_identity = 0
        self._last_frame: Optional[int] = None
        self._peak_concurrent = 0

    @property
    def identities_minted(self) -> int:
        return self._next_identity

    @property
    def peak_concurrent_tracks(self) -> int:
        return self._peak_concurrent

    @property
    def dormant_identities(self) -> tuple[int, ...]:
        return tuple(self._dormant)

    def _acquire_identity(self) -> int:
        if self.config.reuse_identities and self._dormant:
            return self._dormant.popleft()
        identity = self._next_identity
        self._next_identity += 1
        return identity

    def _promote(self, state: TrackState) -> TrackState:
        if state.status is TrackStatus.TENTATIVE and state.hits >= self.config.min_hits:
            return replace(state, status=TrackStatus.ACTIVE)
        return state

    def step(self, frame_index: int, detections: Sequence[BoundingBox]) -> list[TrackedBox]:
        """Advance one frame and return the boxes of reportable tracks.

        Matched active tracks report their filtered box with provenance
        "det"; active tracks missing for at most max_age frames report the
        Kalman prediction with provenance "pred". A track unmatched for more
        than max_age frames goes dormant (identity queued for reuse) or is
        deleted when reuse is disabled.
        """
        cfg = self.config
        if self._last_frame is not None and frame_index <= self._last_frame:
            raise ValueError(
                f"frame indices must strictly increase: got {frame_index} after {self._last_frame}"
            )
        self._last_frame = frame_index
        for i, box in enumerate(detections):
            if box.width <= 0 or box.height <= 0:
                raise ValueError(
                    f"detection {i} on frame {frame_index} is degenerate: {box.as_tuple()}"
                )

        # (1) propagate every live track one frame ahead
        predicted: list[TrackState] = []
        predicted_boxes: list[BoundingBox] = []
        for state in self._tracks:
            z, prior = kf_predict(state, cfg.process_noise_diag, cfg.scale_floor)
            predicted.append(prior)
            predicted_boxes.append(from_csr(z))

        # (2) associate predictions with detections
        by_identity = {state.identity: i for i, state in enumerate(predicted)}
        matches, unmatched_tracks, unmatched_dets = associate(
            [(state.identity, box) for state, box in zip(predicted, predicted_boxes)],
            list(detections),
            cfg.iou_min,
        )

        # (3) lifespan management
        outputs: list[TrackedBox] = []
        survivors: list[TrackState] = [None] * len(predicted)  # type: ignore[list-item]
        for identity, det_idx in matches:
            idx = by_identity[identity]
            state = kf_update(predicted[idx], to_csr(detections[det_idx]), cfg.measurement_noise_diag)
            state = self._promote(state)
            survivors[idx] = state
            if state.status is TrackStatus.ACTIVE:
                outputs.append(
                    TrackedBox(frame_index, identity, from_csr(state.measurement()), PROVENANCE_DETECTED)
                )
        for identity in unmatched_tracks:
            idx = by_identity[identity]
            state = replace(predicted[idx], hits=0, misses=predicted[idx].misses + 1)
            if state.misses > cfg.max_age:
                if cfg.reuse_identities:
                    self._dormant.append(identity)
                continue  # dropped from the live list either way
            survivors[idx] = state
            if state.status is TrackStatus.ACTIVE:
                outputs.append(
                    TrackedBox(frame_index, identity, predicted_boxes[idx], PROVENANCE_PREDICTED)
                )
        self._tracks = [state for state in survivors if state is not None]

        # (4) seed tracks for unclaimed detections, reusing parked identities
        for det_idx in unmatched_dets:
            identity = self._acquire_identity()
            state = kf_init(to_csr(detections[det_idx]), identity, cfg.initial_covariance_diag)
            state = self._promote(state)
            self._tracks.append(state)
            if state.status is TrackStatus.ACTIVE:
                outputs.append(
                    TrackedBox(frame_index, identity, from_csr(state.measurement()), PROVENANCE_DETECTED)
                )

        self._peak_concurrent = max(self._peak_concurrent, len(self._tracks))
        outputs.sort(key=lambda t: t.identity)
        return outputs


class SortTracker(BaseEstimator):
    """Batch front-end over OnlineTracker with the estimator API.

    transform() consumes Detection records (any ordering), tracks each video
    independently, and returns TrackRecord rows sorted by (video, frame,
    identity). Identities are per-video. Frames between the first and last
    detection of a video that carry no detections are fed to the tracker as
    empty frames, so dropouts age tracks correctly.
    """

    def __init__(
        self,
        iou_min: float = 0.3,
        max_age: int = 3,
        min_hits: int = 1,
        reuse_identities: bool = True,
        initial_covariance_diag: tuple = kalman.INITIAL_COVARIANCE_DIAG,
        process_noise_diag: tuple = kalman.PROCESS_NOISE_DIAG,
        measurement_noise_diag: tuple = kalman.MEASUREMENT_NOISE_DIAG,
        scale_floor: float = kalman.SCALE_FLOOR,
    ):
        self.iou_min = iou_min
        self.max_age = max_age
        self.min_hits = min_hits
        self.reuse_identities = reuse_identities
        self.initial_covariance_diag = initial_covariance_diag
        self.process_noise_diag = process_noise_diag
        self.measurement_noise_diag = measurement_noise_diag
        self.scale_floor = scale_floor

    def _config(self) -> TrackerConfig:
        return TrackerConfig(
            iou_min=self.iou_min,
            max_age=self.max_age,
            min_hits=self.min_hits,
            reuse_identities=self.reuse_identities,
            initial_covariance_diag=self.initial_covariance_diag,
            process_noise_diag=self.process_noise_diag,
            measurement_noise_diag=self.measurement_noise_diag,
            scale_floor=self.scale_floor,
        )

    def fit(self, X=None, y=None):
        """No-op beyond parameter validation; tracking is configuration-only."""
        self._config()
        return self

    def transform(self, X: Iterable[Detection]) -> list[TrackRecord]:
        config = self._config()
        per_video: dict[str, dict[int, list[BoundingBox]]] = {}
        for det in X:
            per_video.setdefault(det.video_id, {}).setdefault(det.frame_index, []).append(det.box)
        records: list[TrackRecord] = []
        for video_id in sorted(per_video):
            frames = per_video[video_id]
            tracker = OnlineTracker(config)
            for frame_index in range(min(frames), max(frames) + 1):
                for tracked in tracker.step(frame_index, frames.get(frame_index, [])):
                    records.append(
                        TrackRecord(
                            video_id=video_id,
                            frame_index=tracked.frame_index,
                            box=tracked.box,
                            identity=tracked.identity,
                            provenance=tracked.provenance,
                        )
                    )
        return records

    def fit_transform(self, X: Iterable[Detection], y=None) -> list[TrackRecord]:
        return self.fit(X, y).transform(X)
