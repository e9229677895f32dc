"""Trajectory extraction, economy-of-motion metrics, and trajectory maps.

A trajectory is the time series of box epicenters for one identity. Motion
metrics summarize it per identity; the renderer draws all trajectories of a
video as one SVG document, one polyline per identity in a fixed palette.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence
from xml.sax.saxutils import escape, quoteattr

from .geometry import center
from .validation import check_positive

# Qualitative 10-color palette, cycled in identity-rank order so renders are
# deterministic for a given track file.
PALETTE = (
    "#1f77b4",
    "#ff7f0e",
    "#2ca02c",
    "#d62728",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
    "#bcbd22",
    "#17becf",
)


@dataclass(frozen=True)
class Trajectory:
    """Epicenter time series of one identity; gaps mark dormant stretches."""

    identity: int
    points: tuple[tuple[int, float, float], ...]  # (frame_index, x, y)

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(tuple(p) for p in self.points))
        frames = [p[0] for p in self.points]
        if any(b <= a for a, b in zip(frames, frames[1:])):
            raise ValueError("trajectory frame indices must strictly increase")

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class MotionEntry:
    """Economy-of-motion summary for one identity.

    Distances are in pixels and speeds in pixels per frame. A dormant gap
    (consecutive points more than one frame apart) contributes a single
    straight segment to path_length, which underestimates true motion; the
    gap count is reported so such entries can be read with care.
    """

    identity: int
    frames_observed: int
    path_length: float
    net_displacement: float
    path_efficiency: float
    mean_speed: float
    max_speed: float
    gaps: int


def extract_trajectories(tracks: Iterable) -> list[Trajectory]:
    """Group tracked boxes of one video by identity and map them to centers.

    Accepts any records with identity, frame_index, and box fields (both
    per-frame tracker output and rows read back from a tracks file).
    """
    by_identity: dict[int, list[tuple[int, float, float]]] = {}
    for t in tracks:
        x, y = center(t.box)
        by_identity.setdefault(t.identity, []).append((t.frame_index, x, y))
    out = []
    for identity in sorted(by_identity):
        points = sorted(by_identity[identity])
        frames = [p[0] for p in points]
        if len(set(frames)) != len(frames):
            raise ValueError(f"identity {identity} has duplicate frame indices")
        out.append(Trajectory(identity=identity, points=tuple(points)))
    return out


def motion_metrics(traj: Trajectory) -> MotionEntry:
    """Summarize one trajectory; raises on an empty one."""
    if len(traj) == 0:
        raise ValueError("cannot compute motion metrics for an empty trajectory")
    pts = traj.points
    path_length = 0.0
    max_speed = 0.0
    gaps = 0
    for (f0, x0, y0), (f1, x1, y1) in zip(pts, pts[1:]):
        dist = math.hypot(x1 - x0, y1 - y0)
        path_length += dist
        span = f1 - f0
        if span > 1:
            gaps += 1
        max_speed = max(max_speed, dist / span)
    net = math.hypot(pts[-1][1] - pts[0][1], pts[-1][2] - pts[0][2])
    efficiency = 1.0 if path_length == 0.0 else net / path_length
    total_span = pts[-1][0] - pts[0][0]
    mean_speed = path_length / total_span if total_span > 0 else 0.0
    return MotionEntry(
        identity=traj.identity,
        frames_observed=len(pts),
        path_length=path_length,
        net_displacement=net,
        path_efficiency=efficiency,
        mean_speed=mean_speed,
        max_speed=max_speed,
        gaps=gaps,
    )


def motion_report(trajectories: Sequence[Trajectory]) -> list[MotionEntry]:
    """Per-identity metrics, sorted by identity."""
    return [motion_metrics(t) for t in sorted(trajectories, key=lambda t: t.identity)]


def _fmt(value: float) -> str:
    return f"{value:.2f}".rstrip("0").rstrip(".")


def render_trajectory_map(
    trajectories: Sequence[Trajectory],
    frame_w: float,
    frame_h: float,
    stroke_width: float = 2.0,
    background_href: Optional[str] = None,
    legend: bool = True,
) -> str:
    """Render trajectories over the frame plane as an SVG 1.1 document.

    Each non-empty trajectory becomes exactly one polyline in a palette
    color assigned by identity rank; the optional background_href is drawn
    underneath as an image reference, and the legend maps identity to color.
    """
    check_positive("frame_w", frame_w)
    check_positive("frame_h", frame_h)
    drawn = sorted((t for t in trajectories if len(t) > 0), key=lambda t: t.identity)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(frame_w)}" height="{_fmt(frame_h)}" '
        f'viewBox="0 0 {_fmt(frame_w)} {_fmt(frame_h)}">',
    ]
    if background_href is not None:
        parts.append(
            f'<image href={quoteattr(background_href)} x="0" y="0" '
            f'width="{_fmt(frame_w)}" height="{_fmt(frame_h)}"/>'
        )
    else:
        parts.append(f'<rect x="0" y="0" width="{_fmt(frame_w)}" height="{_fmt(frame_h)}" fill="#ffffff"/>')
    for rank, traj in enumerate(drawn):
        color = PALETTE[rank % len(PALETTE)]
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for _, x, y in traj.points)
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="{_fmt(stroke_width)}" stroke-linejoin="round" stroke-linecap="round"/>'
        )
    if legend:
        for rank, traj in enumerate(drawn):
            color = PALETTE[rank % len(PALETTE)]
            y = 10 + rank * 16
            parts.append(f'<rect x="10" y="{y}" width="12" height="12" fill="{color}"/>')
            parts.append(
                f'<text x="26" y="{y + 10}" font-family="sans-serif" font-size="12">'
                f"{escape(f'hand {traj.identity}')}</text>"
            )
    parts.append("</svg>")
    return "\n".join(parts)
