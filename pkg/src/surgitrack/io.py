"""File formats: NDJSON record streams and single-document JSON.

Detections, annotations, and tracks are line-delimited JSON, one record per
line; manifests and motion reports are single JSON documents. Serialization
is canonical: keys in a fixed order per record kind, compact separators,
coordinates and scores always encoded as floats with their shortest
round-tripping representation. Readers validate every record and raise
FormatError naming the offending line (or field path for documents).
"""

from __future__ import annotations

import json
import math
import os
from typing import Iterable, Optional, Sequence, Union

from .analytics import MotionEntry
from .geometry import BoundingBox
from .records import (
    CATEGORIES,
    Detection,
    FrameAnnotation,
    HandBox,
    TrackRecord,
    VideoManifest,
)

PathLike = Union[str, os.PathLike]


class FormatError(ValueError):
    """A document violated the wire format; message carries the location."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.message = message
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def canonical_json(obj) -> str:
    """Compact JSON with insertion-order keys; the on-disk and wire form."""
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False, allow_nan=False)


_dumps = canonical_json


def _as_str(value, where: str) -> str:
    if not isinstance(value, str) or not value:
        raise FormatError(f"{where} must be a non-empty string, got {value!r}")
    return value


def _as_int(value, where: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise FormatError(f"{where} must be an integer, got {value!r}")
    return value


def _as_float(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FormatError(f"{where} must be a number, got {value!r}")
    out = float(value)
    if not math.isfinite(out):
        raise FormatError(f"{where} must be finite, got {value!r}")
    return out


def _as_box(value, where: str) -> BoundingBox:
    if not isinstance(value, (list, tuple)) or len(value) != 4:
        raise FormatError(f"{where} must be a 4-element [x1,y1,x2,y2] array, got {value!r}")
    coords = [_as_float(v, f"{where}[{i}]") for i, v in enumerate(value)]
    try:
        return BoundingBox(*coords)
    except ValueError as e:
        raise FormatError(f"{where}: {e}") from None


def _check_keys(obj, where: str, required: Sequence[str], strict: bool) -> None:
    if not isinstance(obj, dict):
        raise FormatError(f"{where} must be a JSON object, got {type(obj).__name__}")
    for key in required:
        if key not in obj:
            raise FormatError(f"{where} is missing required key {key!r}")
    if strict:
        unknown = sorted(set(obj) - set(required))
        if unknown:
            raise FormatError(f"{where} has unknown keys {unknown}")


def _box_list(box: BoundingBox) -> list[float]:
    return [float(box.x1), float(box.y1), float(box.x2), float(box.y2)]


# ---------------------------------------------------------------------------
# detections: {"video_id","frame","box","score"}

def detection_to_obj(d: Detection) -> dict:
    return {
        "video_id": d.video_id,
        "frame": d.frame_index,
        "box": _box_list(d.box),
        "score": float(d.score),
    }


def parse_detection(obj, strict: bool = True) -> Detection:
    _check_keys(obj, "detection record", ("video_id", "frame", "box", "score"), strict)
    try:
        return Detection(
            video_id=_as_str(obj["video_id"], "video_id"),
            frame_index=_as_int(obj["frame"], "frame"),
            box=_as_box(obj["box"], "box"),
            score=_as_float(obj["score"], "score"),
        )
    except FormatError:
        raise
    except ValueError as e:
        raise FormatError(str(e)) from None


# ---------------------------------------------------------------------------
# annotations: detections base keys plus hands/annotator/rev

def annotation_to_obj(a: FrameAnnotation) -> dict:
    return {
        "video_id": a.video_id,
        "frame": a.frame_index,
        "hands": [{"box": _box_list(h.box), "side": h.side} for h in a.hands],
        "annotator": a.annotator_id,
        "rev": a.revision,
    }


def parse_annotation(obj, strict: bool = True) -> FrameAnnotation:
    _check_keys(obj, "annotation record", ("video_id", "frame", "hands", "annotator", "rev"), strict)
    hands_obj = obj["hands"]
    if not isinstance(hands_obj, list):
        raise FormatError(f"hands must be an array, got {hands_obj!r}")
    hands = []
    for i, h in enumerate(hands_obj):
        _check_keys(h, f"hands[{i}]", ("box", "side"), strict)
        side = h["side"]
        try:
            hands.append(HandBox(box=_as_box(h["box"], f"hands[{i}].box"), side=side))
        except FormatError:
            raise
        except ValueError as e:
            raise FormatError(f"hands[{i}]: {e}") from None
    annotator = obj["annotator"]
    if not isinstance(annotator, str):
        raise FormatError(f"annotator must be a string, got {annotator!r}")
    rev = _as_int(obj["rev"], "rev")
    try:
        return FrameAnnotation(
            video_id=_as_str(obj["video_id"], "video_id"),
            frame_index=_as_int(obj["frame"], "frame"),
            hands=tuple(hands),
            annotator_id=annotator,
            revision=rev,
        )
    except ValueError as e:
        raise FormatError(str(e)) from None


# ---------------------------------------------------------------------------
# tracks: detections base keys (sans score) plus identity/provenance

def track_to_obj(t: TrackRecord) -> dict:
    return {
        "video_id": t.video_id,
        "frame": t.frame_index,
        "box": _box_list(t.box),
        "identity": t.identity,
        "provenance": t.provenance,
    }


def parse_track(obj, strict: bool = True) -> TrackRecord:
    _check_keys(obj, "track record", ("video_id", "frame", "box", "identity", "provenance"), strict)
    try:
        return TrackRecord(
            video_id=_as_str(obj["video_id"], "video_id"),
            frame_index=_as_int(obj["frame"], "frame"),
            box=_as_box(obj["box"], "box"),
            identity=_as_int(obj["identity"], "identity"),
            provenance=obj["provenance"],
        )
    except FormatError:
        raise
    except ValueError as e:
        raise FormatError(str(e)) from None


# ---------------------------------------------------------------------------
# NDJSON plumbing shared by the three record kinds

def _dumps_lines(records, to_obj) -> str:
    return "".join(_dumps(to_obj(r)) + "\n" for r in records)


def _parse_lines(text: str, parse, strict: bool) -> list:
    out = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            raise FormatError("blank line in record stream", line=line_no)
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise FormatError(f"invalid JSON: {e.msg}", line=line_no) from None
        try:
            out.append(parse(obj, strict=strict))
        except FormatError as e:
            raise FormatError(e.message, line=line_no) from None
    return out


def dumps_detections(records: Iterable[Detection]) -> str:
    return _dumps_lines(records, detection_to_obj)


def loads_detections(text: str, strict: bool = True) -> list[Detection]:
    return _parse_lines(text, parse_detection, strict)


def dumps_annotations(records: Iterable[FrameAnnotation]) -> str:
    return _dumps_lines(records, annotation_to_obj)


def loads_annotations(text: str, strict: bool = True) -> list[FrameAnnotation]:
    return _parse_lines(text, parse_annotation, strict)


def dumps_tracks(records: Iterable[TrackRecord]) -> str:
    return _dumps_lines(records, track_to_obj)


def loads_tracks(text: str, strict: bool = True) -> list[TrackRecord]:
    return _parse_lines(text, parse_track, strict)


def read_detections(path: PathLike, strict: bool = True) -> list[Detection]:
    with open(path, "r", encoding="utf-8") as f:
        return loads_detections(f.read(), strict=strict)


def write_detections(path: PathLike, records: Iterable[Detection]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_detections(records))


def read_annotations(path: PathLike, strict: bool = True) -> list[FrameAnnotation]:
    with open(path, "r", encoding="utf-8") as f:
        return loads_annotations(f.read(), strict=strict)


def write_annotations(path: PathLike, records: Iterable[FrameAnnotation]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_annotations(records))


def read_tracks(path: PathLike, strict: bool = True) -> list[TrackRecord]:
    with open(path, "r", encoding="utf-8") as f:
        return loads_tracks(f.read(), strict=strict)


def write_tracks(path: PathLike, records: Iterable[TrackRecord]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_tracks(records))


# ---------------------------------------------------------------------------
# manifests: one JSON document {"videos": [...]}

def manifest_to_obj(m: VideoManifest) -> dict:
    return {
        "video_id": m.video_id,
        "category": m.category,
        "duration_s": float(m.duration_s),
        "native_fps": float(m.native_fps),
        "resolution": [m.resolution[0], m.resolution[1]],
    }


def parse_manifest(obj, where: str = "manifest", strict: bool = True) -> VideoManifest:
    _check_keys(obj, where, ("video_id", "category", "duration_s", "native_fps", "resolution"), strict)
    category = obj["category"]
    if category not in CATEGORIES:
        raise FormatError(f"{where}.category must be one of {CATEGORIES}, got {category!r}")
    res = obj["resolution"]
    if not isinstance(res, (list, tuple)) or len(res) != 2:
        raise FormatError(f"{where}.resolution must be a [w,h] pair, got {res!r}")
    try:
        return VideoManifest(
            video_id=_as_str(obj["video_id"], f"{where}.video_id"),
            category=category,
            duration_s=_as_float(obj["duration_s"], f"{where}.duration_s"),
            native_fps=_as_float(obj["native_fps"], f"{where}.native_fps"),
            resolution=(_as_int(res[0], f"{where}.resolution[0]"), _as_int(res[1], f"{where}.resolution[1]")),
        )
    except FormatError:
        raise
    except ValueError as e:
        raise FormatError(f"{where}: {e}") from None


def dumps_manifests(manifests: Iterable[VideoManifest]) -> str:
    return _dumps({"videos": [manifest_to_obj(m) for m in manifests]}) + "\n"


def loads_manifests(text: str, strict: bool = True) -> list[VideoManifest]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e.msg}", line=e.lineno) from None
    _check_keys(doc, "manifest document", ("videos",), strict)
    videos = doc["videos"]
    if not isinstance(videos, list):
        raise FormatError(f"videos must be an array, got {videos!r}")
    return [parse_manifest(v, where=f"videos[{i}]", strict=strict) for i, v in enumerate(videos)]


def read_manifests(path: PathLike, strict: bool = True) -> list[VideoManifest]:
    with open(path, "r", encoding="utf-8") as f:
        return loads_manifests(f.read(), strict=strict)


def write_manifests(path: PathLike, manifests: Iterable[VideoManifest]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_manifests(manifests))


# ---------------------------------------------------------------------------
# motion reports: one JSON document {"video_id": ..., "identities": [...]}

_REPORT_ENTRY_KEYS = (
    "identity",
    "frames_observed",
    "path_length",
    "net_displacement",
    "path_efficiency",
    "mean_speed",
    "max_speed",
    "gaps",
)


def report_entry_to_obj(e: MotionEntry) -> dict:
    return {
        "identity": e.identity,
        "frames_observed": e.frames_observed,
        "path_length": float(e.path_length),
        "net_displacement": float(e.net_displacement),
        "path_efficiency": float(e.path_efficiency),
        "mean_speed": float(e.mean_speed),
        "max_speed": float(e.max_speed),
        "gaps": e.gaps,
    }


def parse_report_entry(obj, where: str, strict: bool = True) -> MotionEntry:
    _check_keys(obj, where, _REPORT_ENTRY_KEYS, strict)
    return MotionEntry(
        identity=_as_int(obj["identity"], f"{where}.identity"),
        frames_observed=_as_int(obj["frames_observed"], f"{where}.frames_observed"),
        path_length=_as_float(obj["path_length"], f"{where}.path_length"),
        net_displacement=_as_float(obj["net_displacement"], f"{where}.net_displacement"),
        path_efficiency=_as_float(obj["path_efficiency"], f"{where}.path_efficiency"),
        mean_speed=_as_float(obj["mean_speed"], f"{where}.mean_speed"),
        max_speed=_as_float(obj["max_speed"], f"{where}.max_speed"),
        gaps=_as_int(obj["gaps"], f"{where}.gaps"),
    )


def dumps_report(video_id: str, entries: Iterable[MotionEntry]) -> str:
    doc = {"video_id": video_id, "identities": [report_entry_to_obj(e) for e in entries]}
    return _dumps(doc) + "\n"


def loads_report(text: str, strict: bool = True) -> tuple[str, list[MotionEntry]]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e.msg}", line=e.lineno) from None
    _check_keys(doc, "report document", ("video_id", "identities"), strict)
    entries_obj = doc["identities"]
    if not isinstance(entries_obj, list):
        raise FormatError(f"identities must be an array, got {entries_obj!r}")
    entries = [
        parse_report_entry(e, where=f"identities[{i}]", strict=strict)
        for i, e in enumerate(entries_obj)
    ]
    return _as_str(doc["video_id"], "video_id"), entries


def read_report(path: PathLike, strict: bool = True) -> tuple[str, list[MotionEntry]]:
    with open(path, "r", encoding="utf-8") as f:
        return loads_report(f.read(), strict=strict)


def write_report(path: PathLike, video_id: str, entries: Iterable[MotionEntry]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_report(video_id, entries))
