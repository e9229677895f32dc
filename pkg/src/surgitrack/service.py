"""HTTP service backing the annotation and review UI.

Serves video manifests, per-video sampling plans, frame images, per-frame
annotations, and track overlays. Annotation writes use optimistic
concurrency: each PUT carries the revision its client last saw, the store
accepts it only when that matches the current revision, and the stored
document gets revision + 1. Responses are the canonical wire documents.

Data directory layout:
    manifests.json                  manifest document
    frames/{video_id}/{frame}.jpg   pre-extracted frame images (.png also works)
    annotations/{video_id}.ndjson   annotation store, one record per frame
    tracks/{video_id}.ndjson        tracker output for review overlay
"""

from __future__ import annotations

import os
import threading
from dataclasses import replace
from pathlib import Path
from typing import Union

from fastapi import Body, FastAPI, HTTPException
from fastapi.responses import JSONResponse, Response

from . import io
from .datasets import compute_sampling_plan, sampling_plan_to_obj
from .records import FrameAnnotation, VideoManifest


class AnnotationStore:
    """Per-frame annotation documents persisted as one NDJSON file per video.

    All mutation goes through put(), which enforces the revision check and
    rewrites the video's file atomically. A single lock serializes writers;
    readers of the in-memory map are safe because documents are immutable.
    """

    def __init__(self, root: Path):
        self._root = root
        self._lock = threading.Lock()
        self._docs: dict[tuple[str, int], FrameAnnotation] = {}
        root.mkdir(parents=True, exist_ok=True)
        for path in sorted(root.glob("*.ndjson")):
            for ann in io.read_annotations(path):
                self._docs[(ann.video_id, ann.frame_index)] = ann

    def get(self, video_id: str, frame_index: int) -> FrameAnnotation:
        doc = self._docs.get((video_id, frame_index))
        if doc is None:
            return FrameAnnotation(video_id=video_id, frame_index=frame_index)
        return doc

    def put(self, ann: FrameAnnotation) -> FrameAnnotation:
        """Store `ann` if its revision equals the current one; returns the
        stored document (revision incremented). Raises RevisionConflict
        otherwise."""
        key = (ann.video_id, ann.frame_index)
        with self._lock:
            current = self._docs.get(key)
            current_rev = current.revision if current is not None else 0
            if ann.revision != current_rev:
                raise RevisionConflict(current_rev)
            stored = replace(ann, revision=current_rev + 1)
            self._docs[key] = stored
            self._persist(ann.video_id)
        return stored

    def _persist(self, video_id: str) -> None:
        docs = sorted(
            (doc for (vid, _), doc in self._docs.items() if vid == video_id),
            key=lambda d: d.frame_index,
        )
        path = self._root / f"{video_id}.ndjson"
        tmp = path.with_suffix(".ndjson.tmp")
        tmp.write_text(io.dumps_annotations(docs), encoding="utf-8")
        os.replace(tmp, path)


class RevisionConflict(Exception):
    def __init__(self, current_rev: int):
        self.current_rev = current_rev
        super().__init__(f"stale revision: current is {current_rev}")


def _error(status: int, message: str, **extra) -> JSONResponse:
    return JSONResponse({"error": message, **extra}, status_code=status)


def create_app(data_dir: Union[str, Path]) -> FastAPI:
    root = Path(data_dir)
    if not root.is_dir():
        raise ValueError(f"data directory {root} does not exist")
    manifest_path = root / "manifests.json"
    if not manifest_path.is_file():
        raise ValueError(f"manifest document {manifest_path} does not exist")
    manifests = io.read_manifests(manifest_path)
    by_id: dict[str, VideoManifest] = {m.video_id: m for m in manifests}
    store = AnnotationStore(root / "annotations")

    app = FastAPI(title="surgitrack annotation service")
    app.state.store = store

    def _json(text: str) -> Response:
        return Response(content=text, media_type="application/json")

    @app.get("/api/videos")
    def list_videos() -> Response:
        return _json(io.dumps_manifests(manifests))

    @app.get("/api/videos/{video_id}/frames")
    def video_frames(video_id: str) -> Response:
        manifest = by_id.get(video_id)
        if manifest is None:
            raise HTTPException(status_code=404, detail=f"unknown video {video_id!r}")
        try:
            plan = compute_sampling_plan(manifest)
        except ValueError as e:
            return _error(422, str(e))
        doc = sampling_plan_to_obj(plan)
        doc["urls"] = [
            f"/api/frames/{video_id}/{idx}" for idx in plan.sampled_frame_indices
        ]
        return _json(io.canonical_json(doc) + "\n")

    @app.get("/api/frames/{video_id}/{frame_index}")
    def frame_image(video_id: str, frame_index: int) -> Response:
        for suffix, media in ((".jpg", "image/jpeg"), (".png", "image/png")):
            path = root / "frames" / video_id / f"{frame_index}{suffix}"
            if path.is_file():
                return Response(content=path.read_bytes(), media_type=media)
        raise HTTPException(status_code=404, detail=f"no image for {video_id}/{frame_index}")

    @app.get("/api/annotations/{video_id}/{frame_index}")
    def get_annotation(video_id: str, frame_index: int) -> Response:
        doc = store.get(video_id, frame_index)
        return _json(io.canonical_json(io.annotation_to_obj(doc)) + "\n")

    @app.put("/api/annotations/{video_id}/{frame_index}")
    def put_annotation(video_id: str, frame_index: int, payload: dict = Body(...)) -> Response:
        try:
            ann = io.parse_annotation(payload)
        except io.FormatError as e:
            return _error(422, e.message)
        if ann.video_id != video_id or ann.frame_index != frame_index:
            return _error(
                422,
                f"document addresses {ann.video_id}/{ann.frame_index}, "
                f"request addresses {video_id}/{frame_index}",
            )
        try:
            stored = store.put(ann)
        except RevisionConflict as e:
            return _error(409, str(e), rev=e.current_rev)
        return _json(io.canonical_json(io.annotation_to_obj(stored)) + "\n")

    @app.get("/api/tracks/{video_id}")
    def get_tracks(video_id: str) -> Response:
        path = root / "tracks" / f"{video_id}.ndjson"
        if not path.is_file():
            raise HTTPException(status_code=404, detail=f"no tracks for {video_id!r}")
        try:
            records = io.loads_tracks(path.read_text(encoding="utf-8"))
        except io.FormatError as e:
            raise HTTPException(status_code=500, detail=f"corrupt tracks file: {e}") from None
        return Response(content=io.dumps_tracks(records), media_type="application/x-ndjson")

    return app
