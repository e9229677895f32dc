"""Wire formats: canonical NDJSON record streams and JSON documents."""

import json

import numpy as np
import pytest

from surgitrack.analytics import MotionEntry
from surgitrack.geometry import BoundingBox
from surgitrack.io import (
    FormatError,
    canonical_json,
    dumps_annotations,
    dumps_detections,
    dumps_manifests,
    dumps_report,
    dumps_tracks,
    loads_annotations,
    loads_detections,
    loads_manifests,
    loads_report,
    loads_tracks,
    read_detections,
    write_detections,
)
from surgitrack.records import (
    Detection,
    FrameAnnotation,
    HandBox,
    TrackRecord,
    VideoManifest,
)

BOX = BoundingBox(10.0, 20.0, 110.0, 90.0)


def test_detection_line_is_canonical():
    d = Detection("vid_01", 42, BOX, 0.875)
    line = dumps_detections([d])
    assert line == '{"video_id":"vid_01","frame":42,"box":[10.0,20.0,110.0,90.0],"score":0.875}\n'


def test_annotation_line_is_canonical():
    a = FrameAnnotation(
        "vid_01", 7, hands=(HandBox(BOX, "L"), HandBox(BOX, "U")), annotator_id="ann1", revision=3
    )
    line = dumps_annotations([a])
    obj = json.loads(line)
    assert list(obj) == ["video_id", "frame", "hands", "annotator", "rev"]
    assert obj["hands"][0] == {"box": [10.0, 20.0, 110.0, 90.0], "side": "L"}
    assert obj["rev"] == 3
    assert line.endswith("\n")


def test_track_line_is_canonical():
    t = TrackRecord("vid_01", 5, BOX, 2, "pred")
    line = dumps_tracks([t])
    assert line == '{"video_id":"vid_01","frame":5,"box":[10.0,20.0,110.0,90.0],"identity":2,"provenance":"pred"}\n'


def test_detection_round_trip_byte_identical(tmp_path):
    rng = np.random.default_rng(97)
    records = []
    for i in range(200):
        x1, y1 = rng.uniform(0, 500, size=2)
        w, h = rng.uniform(1, 200, size=2)
        records.append(
            Detection(
                video_id=f"v{int(rng.integers(0, 5))}",
                frame_index=int(rng.integers(0, 10_000)),
                box=BoundingBox(float(x1), float(y1), float(x1 + w), float(y1 + h)),
                score=float(rng.uniform(0, 1)),
            )
        )
    text = dumps_detections(records)
    parsed = loads_detections(text)
    assert parsed == records
    assert dumps_detections(parsed) == text
    path = tmp_path / "dets.ndjson"
    write_detections(path, records)
    assert read_detections(path) == records
    assert path.read_text(encoding="utf-8") == text


def test_annotation_round_trip():
    records = [
        FrameAnnotation("v1", 0),
        FrameAnnotation("v1", 1, hands=(HandBox(BOX, "R"),), annotator_id="a", revision=9),
    ]
    text = dumps_annotations(records)
    assert loads_annotations(text) == records
    assert dumps_annotations(loads_annotations(text)) == text


def test_track_round_trip():
    records = [
        TrackRecord("v1", 0, BOX, 0, "det"),
        TrackRecord("v1", 1, BOX, 1, "pred"),
    ]
    text = dumps_tracks(records)
    assert loads_tracks(text) == records
    assert dumps_tracks(loads_tracks(text)) == text


def test_parse_reports_line_number_for_bad_box():
    good = '{"video_id":"v","frame":0,"box":[0.0,0.0,10.0,10.0],"score":0.5}'
    bad = '{"video_id":"v","frame":1,"box":[10.0,0.0,0.0,10.0],"score":0.5}'
    with pytest.raises(FormatError) as err:
        loads_detections(good + "\n" + bad + "\n")
    assert err.value.line == 2
    assert "line 2" in str(err.value)
    assert "box" in err.value.message


def test_parse_rejects_invalid_json_with_line():
    text = '{"video_id":"v","frame":0,"box":[0.0,0.0,1.0,1.0],"score":0.5}\nnot json\n'
    with pytest.raises(FormatError) as err:
        loads_detections(text)
    assert err.value.line == 2


def test_parse_rejects_blank_line():
    with pytest.raises(FormatError) as err:
        loads_detections("\n")
    assert err.value.line == 1
    assert "blank" in err.value.message


def test_parse_rejects_out_of_range_score():
    line = '{"video_id":"v","frame":0,"box":[0.0,0.0,1.0,1.0],"score":1.5}\n'
    with pytest.raises(FormatError):
        loads_detections(line)


def test_parse_rejects_non_numeric_fields():
    line = '{"video_id":"v","frame":"0","box":[0.0,0.0,1.0,1.0],"score":0.5}\n'
    with pytest.raises(FormatError) as err:
        loads_detections(line)
    assert "frame" in err.value.message
    line = '{"video_id":"v","frame":0,"box":[0.0,"a",1.0,1.0],"score":0.5}\n'
    with pytest.raises(FormatError) as err:
        loads_detections(line)
    assert "box[1]" in err.value.message


def test_parse_missing_key_named():
    with pytest.raises(FormatError) as err:
        loads_detections('{"video_id":"v","frame":0,"box":[0.0,0.0,1.0,1.0]}\n')
    assert "score" in err.value.message


def test_unknown_key_strict_vs_lenient():
    line = '{"video_id":"v","frame":0,"box":[0.0,0.0,1.0,1.0],"score":0.5,"extra":1}\n'
    with pytest.raises(FormatError) as err:
        loads_detections(line)
    assert "extra" in err.value.message
    parsed = loads_detections(line, strict=False)
    assert len(parsed) == 1
    assert parsed[0].score == 0.5


def test_annotation_field_path_in_errors():
    line = (
        '{"video_id":"v","frame":0,"hands":[{"box":[0.0,0.0,1.0,1.0],"side":"L"},'
        '{"box":[5.0,0.0,1.0,1.0],"side":"R"}],"annotator":"a","rev":0}\n'
    )
    with pytest.raises(FormatError) as err:
        loads_annotations(line)
    assert "hands[1].box" in err.value.message
    line = '{"video_id":"v","frame":0,"hands":[{"box":[0.0,0.0,1.0,1.0],"side":"X"}],"annotator":"a","rev":0}\n'
    with pytest.raises(FormatError) as err:
        loads_annotations(line)
    assert "hands[0]" in err.value.message


def test_track_provenance_validated():
    line = '{"video_id":"v","frame":0,"box":[0.0,0.0,1.0,1.0],"identity":0,"provenance":"guess"}\n'
    with pytest.raises(FormatError):
        loads_tracks(line)


def manifest(video_id="v1", category="breast", duration=1800.0):
    return VideoManifest(video_id, category, duration, 30.0, (1920, 1080))


def test_manifest_document_round_trip():
    manifests = [manifest("a"), manifest("b", "gastrointestinal"), manifest("c", "head_and_neck")]
    text = dumps_manifests(manifests)
    assert text.endswith("\n")
    doc = json.loads(text)
    assert list(doc) == ["videos"]
    assert list(doc["videos"][0]) == ["video_id", "category", "duration_s", "native_fps", "resolution"]
    parsed = loads_manifests(text)
    assert parsed == manifests
    assert dumps_manifests(parsed) == text


def test_manifest_rejects_unknown_category():
    text = dumps_manifests([manifest()]).replace("breast", "cardiac")
    with pytest.raises(FormatError) as err:
        loads_manifests(text)
    assert "videos[0]" in err.value.message
    assert "category" in err.value.message


def test_report_document_round_trip():
    entries = [
        MotionEntry(0, 10, 35.5, 12.0, 12.0 / 35.5, 3.55, 6.0, 1),
        MotionEntry(1, 4, 0.0, 0.0, 1.0, 0.0, 0.0, 0),
    ]
    text = dumps_report("vid_03", entries)
    assert text.endswith("\n")
    doc = json.loads(text)
    assert list(doc) == ["video_id", "identities"]
    assert list(doc["identities"][0]) == [
        "identity",
        "frames_observed",
        "path_length",
        "net_displacement",
        "path_efficiency",
        "mean_speed",
        "max_speed",
        "gaps",
    ]
    video_id, parsed = loads_report(text)
    assert video_id == "vid_03"
    assert parsed == entries
    assert dumps_report(video_id, parsed) == text


def test_report_entry_errors_carry_path():
    text = dumps_report("v", [MotionEntry(0, 1, 0.0, 0.0, 1.0, 0.0, 0.0, 0)])
    broken = text.replace('"gaps":0', '"gaps":0.5')
    with pytest.raises(FormatError) as err:
        loads_report(broken)
    assert "identities[0].gaps" in err.value.message


def test_canonical_json_compact_unicode():
    assert canonical_json({"a": [1.5, 2], "b": "ü"}) == '{"a":[1.5,2],"b":"ü"}'
    with pytest.raises(ValueError):
        canonical_json({"a": float("nan")})


def test_floats_round_trip_exactly():
    # shortest-repr float encoding must survive dump/load cycles unchanged
    rng = np.random.default_rng(101)
    values = [float(v) for v in rng.uniform(0, 1, size=50)]
    records = [
        Detection("v", i, BoundingBox(0.0, 0.0, 1.0 + v, 1.0 + v), score=v)
        for i, v in enumerate(values)
    ]
    text = dumps_detections(records)
    parsed = loads_detections(text)
    for rec, v in zip(parsed, values):
        assert rec.score == v
        assert rec.box.x2 == 1.0 + v


def test_large_corpus_round_trip():
    rng = np.random.default_rng(103)
    records = []
    for i in range(10_000):
        x1 = float(rng.uniform(0, 1000))
        y1 = float(rng.uniform(0, 1000))
        records.append(
            Detection(
                video_id=f"v{int(rng.integers(0, 20)):02d}",
                frame_index=i,
                box=BoundingBox(x1, y1, x1 + float(rng.uniform(1, 100)), y1 + float(rng.uniform(1, 100))),
                score=float(rng.uniform(0, 1)),
            )
        )
    text = dumps_detections(records)
    assert loads_detections(text) == records
