"""Command-line entry points for the detection/tracking pipeline.

Subcommands: eval, smooth, track, analyze, sample-plan, split, serve.
Exit codes: 0 success, 1 usage error, 2 data error (unreadable or invalid
input files, infeasible splits, and similar).
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import io
from .analytics import extract_trajectories, motion_report, render_trajectory_map
from .datasets import (
    DEFAULT_TARGETS,
    FRAMES_PER_VIDEO,
    compute_sampling_plan,
    sampling_plan_to_obj,
    split_dataset,
)
from .evaluation import DEFAULT_IOU_MIN, average_precision, evaluate_detections, precision_recall_curve
from .smoothing import DEFAULT_LINK_IOU, DetectionSmoother
from .tracker import SortTracker

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; this CLI reserves 2 for
    # data errors, so remap to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="surgitrack", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="score detections against annotations")
    p.add_argument("--pred", required=True, help="detections file (NDJSON)")
    p.add_argument("--gt", required=True, help="annotations file (NDJSON)")
    p.add_argument("--iou", type=float, default=DEFAULT_IOU_MIN, help="match threshold")

    p = sub.add_parser("smooth", help="three-frame voting pass over detections")
    p.add_argument("--det", required=True, help="detections file (NDJSON)")
    p.add_argument("--out", required=True, help="output detections file")
    p.add_argument("--iou-link", type=float, default=DEFAULT_LINK_IOU, help="cross-frame link threshold")

    p = sub.add_parser("track", help="track detections per video")
    p.add_argument("--det", required=True, help="detections file (NDJSON)")
    p.add_argument("--out", required=True, help="output tracks file")
    p.add_argument("--smooth", action="store_true", help="apply the voting pass before tracking")
    p.add_argument("--iou-link", type=float, default=DEFAULT_LINK_IOU, help="link threshold for --smooth")
    p.add_argument("--no-reuse", action="store_true", help="delete exited tracks instead of reusing identities")
    p.add_argument("--iou", type=float, default=0.3, help="association gate")
    p.add_argument("--max-age", type=int, default=3, help="frames a track survives unmatched")
    p.add_argument("--min-hits", type=int, default=1, help="matches required before reporting")

    p = sub.add_parser("analyze", help="trajectories, motion metrics, trajectory map")
    p.add_argument("--tracks", required=True, help="tracks file (NDJSON), single video")
    p.add_argument("--out-svg", required=True, help="trajectory-map SVG path")
    p.add_argument("--out-report", required=True, help="motion-report JSON path")
    p.add_argument("--width", type=float, default=1920.0, help="frame width in px")
    p.add_argument("--height", type=float, default=1080.0, help="frame height in px")

    p = sub.add_parser("sample-plan", help="frame-sampling plan per video")
    p.add_argument("--manifest", required=True, help="manifest document (JSON)")
    p.add_argument("--video", help="restrict to one video id")

    p = sub.add_parser("split", help="stratified train/val/test video split")
    p.add_argument("--manifest", required=True, help="manifest document (JSON)")
    p.add_argument("--seed", type=int, required=True, help="shuffle seed")
    p.add_argument("--frames-per-video", type=int, default=FRAMES_PER_VIDEO)
    p.add_argument(
        "--targets", type=int, nargs=3, default=list(DEFAULT_TARGETS), metavar=("TRAIN", "VAL", "TEST"),
        help="frame-count targets",
    )

    p = sub.add_parser("serve", help="run the annotation/review HTTP service")
    p.add_argument("--data", required=True, help="data directory (manifests, frames, annotations)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _cmd_eval(args, out) -> int:
    preds = io.read_detections(args.pred)
    gts = io.read_annotations(args.gt)
    record = evaluate_detections(preds, gts, args.iou)
    ap = average_precision(record)
    print(f"AP@{args.iou:g}: {ap:.6f}", file=out)
    print(f"TP: {record.num_tp}", file=out)
    print(f"FP: {record.num_fp}", file=out)
    print(f"FN: {record.num_fn}", file=out)
    print("recall precision", file=out)
    for recall, precision in precision_recall_curve(record):
        print(f"{recall:.6f} {precision:.6f}", file=out)
    return EXIT_OK


def _cmd_smooth(args) -> int:
    dets = io.read_detections(args.det)
    smoothed = DetectionSmoother(iou_link=args.iou_link).fit_transform(dets)
    io.write_detections(args.out, smoothed)
    return EXIT_OK


def _cmd_track(args) -> int:
    dets = io.read_detections(args.det)
    if args.smooth:
        dets = DetectionSmoother(iou_link=args.iou_link).fit_transform(dets)
    tracker = SortTracker(
        iou_min=args.iou,
        max_age=args.max_age,
        min_hits=args.min_hits,
        reuse_identities=not args.no_reuse,
    )
    io.write_tracks(args.out, tracker.fit_transform(dets))
    return EXIT_OK


def _cmd_analyze(args) -> int:
    tracks = io.read_tracks(args.tracks)
    videos = sorted({t.video_id for t in tracks})
    if len(videos) != 1:
        raise ValueError(
            f"analyze expects tracks from exactly one video, found {len(videos)}: {videos[:5]}"
        )
    trajectories = extract_trajectories(tracks)
    entries = motion_report(trajectories)
    svg = render_trajectory_map(trajectories, args.width, args.height)
    with open(args.out_svg, "w", encoding="utf-8") as f:
        f.write(svg + "\n")
    io.write_report(args.out_report, videos[0], entries)
    return EXIT_OK


def _cmd_sample_plan(args, out) -> int:
    manifests = io.read_manifests(args.manifest)
    if args.video is not None:
        manifests = [m for m in manifests if m.video_id == args.video]
        if not manifests:
            raise ValueError(f"video {args.video!r} not found in manifest")
    for m in manifests:
        plan = compute_sampling_plan(m)
        print(io.canonical_json(sampling_plan_to_obj(plan)), file=out)
    return EXIT_OK


def _cmd_split(args, out) -> int:
    manifests = io.read_manifests(args.manifest)
    result = split_dataset(
        manifests,
        frames_per_video=args.frames_per_video,
        targets=tuple(args.targets),
        seed=args.seed,
    )
    print(io.canonical_json(result.to_obj()), file=out)
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.data)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "eval":
            return _cmd_eval(args, sys.stdout)
        if args.command == "smooth":
            return _cmd_smooth(args)
        if args.command == "track":
            return _cmd_track(args)
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "sample-plan":
            return _cmd_sample_plan(args, sys.stdout)
        if args.command == "split":
            return _cmd_split(args, sys.stdout)
        if args.command == "serve":
            return _cmd_serve(args)
    except (ValueError, OSError) as e:
        print(f"surgitrack {args.command}: error: {e}", file=sys.stderr)
        return EXIT_DATA
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
