"""Hand detection post-processing, tracking, and analytics for open-surgery
video: IoU-gated SORT-style tracking with FIFO identity reuse, three-frame
detection smoothing, detection evaluation (AP at IoU 0.5), frame-sampling
plans, stratified dataset splits, trajectory analytics, and the annotation
service behind the labeling UI.
"""

from .anchors import AnchorConfig, assign_anchors, generate_anchors
from .analytics import (
    MotionEntry,
    Trajectory,
    extract_trajectories,
    motion_metrics,
    motion_report,
    render_trajectory_map,
)
from .assignment import associate, hungarian
from .datasets import SamplingPlan, SplitResult, compute_sampling_plan, split_dataset
from .evaluation import (
    EvalRecord,
    average_precision,
    evaluate_detections,
    match_detections,
    precision_recall_curve,
)
from .geometry import BoundingBox, CsrBox, center, from_csr, iou, iou_matrix, to_csr
from .losses import focal_loss, focal_loss_grad, l2_box_loss
from .records import (
    Detection,
    FrameAnnotation,
    HandBox,
    TrackRecord,
    VideoManifest,
)
from .smoothing import (
    DetectionSmoother,
    FrameWindow,
    interpolate_box,
    run_smoothing,
    smooth_window,
)
from .tracker import OnlineTracker, SortTracker, TrackedBox, TrackerConfig

__version__ = "0.1.0"

__all__ = [
    "AnchorConfig",
    "BoundingBox",
    "CsrBox",
    "Detection",
    "DetectionSmoother",
    "EvalRecord",
    "FrameAnnotation",
    "FrameWindow",
    "HandBox",
    "MotionEntry",
    "OnlineTracker",
    "SamplingPlan",
    "SortTracker",
    "SplitResult",
    "TrackRecord",
    "TrackedBox",
    "TrackerConfig",
    "Trajectory",
    "VideoManifest",
    "assign_anchors",
    "associate",
    "average_precision",
    "center",
    "compute_sampling_plan",
    "evaluate_detections",
    "extract_trajectories",
    "focal_loss",
    "focal_loss_grad",
    "from_csr",
    "generate_anchors",
    "hungarian",
    "interpolate_box",
    "iou",
    "iou_matrix",
    "l2_box_loss",
    "match_detections",
    "motion_metrics",
    "motion_report",
    "precision_recall_curve",
    "render_trajectory_map",
    "run_smoothing",
    "smooth_window",
    "split_dataset",
    "to_csr",
    "__version__",
]
