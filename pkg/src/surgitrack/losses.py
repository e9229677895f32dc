"""Classification and box-regression losses used on the detection side.

The classification loss is the focal form: cross-entropy scaled by a
(1 - p_t)^gamma modulating factor that down-weights easy examples, with
p_t = p for the positive class and 1 - p otherwise. No alpha-balancing
term is applied. Box regression uses a plain L2 loss over the four corner
coordinates.
"""

from __future__ import annotations

import math

from .geometry import BoundingBox
from .validation import check_non_negative, check_unit_interval

# Keeps log(p_t) finite when p_t underflows to 0; the value 1 side needs no
# guard because log(1) = 0 exactly.
_LOG_EPS = 1e-12

_VALID_CLASSES = (-1, 1)


def _p_t(p: float, y: int) -> float:
    if y not in _VALID_CLASSES:
        raise ValueError(f"ground-truth class y must be -1 or +1, got {y!r}")
    return p if y == 1 else 1.0 - p


def focal_loss(p: float, y: int, gamma: float = 2.0) -> float:
    """Focal loss -(1 - p_t)^gamma * log(p_t) for one prediction.

    Args:
        p: estimated probability of the positive class, in [0, 1].
        y: ground-truth class, -1 or +1.
        gamma: focusing parameter, >= 0. gamma = 0 recovers cross-entropy.

    Returns:
        Nonnegative loss; exactly 0 iff p_t = 1.
    """
    p = check_unit_interval("p", p)
    gamma = check_non_negative("gamma", gamma)
    pt = _p_t(p, y)
    return -((1.0 - pt) ** gamma) * math.log(max(pt, _LOG_EPS))


def focal_loss_grad(p: float, y: int, gamma: float = 2.0) -> float:
    """Analytic d(focal_loss)/dp for p strictly inside (0, 1).

    The derivative is unbounded at the endpoints, so p in {0, 1} is refused
    rather than clamped (a silently clamped gradient would corrupt
    finite-difference checks).
    """
    p = check_unit_interval("p", p)
    gamma = check_non_negative("gamma", gamma)
    if p in (0.0, 1.0):
        raise ValueError(f"gradient undefined at p = {p}")
    pt = _p_t(p, y)
    # d/dp_t of -(1-p_t)^g * log(p_t); the modulating term vanishes for g = 0
    # and must be skipped to avoid 0 * inf at p_t -> 1.
    if gamma == 0.0:
        grad_pt = -1.0 / pt
    else:
        grad_pt = gamma * (1.0 - pt) ** (gamma - 1.0) * math.log(pt) - (1.0 - pt) ** gamma / pt
    return grad_pt if y == 1 else -grad_pt


def l2_box_loss(pred: BoundingBox, target: BoundingBox) -> float:
    """Sum of squared differences over the four corner coordinates."""
    return (
        (pred.x1 - target.x1) ** 2
        + (pred.y1 - target.y1) ** 2
        + (pred.x2 - target.x2) ** 2
        + (pred.y2 - target.y2) ** 2
    )
