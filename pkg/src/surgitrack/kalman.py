"""Constant-velocity Kalman filter over box center, area, and aspect ratio.

State vector: [u, v, s, r, du, dv, ds]: center (px), area (px^2), aspect
ratio, and per-frame velocities of u, v, s. The aspect ratio carries no
velocity and is modeled constant. Measurements are CsrBox values [u, v, s, r].

kf_init / kf_predict / kf_update are pure: they return new TrackState values
and never mutate their inputs. The covariance is checked symmetric positive
semidefinite (to 1e-9) after every predict and update.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .geometry import CsrBox

STATE_DIM = 7
MEAS_DIM = 4

# Reference-style magnitudes: moderate position/scale uncertainty, tiny ratio
# uncertainty, and very uncertain initial velocities (no motion evidence).
INITIAL_COVARIANCE_DIAG = (10.0, 10.0, 100.0, 0.01, 1e4, 1e4, 1e4)
PROCESS_NOISE_DIAG = (1.0, 1.0, 1.0, 1e-4, 0.01, 0.01, 1e-4)
MEASUREMENT_NOISE_DIAG = (1.0, 1.0, 10.0, 0.01)

# Predicted area is floored here so a sustained negative area velocity can
# never produce a non-physical box.
SCALE_FLOOR = 1.0

_PSD_TOL = 1e-9

# Transition: constant velocity on u, v, s; r constant.
_F = np.eye(STATE_DIM)
_F[0, 4] = _F[1, 5] = _F[2, 6] = 1.0
# Measurement picks out [u, v, s, r].
_H = np.zeros((MEAS_DIM, STATE_DIM))
_H[0, 0] = _H[1, 1] = _H[2, 2] = _H[3, 3] = 1.0


class TrackStatus(enum.Enum):
    TENTATIVE = "tentative"
    ACTIVE = "active"
    DORMANT = "dormant"


@dataclass(frozen=True)
class TrackState:
    """Kalman state plus identity and lifecycle bookkeeping for one track."""

    mean: np.ndarray  # shape (7,)
    covariance: np.ndarray  # shape (7, 7)
    identity: int
    hits: int = 1  # consecutive matched frames
    misses: int = 0  # consecutive unmatched frames
    status: TrackStatus = TrackStatus.TENTATIVE

    def measurement(self) -> CsrBox:
        u, v, s, r = self.mean[:MEAS_DIM]
        return CsrBox(float(u), float(v), float(s), float(r))


def _check_covariance(p: np.ndarray) -> np.ndarray:
    if not np.allclose(p, p.T, atol=_PSD_TOL):
        raise ValueError("covariance lost symmetry")
    p = (p + p.T) / 2.0
    if float(np.linalg.eigvalsh(p)[0]) < -_PSD_TOL:
        raise ValueError("covariance lost positive semidefiniteness")
    return p


def _diag(values, size: int, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.shape != (size,):
        raise ValueError(f"{name} must have {size} diagonal entries, got shape {arr.shape}")
    if (arr < 0).any():
        raise ValueError(f"{name} entries must be >= 0")
    return np.diag(arr)


def kf_init(
    measurement: CsrBox,
    identity: int,
    initial_covariance_diag=INITIAL_COVARIANCE_DIAG,
) -> TrackState:
    """Start a track from a measurement with zero velocities."""
    if measurement.s <= 0:
        raise ValueError(f"degenerate measurement (area {measurement.s}) cannot seed a track")
    mean = np.zeros(STATE_DIM)
    mean[:MEAS_DIM] = measurement.as_array()
    covariance = _diag(initial_covariance_diag, STATE_DIM, "initial_covariance_diag")
    return TrackState(mean=mean, covariance=covariance, identity=identity)


def kf_predict(
    state: TrackState,
    process_noise_diag=PROCESS_NOISE_DIAG,
    scale_floor: float = SCALE_FLOOR,
) -> tuple[CsrBox, TrackState]:
    """Propagate one frame ahead; returns the predicted measurement and the
    propagated state."""
    if state.status is TrackStatus.DORMANT:
        raise ValueError("dormant tracks have no Kalman state to predict")
    mean = _F @ state.mean
    mean[2] = max(mean[2], scale_floor)
    q = _diag(process_noise_diag, STATE_DIM, "process_noise_diag")
    covariance = _check_covariance(_F @ state.covariance @ _F.T + q)
    predicted = TrackState(
        mean=mean,
        covariance=covariance,
        identity=state.identity,
        hits=state.hits,
        misses=state.misses,
        status=state.status,
    )
    return predicted.measurement(), predicted


def kf_update(
    state: TrackState,
    z: CsrBox,
    measurement_noise_diag=MEASUREMENT_NOISE_DIAG,
) -> TrackState:
    """Correct the state against a measurement; hits += 1, misses reset."""
    if state.status is TrackStatus.DORMANT:
        raise ValueError("dormant tracks have no Kalman state to update")
    r = _diag(measurement_noise_diag, MEAS_DIM, "measurement_noise_diag")
    p = state.covariance
    innovation = z.as_array() - _H @ state.mean
    s = _H @ p @ _H.T + r
    try:
        gain = np.linalg.solve(s, _H @ p).T
    except np.linalg.LinAlgError as exc:
        raise ValueError("singular innovation covariance") from exc
    mean = state.mean + gain @ innovation
    # Joseph form keeps the posterior covariance symmetric PSD under rounding.
    ikh = np.eye(STATE_DIM) - gain @ _H
    covariance = _check_covariance(ikh @ p @ ikh.T + gain @ r @ gain.T)
    return replace(
        state,
        mean=mean,
        covariance=covariance,
        hits=state.hits + 1,
        misses=0,
    )
