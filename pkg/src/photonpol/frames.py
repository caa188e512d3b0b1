"""Gauge-dependent local reference frames attached to wavevectors.

A constant unit vector I (the gauge) fixes the transverse axes at every k:

    v = (I x k) / |I x k|,   u = v x w,   w = k / |k|.

Everything here broadcasts over leading axes, so a whole momentum grid of
shape (N, 3) is handled in one call.
"""

from dataclasses import dataclass

import numpy as np

from .algebra import wrap_angle
from .errors import SingularGauge

SINGULAR_TOL = 1e-9


def as_gauge(direction):
    """Normalize a nonzero 3-vector into a unit gauge vector."""
    direction = np.asarray(direction, dtype=float)
    if direction.shape != (3,):
        raise ValueError(f"gauge vector must have 3 components, got shape {direction.shape}")
    norm = np.linalg.norm(direction)
    if not np.isfinite(norm) or norm == 0.0:
        raise ValueError("gauge vector must be finite and nonzero")
    return direction / norm


def unit_wavevector(k):
    k = np.asarray(k, dtype=float)
    mag = np.linalg.norm(k, axis=-1)
    if np.any(mag == 0.0):
        raise ValueError("wavevector k = 0 has no direction")
    return k / mag[..., None]


@dataclass(frozen=True)
class LocalFrame:
    """Right-handed triad (u, v, w); arrays of shape (..., 3)."""

    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    gauge: np.ndarray

    @property
    def matrix(self):
        return frame_matrix(self)


def singular_mask(k, gauge, tol=SINGULAR_TOL):
    """True where |I x k| / |k| < tol."""
    w = unit_wavevector(k)
    return np.linalg.norm(np.cross(as_gauge(gauge), w), axis=-1) < tol


def local_frame(k, gauge, tol=SINGULAR_TOL):
    """Build the triad for wavevector(s) ``k`` in gauge ``gauge``.

    Raises SingularGauge (carrying the first offending flat index for batched
    input) when I is parallel or antiparallel to k within ``tol``.
    """
    gauge = as_gauge(gauge)
    w = unit_wavevector(k)
    cross = np.cross(gauge, w)
    size = np.linalg.norm(cross, axis=-1)
    bad = size < tol
    if np.any(bad):
        index = int(np.flatnonzero(bad)[0]) if bad.ndim else None
        raise SingularGauge(
            f"gauge {gauge.tolist()} is parallel to the wavevector"
            + (f" at sample {index}" if index is not None else ""),
            index=index,
        )
    v = cross / size[..., None]
    u = np.cross(v, w)
    return LocalFrame(u=u, v=v, w=w, gauge=gauge)


def frame_matrix(frame):
    """The 3x2 matrix with columns u and v, stored as complex."""
    return np.stack([frame.u, frame.v], axis=-1).astype(complex)


def transverse_projector(w):
    """I3 - w w^T, the orthogonal projector onto the plane normal to w."""
    w = np.asarray(w, dtype=float)
    if np.any(np.abs(np.linalg.norm(w, axis=-1) - 1.0) > 1e-9):
        raise ValueError("w must be a unit vector")
    return np.eye(3) - w[..., :, None] * w[..., None, :]


def frame_angle(old, new):
    """Rotation angle about w carrying ``old``'s axes onto ``new``'s.

    Both frames must share w. The result lies in (-pi, pi].
    """
    y = np.sum(new.u * old.v, axis=-1)
    x = np.sum(new.u * old.u, axis=-1)
    return wrap_angle(np.arctan2(y, x))


def gauge_angle(k, gauge_old, gauge_new, tol=SINGULAR_TOL):
    """Phi(k; I_old, I_new) with u' = R(w, Phi) u and v' = R(w, Phi) v."""
    return frame_angle(local_frame(k, gauge_old, tol), local_frame(k, gauge_new, tol))
