"""Single-mode polarization algebra: Jones vectors, Stokes parameters and
gauge rotations for one plane wave.

Jones vectors are complex arrays of shape (..., 2); electric unit vectors are
complex arrays of shape (..., 3); frames come from :mod:`photonpol.frames`.
"""

from dataclasses import dataclass, field

import numpy as np

from .algebra import PAULI, rot_jones, rot_so3
from .errors import TransversalityViolation
from .frames import LocalFrame, frame_matrix, local_frame

TRANSVERSE_TOL = 1e-8

# local_frame(e_z, -e_x) gives u = e_x, v = e_y, w = e_z
LAB_GAUGE = np.array([-1.0, 0.0, 0.0])


def lab_frame():
    """The (e_x, e_y, e_z) frame of a wave travelling along +z."""
    return local_frame(np.array([0.0, 0.0, 1.0]), LAB_GAUGE)


def rotated_frame(frame, angle):
    """Transverse axes turned by ``angle`` about w.

    u' = u cos(angle) + v sin(angle),  v' = -u sin(angle) + v cos(angle).
    The gauge attribute of the result is left as the original one since a
    rotated frame is generally not produced by any single constant I.
    """
    c = np.cos(angle)[..., None] if np.ndim(angle) else np.cos(angle)
    s = np.sin(angle)[..., None] if np.ndim(angle) else np.sin(angle)
    return LocalFrame(
        u=frame.u * c + frame.v * s,
        v=-frame.u * s + frame.v * c,
        w=frame.w,
        gauge=frame.gauge,
    )


def _frame_w(varpi):
    return np.cross(varpi[..., :, 0].real, varpi[..., :, 1].real)


def jones_from_evector(a, varpi):
    """Jones vector a~ = varpi^dagger a.

    Raises TransversalityViolation if a has a component along w exceeding
    1e-8 (relative to |a|), since that part would be silently discarded.
    """
    a = np.asarray(a, dtype=complex)
    varpi = np.asarray(varpi, dtype=complex)
    w = _frame_w(varpi)
    along = np.abs(np.einsum("...i,...i->...", a, w))
    scale = np.maximum(np.linalg.norm(a, axis=-1), 1.0)
    if np.any(along > TRANSVERSE_TOL * scale):
        raise TransversalityViolation(
            f"vector has longitudinal component {float(np.max(along)):.3g}"
        )
    return np.einsum("...ij,...i->...j", varpi.conj(), a)


def evector_from_jones(jones, varpi):
    """a = varpi a~; transverse to w by construction."""
    return np.einsum("...ij,...j->...i", np.asarray(varpi, dtype=complex),
                     np.asarray(jones, dtype=complex))


def stokes(jones):
    """(s1, s2, s3) with s_i = a~^dagger sigma_i a~, shape (..., 3).

    For a non-unit Jones vector every component carries the intensity
    |a1|^2 + |a2|^2 as a common factor.
    """
    jones = np.asarray(jones, dtype=complex)
    a1, a2 = jones[..., 0], jones[..., 1]
    cross = a1.conj() * a2
    return np.stack(
        [np.abs(a1) ** 2 - np.abs(a2) ** 2, 2.0 * cross.real, 2.0 * cross.imag],
        axis=-1,
    )


def stokes_by_pauli(jones):
    """Same quantity as :func:`stokes` but by literal sandwich products."""
    jones = np.asarray(jones, dtype=complex)
    return np.einsum("...a,iab,...b->...i", jones.conj(), PAULI, jones).real


def polarization_vector(jones, frame):
    """Lab-frame vector s = s1 u + s2 v + s3 w."""
    s = stokes(jones)
    return s[..., 0:1] * frame.u + s[..., 1:2] * frame.v + s[..., 2:3] * frame.w


def gauge_rotate_jones(jones, angle):
    """Jones vector of the same field in axes turned by ``angle``: exp(i sigma3 angle) a~."""
    return np.einsum("...ij,...j->...i", rot_jones(angle, +1), np.asarray(jones, dtype=complex))


def gauge_rotate_polarization(s, w, angle):
    """Polarization seen in the turned axes: exp[i (Sigma . w) angle] s.

    This is a rotation by -angle about w (the axes turn by +angle).
    """
    return np.einsum("...ij,...j->...i", rot_so3(w, -np.asarray(angle, dtype=float)), s)


def regauge_fixed_jones(jones, angle, frame=None):
    """Keep the Jones vector, swap the frame for one turned by ``angle``.

    Returns the Jones vector of the resulting field expressed back in the
    original frame, exp(-i sigma3 angle) a~, and its polarization vector in
    that frame. The field vector turns by ``angle`` about w while the
    polarization turns by twice that.
    """
    frame = lab_frame() if frame is None else frame
    rotated = np.einsum("...ij,...j->...i", rot_jones(angle, -1), np.asarray(jones, dtype=complex))
    return rotated, polarization_vector(rotated, frame)


def regauged_evector(jones, angle, frame=None):
    """Electric vector varpi' a~ produced by placing ``jones`` in the turned frame."""
    frame = lab_frame() if frame is None else frame
    return evector_from_jones(jones, frame_matrix(rotated_frame(frame, angle)))


@dataclass(frozen=True)
class PlaneWaveState:
    """A single-mode state a0 delta(k - k0 axis) held symbolically.

    ``gauge`` defaults to -e_x, which reproduces the (e_x, e_y, e_z) frame
    for a wave along +z.
    """

    k0: float
    axis: np.ndarray
    jones: np.ndarray
    gauge: np.ndarray = field(default_factory=lambda: LAB_GAUGE.copy())

    def __post_init__(self):
        if not self.k0 > 0:
            raise ValueError("k0 must be positive")
        jones = np.asarray(self.jones, dtype=complex)
        norm = np.linalg.norm(jones)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"Jones vector must be normalized, |a~| = {norm!r}")
        object.__setattr__(self, "jones", jones)
        object.__setattr__(self, "axis", np.asarray(self.axis, dtype=float))

    @property
    def wavevector(self):
        return self.k0 * self.axis

    @property
    def frame(self):
        return local_frame(self.wavevector, self.gauge)

    @property
    def evector(self):
        return evector_from_jones(self.jones, frame_matrix(self.frame))

    @property
    def stokes(self):
        return stokes(self.jones)

    @property
    def polarization(self):
        return polarization_vector(self.jones, self.frame)
