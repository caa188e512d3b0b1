"""Small-matrix algebra: Pauli matrices, SO(3) generators and rotations.

The Pauli matrices follow the polarization-optics ordering used throughout
this package, which is a relabeling of the usual quantum-mechanics set::

    ours     conventional   role
    sigma1   sigma_z        horizontal/vertical linear (diagonal)
    sigma2   sigma_x        +-45 degree linear
    sigma3   sigma_y        circular (helicity)

With this ordering the Stokes parameters are s_i = a^dagger sigma_i a and
[sigma_i, sigma_j] = 2i eps_ijk sigma_k still holds for (1, 2, 3) cyclic.
"""

import numpy as np

SIGMA1 = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA2 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA3 = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI = np.stack([SIGMA1, SIGMA2, SIGMA3])
PAULI.setflags(write=False)

AXIS_TOL = 1e-9


def levi_civita(i, j, k):
    """Permutation symbol for 1-based indices."""
    return (i - j) * (j - k) * (k - i) // 2


_EPS = np.array(
    [[[levi_civita(i, j, k) for k in (1, 2, 3)] for j in (1, 2, 3)] for i in (1, 2, 3)],
    dtype=float,
)

# (Sigma_k)_{ij} = -i eps_{ijk}
SO3_GENERATORS = np.stack([-1j * _EPS[:, :, k] for k in range(3)])
SO3_GENERATORS.setflags(write=False)


def _check_index(index):
    if index not in (1, 2, 3):
        raise ValueError(f"Pauli index must be 1, 2 or 3, got {index!r}")


def pauli(index):
    """Return sigma_index (1-based) as a fresh 2x2 complex array."""
    _check_index(index)
    return PAULI[index - 1].copy()


def commutator(i, j):
    """[sigma_i, sigma_j] computed by explicit multiplication."""
    a, b = pauli(i), pauli(j)
    return a @ b - b @ a


def so3_generator(index):
    _check_index(index)
    return SO3_GENERATORS[index - 1].copy()


def cross_matrix(n):
    """Matrix [n]_x with [n]_x @ x == n x x; supports leading batch axes."""
    n = np.asarray(n, dtype=float)
    out = np.zeros(n.shape[:-1] + (3, 3))
    out[..., 0, 1] = -n[..., 2]
    out[..., 0, 2] = n[..., 1]
    out[..., 1, 0] = n[..., 2]
    out[..., 1, 2] = -n[..., 0]
    out[..., 2, 0] = -n[..., 1]
    out[..., 2, 1] = n[..., 0]
    return out


def rot_so3(axis, angle):
    """exp[-i (Sigma . axis) angle] via the Rodrigues formula.

    Since -i (Sigma . n) equals the cross-product matrix [n]_x, the result is
    the real right-handed rotation by ``angle`` about ``axis``. Both arguments
    broadcast: ``axis`` has shape (..., 3), ``angle`` shape (...).
    """
    axis = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(axis, axis=-1)
    if np.any(np.abs(norm - 1.0) > AXIS_TOL):
        raise ValueError("rotation axis must be a unit vector")
    angle = np.asarray(angle, dtype=float)
    c = np.cos(angle)[..., None, None]
    s = np.sin(angle)[..., None, None]
    nn = axis[..., :, None] * axis[..., None, :]
    return c * np.eye(3) + s * cross_matrix(axis) + (1.0 - c) * nn


def rot_jones(angle, sign=1):
    """exp(sign * i sigma3 angle) = cos(angle) I + sign i sin(angle) sigma3.

    i sigma3 is the real matrix ((0, 1), (-1, 0)), so the result is real-valued
    but returned as complex for direct use on Jones vectors.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    angle = np.asarray(angle, dtype=float)
    c = np.cos(angle)
    s = sign * np.sin(angle)
    out = np.zeros(angle.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = c
    out[..., 0, 1] = s
    out[..., 1, 0] = -s
    out[..., 1, 1] = c
    return out


def wrap_angle(angle):
    """Reduce to the interval (-pi, pi]."""
    angle = np.asarray(angle, dtype=float)
    out = np.mod(angle + np.pi, 2 * np.pi) - np.pi
    return np.where(out == -np.pi, np.pi, out)
