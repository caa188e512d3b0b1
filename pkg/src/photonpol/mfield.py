"""Sampled momentum-space vector wavefunctions.

A :class:`MomentumField` holds f(k, t) at N wavevector samples, each with a
quadrature weight so that sums approximate integrals over d^3k. Per-sample
work (projection, Jones maps, gauge changes) is vectorized over the sample
axis; reductions use numpy's pairwise summation in fixed sample order so
results do not depend on how the work was scheduled.
"""

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from .algebra import PAULI, rot_jones, rot_so3
from .errors import AllZeroField, SingularGauge, TransversalityViolation
from .frames import (
    SINGULAR_TOL,
    as_gauge,
    frame_angle,
    frame_matrix,
    local_frame,
    unit_wavevector,
)
from .planewave import TRANSVERSE_TOL, stokes

VOID_REL_TOL = 1e-14
BEAM_KINDS = ("uniform-gaussian", "radial", "azimuthal")


@dataclass(frozen=True, eq=False)
class MomentumGrid:
    """Wavevector samples ``k`` (N, 3) with positive quadrature ``weights`` (N,).

    ``shape`` and ``spacing`` are set for uniform Cartesian grids stored in
    C order (x slowest); they are what the FFT synthesis needs.
    """

    k: np.ndarray
    weights: np.ndarray
    shape: tuple = None
    spacing: tuple = None

    def __post_init__(self):
        k = np.ascontiguousarray(self.k, dtype=float)
        weights = np.ascontiguousarray(self.weights, dtype=float)
        if k.ndim != 2 or k.shape[1] != 3:
            raise ValueError(f"k must have shape (N, 3), got {k.shape}")
        if weights.shape != (k.shape[0],):
            raise ValueError("need one weight per sample")
        if np.any(~(weights > 0)):
            raise ValueError("quadrature weights must be positive")
        if np.any(np.all(k == 0.0, axis=1)):
            raise ValueError("grid contains k = 0")
        if self.shape is not None:
            shape = tuple(int(n) for n in self.shape)
            if int(np.prod(shape)) != k.shape[0] or len(shape) != 3:
                raise ValueError("grid shape does not match the sample count")
            object.__setattr__(self, "shape", shape)
            object.__setattr__(self, "spacing", tuple(float(d) for d in self.spacing))
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def cartesian(cls, shape, spacing, center=(0.0, 0.0, 0.0)):
        """Uniform grid of ``shape`` points centered on ``center``.

        Points sit at center + (n - (N-1)/2) * spacing along each axis, so an
        even count leaves the center line itself unsampled (half-cell offset).
        """
        shape = tuple(int(n) for n in shape)
        spacing = np.broadcast_to(np.asarray(spacing, dtype=float), (3,))
        if len(shape) != 3 or min(shape) < 1:
            raise ValueError("shape must be three positive integers")
        if np.any(spacing <= 0):
            raise ValueError("spacing must be positive")
        axes = [
            c + (np.arange(n) - (n - 1) / 2.0) * d
            for n, d, c in zip(shape, spacing, center)
        ]
        mesh = np.meshgrid(*axes, indexing="ij")
        k = np.stack([m.ravel() for m in mesh], axis=1)
        weights = np.full(k.shape[0], float(np.prod(spacing)))
        return cls(k=k, weights=weights, shape=shape, spacing=tuple(spacing))

    @property
    def size(self):
        return self.k.shape[0]

    @property
    def is_uniform(self):
        return self.shape is not None

    @property
    def origin(self):
        return self.k[0]

    @cached_property
    def magnitude(self):
        return np.linalg.norm(self.k, axis=1)

    @cached_property
    def w(self):
        return unit_wavevector(self.k)


@dataclass(frozen=True, eq=False)
class MomentumField:
    """f(k, t) sampled on ``grid``; ``f`` has shape (N, 3)."""

    grid: MomentumGrid
    f: np.ndarray
    t: float = 0.0
    gauge: np.ndarray = None
    units: str = "natural"

    def __post_init__(self):
        f = np.ascontiguousarray(self.f, dtype=complex)
        if f.shape != (self.grid.size, 3):
            raise ValueError(f"field must have shape ({self.grid.size}, 3), got {f.shape}")
        object.__setattr__(self, "f", f)
        if self.gauge is not None:
            object.__setattr__(self, "gauge", as_gauge(self.gauge))

    def with_values(self, f, **changes):
        return replace(self, f=f, **changes)

    def norm2(self):
        """Sum of |f|^2 weight over samples."""
        return float(np.sum(np.sum(np.abs(self.f) ** 2, axis=1) * self.grid.weights))

    def normalized(self):
        n2 = self.norm2()
        if n2 == 0.0:
            raise AllZeroField("cannot normalize an all-zero field")
        return self.with_values(self.f / np.sqrt(n2))

    def longitudinal(self):
        """Per-sample |w . f|, the part forbidden by transversality."""
        return np.abs(np.einsum("ni,ni->n", self.f, self.grid.w))


def project_transverse(field):
    """Remove the component of f along w at every sample: f <- (I3 - w w^T) f."""
    w = field.grid.w
    along = np.einsum("ni,ni->n", w, field.f)
    return field.with_values(field.f - w * along[:, None])


@dataclass(frozen=True, eq=False)
class UnitVWF:
    """Per-sample unit vectors a = f/|f| with the magnitudes kept aside."""

    grid: MomentumGrid
    a: np.ndarray
    amplitude: np.ndarray
    void: np.ndarray
    t: float = 0.0


def unit_vwf(field):
    """Split f into |f| and a unit vector per sample.

    Samples with |f| below 1e-14 of the largest magnitude are marked void and
    given a = 0; they carry no polarization.
    """
    amplitude = np.linalg.norm(field.f, axis=1)
    peak = float(np.max(amplitude)) if amplitude.size else 0.0
    if peak == 0.0:
        raise AllZeroField("field vanishes at every sample")
    void = amplitude < VOID_REL_TOL * peak
    safe = np.where(void, 1.0, amplitude)
    a = np.where(void[:, None], 0.0, field.f / safe[:, None])
    return UnitVWF(grid=field.grid, a=a, amplitude=np.where(void, 0.0, amplitude),
                   void=void, t=field.t)


def check_gauge(grid, gauge, tol=SINGULAR_TOL):
    """Build frames for every sample, raising SingularGauge with the sample index."""
    return local_frame(grid.k, gauge, tol)


@dataclass(frozen=True, eq=False)
class JonesField:
    """Jones vectors (N, 2) of a field in a declared gauge."""

    grid: MomentumGrid
    jones: np.ndarray
    amplitude: np.ndarray
    gauge: np.ndarray
    void: np.ndarray
    t: float = 0.0
    units: str = "natural"

    @cached_property
    def frame(self):
        return check_gauge(self.grid, self.gauge)

    @cached_property
    def varpi(self):
        return frame_matrix(self.frame)

    def unit_vectors(self):
        """a(k) = varpi(k) a~(k)."""
        return np.einsum("nij,nj->ni", self.varpi, self.jones)

    def to_field(self):
        """Reconstruct the vector wavefunction amplitude * varpi a~."""
        return MomentumField(grid=self.grid, f=self.amplitude[:, None] * self.unit_vectors(),
                             t=self.t, gauge=self.gauge, units=self.units)


def jones_field(field, gauge):
    """Per-sample Jones vectors a~(k) = varpi(k)^dagger a(k) in gauge ``gauge``."""
    gauge = as_gauge(gauge)
    frame = check_gauge(field.grid, gauge)
    unit = unit_vwf(field)
    along = np.abs(np.einsum("ni,ni->n", unit.a, frame.w))
    if np.any(along > TRANSVERSE_TOL):
        index = int(np.argmax(along))
        raise TransversalityViolation(
            f"sample {index} has relative longitudinal component {along[index]:.3g}"
        )
    varpi = frame_matrix(frame)
    jones = np.einsum("nij,ni->nj", varpi.conj(), unit.a)
    jf = JonesField(grid=field.grid, jones=jones, amplitude=unit.amplitude, gauge=gauge,
                    void=unit.void, t=field.t, units=field.units)
    jf.__dict__["frame"] = frame
    jf.__dict__["varpi"] = varpi
    return jf


def gauge_angles(jf, gauge_new):
    """Phi(k; I_old, I_new) for every sample, from explicit frames."""
    return frame_angle(jf.frame, check_gauge(jf.grid, gauge_new))


def gauge_transform(jf, gauge_new):
    """Re-express the same field in gauge ``gauge_new``: a~' = exp(i sigma3 Phi(k)) a~."""
    gauge_new = as_gauge(gauge_new)
    new_frame = check_gauge(jf.grid, gauge_new)
    phi = frame_angle(jf.frame, new_frame)
    jones = np.einsum("nij,nj->ni", rot_jones(phi, +1), jf.jones)
    out = replace(jf, jones=jones, gauge=gauge_new)
    out.__dict__["frame"] = new_frame
    return out


def polarization_operator(frame):
    """varsigma = sigma1 u + sigma2 v + sigma3 w as an array (..., 3, 2, 2).

    Index [..., j, :, :] is the 2x2 matrix multiplying lab axis j.
    """
    axes = np.stack([frame.u, frame.v, frame.w], axis=-2)  # (..., 3 local, 3 lab)
    return np.einsum("...ij,iab->...jab", axes, PAULI)


def polarization_operator_along(frame, n):
    """varsigma . n; along w this is exactly sigma3."""
    return np.einsum("...jab,...j->...ab", polarization_operator(frame), np.asarray(n, dtype=float))


@dataclass(frozen=True, eq=False)
class StokesField:
    grid: MomentumGrid
    components: np.ndarray
    vectors: np.ndarray
    gauge: np.ndarray
    void: np.ndarray


def stokes_field(jf):
    """Per-sample (s1, s2, s3) and lab-frame s = s1 u + s2 v + s3 w. Void samples are zero."""
    comps = stokes(jf.jones)
    comps[jf.void] = 0.0
    fr = jf.frame
    vectors = comps[:, 0:1] * fr.u + comps[:, 1:2] * fr.v + comps[:, 2:3] * fr.w
    return StokesField(grid=jf.grid, components=comps, vectors=vectors, gauge=jf.gauge,
                       void=jf.void)


def regauge_fixed_field(jf, gauge_new):
    """Keep every a~(k) but attach it to the frames of ``gauge_new``.

    The result a^R(k) = varpi'(k) a~(k) is the original field rotated by
    Phi(k) about w(k) at each sample: a physically different state.
    """
    new_frame = check_gauge(jf.grid, as_gauge(gauge_new))
    a = np.einsum("nij,nj->ni", frame_matrix(new_frame), jf.jones)
    return MomentumField(grid=jf.grid, f=jf.amplitude[:, None] * a, t=jf.t,
                         gauge=jf.gauge, units=jf.units)


def regauge_by_rotation(field, gauge_old, gauge_new):
    """Same state as :func:`regauge_fixed_field` built as R(w, Phi) f per sample."""
    phi = frame_angle(check_gauge(field.grid, gauge_old), check_gauge(field.grid, gauge_new))
    rot = rot_so3(field.grid.w, phi)
    return field.with_values(np.einsum("nij,nj->ni", rot, field.f))


@dataclass(frozen=True)
class SchmidtReport:
    """Schmidt decomposition of the polarization x momentum amplitude matrix.

    The measure itself (rows weighted by sqrt(weight) |f|, entropy in nats)
    is this package's choice; the underlying theory names no specific one.
    """

    singular_values: tuple
    probabilities: tuple
    entropy: float
    gauge: tuple
    norm2: float
    measure: str = "schmidt-2xN sqrt(weight)*|f| rows, entropy in nats"


def schmidt(jf):
    """Schmidt coefficients and entanglement entropy of a Jones field.

    Column n of the 2 x N matrix M is sqrt(weight_n) |f_n| a~_n. The
    singular values come from the 2x2 Gram matrix M M^dagger in closed form.
    """
    weighted = (np.sqrt(jf.grid.weights) * jf.amplitude)[:, None] * jf.jones
    weighted[jf.void] = 0.0
    g11 = float(np.sum(np.abs(weighted[:, 0]) ** 2))
    g22 = float(np.sum(np.abs(weighted[:, 1]) ** 2))
    g12 = complex(np.sum(weighted[:, 0] * weighted[:, 1].conj()))
    trace = g11 + g22
    if trace == 0.0:
        raise AllZeroField("field has no intensity")
    disc = np.hypot(g11 - g22, 2.0 * abs(g12))
    lam_max = 0.5 * (trace + disc)
    det = g11 * g22 - abs(g12) ** 2
    lam_min = max(det / lam_max, 0.0)
    eig = (lam_max, lam_min)
    probs = tuple(e / trace for e in eig)
    entropy = -sum(p * np.log(p) for p in probs if p > 0.0)
    return SchmidtReport(
        singular_values=tuple(float(np.sqrt(e)) for e in eig),
        probabilities=tuple(float(p) for p in probs),
        entropy=float(max(entropy, 0.0)),
        gauge=tuple(float(x) for x in jf.gauge),
        norm2=trace,
    )


def make_beam(kind, center, width, shape, spacing, gauge, axis=(0.0, 0.0, 1.0),
              jones=(1.0, 0.0), normalize=True):
    """Gaussian momentum-space beam on a Cartesian grid around ``center * axis``.

    The amplitude envelope is exp(-|k - k_c|^2 / (4 width^2)), so the intensity
    has standard deviation ``width``. Polarization by ``kind``:

    - ``uniform-gaussian``: the Jones vector ``jones`` at every sample in ``gauge``;
    - ``radial``: a~ = (1, 0) in the gauge I = ``axis`` (a = u);
    - ``azimuthal``: a~ = (0, 1) in the gauge I = ``axis`` (a = v).

    The returned field is tagged with ``gauge``, which must be nonsingular on
    the whole grid.
    """
    if kind not in BEAM_KINDS:
        raise ValueError(f"unknown beam kind {kind!r}; expected one of {BEAM_KINDS}")
    if not width > 0:
        raise ValueError("width must be positive")
    if not center > 0:
        raise ValueError("center wavenumber must be positive")
    axis = as_gauge(axis)
    gauge = as_gauge(gauge)
    grid = MomentumGrid.cartesian(shape, spacing, center=center * axis)
    own = check_gauge(grid, gauge)
    if kind == "uniform-gaussian":
        j = np.asarray(jones, dtype=complex)
        jn = np.linalg.norm(j)
        if j.shape != (2,) or jn == 0:
            raise ValueError("jones must be a nonzero 2-vector")
        a = np.einsum("nij,j->ni", frame_matrix(own), j / jn)
    else:
        beam_frame = check_gauge(grid, axis)
        a = (beam_frame.u if kind == "radial" else beam_frame.v).astype(complex)
    dk = grid.k - center * axis
    envelope = np.exp(-np.sum(dk * dk, axis=1) / (4.0 * width**2))
    out = MomentumField(grid=grid, f=envelope[:, None] * a, gauge=gauge)
    return out.normalized() if normalize else out
