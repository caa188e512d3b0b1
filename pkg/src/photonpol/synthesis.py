"""Time evolution under omega = c|k| and synthesis of the position-space field.

The electric field is

    E(x, t) = (2 pi)^(-3/2) sum_k sqrt(hbar omega / eps0) f(k, t) exp(i k.x) d^3k

on a uniform Cartesian k-grid. With k_n = k0 + n dk the position grid is the
conjugate one, x_m = x0 + m dx with dx = 2 pi / (N dk) and x0 = -(N // 2) dx,
and the sum over n is an unnormalized inverse DFT. The (2 pi)^(-3/2) and d^3k
factors are applied explicitly, never folded into the transform.
"""

from dataclasses import dataclass

import numpy as np

from .mfield import MomentumField, MomentumGrid


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = 1.0
    hbar: float = 1.0
    epsilon0: float = 1.0
    natural: bool = True

    def __post_init__(self):
        if not (self.c > 0 and self.hbar > 0 and self.epsilon0 > 0):
            raise ValueError("physical constants must be positive")

    @property
    def units(self):
        return "natural" if self.natural else "si"


NATURAL = PhysicalConstants()
SI = PhysicalConstants(c=299792458.0, hbar=1.054571817e-34, epsilon0=8.8541878128e-12,
                       natural=False)


def constants_for(units):
    if units == "natural":
        return NATURAL
    if units == "si":
        return SI
    raise ValueError(f"unknown units flag {units!r}")


def omega(grid, constants=NATURAL):
    return constants.c * grid.magnitude


def evolve(field, t, constants=NATURAL):
    """f(k, t0 + t) = f(k, t0) exp(-i omega t)."""
    phase = np.exp(-1j * omega(field.grid, constants) * t)
    return field.with_values(field.f * phase[:, None], t=field.t + t)


def energy(field, constants=NATURAL):
    """sum hbar omega |f|^2 d^3k."""
    w = constants.hbar * omega(field.grid, constants)
    return float(np.sum(w * np.sum(np.abs(field.f) ** 2, axis=1) * field.grid.weights))


@dataclass(frozen=True, eq=False)
class PositionField:
    """Complex field E (N, 3) at positions x (N, 3) on the grid conjugate to a k-grid.

    ``k_origin`` is the first k sample; translating by one box length L picks
    up the phase exp(i k_origin . L), which finite differences need at the wrap.
    """

    x: np.ndarray
    E: np.ndarray
    t: float
    shape: tuple
    spacing: tuple
    k_origin: np.ndarray
    units: str = "natural"

    @property
    def cell_volume(self):
        return float(np.prod(self.spacing))

    @property
    def box(self):
        return np.asarray(self.shape) * np.asarray(self.spacing)

    def cube(self):
        return self.E.reshape(self.shape + (self.E.shape[-1],))


def conjugate_axes(grid):
    if not grid.is_uniform:
        raise ValueError("position synthesis needs a uniform Cartesian k-grid")
    dx = [2.0 * np.pi / (n * d) for n, d in zip(grid.shape, grid.spacing)]
    return [(-(n // 2) + np.arange(n)) * h for n, h in zip(grid.shape, dx)], tuple(dx)


def _transform(grid, values):
    """(2 pi)^(-3/2) d^3k sum_n values_n exp(i k_n . x_m) for values of shape (N, m)."""
    axes, _ = conjugate_axes(grid)
    k0 = grid.k[0]
    dk = grid.spacing
    cube = values.reshape(grid.shape + values.shape[1:])
    # pre-twiddle exp(i n dk x0) along each k axis
    for ax in range(3):
        n = np.arange(grid.shape[ax])
        tw = np.exp(1j * n * dk[ax] * axes[ax][0])
        cube = cube * tw.reshape([-1 if i == ax else 1 for i in range(3)] + [1])
    summed = np.fft.ifftn(cube, axes=(0, 1, 2), norm="forward")
    # post-twiddle exp(i k0 x_m)
    for ax in range(3):
        tw = np.exp(1j * k0[ax] * axes[ax])
        summed = summed * tw.reshape([-1 if i == ax else 1 for i in range(3)] + [1])
    scale = (2.0 * np.pi) ** -1.5 * float(np.prod(dk))
    return scale * summed.reshape(values.shape)


def _positions(grid):
    axes, dx = conjugate_axes(grid)
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1), dx


def mode_weight(grid, constants=NATURAL):
    """sqrt(hbar omega / eps0) per sample."""
    return np.sqrt(constants.hbar * omega(grid, constants) / constants.epsilon0)


def position_field(field, constants=NATURAL):
    """Synthesize E(x, t) from f(k, t) by DFT; the field's time is carried over."""
    g = mode_weight(field.grid, constants)[:, None] * field.f
    x, dx = _positions(field.grid)
    return PositionField(x=x, E=_transform(field.grid, g), t=field.t,
                         shape=field.grid.shape, spacing=dx, k_origin=field.grid.k[0].copy(),
                         units=constants.units)


def position_field_direct(field, constants=NATURAL):
    """Brute-force O(N^2) evaluation of the same sum; for checking small grids."""
    g = mode_weight(field.grid, constants)[:, None] * field.f
    x, _ = _positions(field.grid)
    kernel = np.exp(1j * x @ field.grid.k.T)
    return (2.0 * np.pi) ** -1.5 * (kernel @ (g * field.grid.weights[:, None]))


def real_field(pf):
    """The physical field (E + E*) / sqrt(2), returned as a real array (N, 3)."""
    return ((pf.E + pf.E.conj()) / np.sqrt(2.0)).real


def divergence_check(field):
    """Largest |k . f| / (|k| |f|) over samples with nonzero f."""
    fmag = np.linalg.norm(field.f, axis=1)
    live = fmag > 0
    if not np.any(live):
        return 0.0
    along = np.abs(np.einsum("ni,ni->n", field.grid.w[live], field.f[live]))
    return float(np.max(along / fmag[live]))


def spectral_divergence(field, constants=NATURAL):
    """div E on the position grid, computed exactly in k-space as i k . g."""
    g = mode_weight(field.grid, constants)[:, None] * field.f
    dk = 1j * np.einsum("ni,ni->n", field.grid.k, g)
    return _transform(field.grid, dk[:, None])[:, 0]


def fd_divergence(pf):
    """Second-order central-difference divergence of E on its position grid.

    Neighbours across the box edge are brought back with the Bloch phase
    exp(i k_origin . L) so the stencil sees a continuous field.
    """
    cube = pf.cube()
    out = np.zeros(pf.shape, dtype=complex)
    for ax in range(3):
        comp = cube[..., ax]
        phase = np.exp(1j * pf.k_origin[ax] * pf.box[ax])
        fwd = np.roll(comp, -1, axis=ax)
        bwd = np.roll(comp, 1, axis=ax)
        last = [slice(None)] * 3
        last[ax] = -1
        first = [slice(None)] * 3
        first[ax] = 0
        fwd[tuple(last)] *= phase
        bwd[tuple(first)] /= phase
        out += (fwd - bwd) / (2.0 * pf.spacing[ax])
    return out.ravel()


def pad_field(field, factor):
    """Embed a uniform-grid field in a grid ``factor`` times larger per axis, same spacing.

    The original samples keep their wavevectors; new ones are zero. Halves the
    position spacing per doubling while describing the same continuous field.
    """
    grid = field.grid
    if not grid.is_uniform:
        raise ValueError("padding needs a uniform grid")
    factor = int(factor)
    shape = tuple(n * factor for n in grid.shape)
    center = grid.k[0] + (np.asarray(grid.shape) - 1) / 2.0 * np.asarray(grid.spacing)
    big = MomentumGrid.cartesian(shape, grid.spacing, center=center)
    f = np.zeros(shape + (3,), dtype=complex)
    lo = [(m - n) // 2 for m, n in zip(shape, grid.shape)]
    f[lo[0]:lo[0] + grid.shape[0], lo[1]:lo[1] + grid.shape[1], lo[2]:lo[2] + grid.shape[2]] = (
        field.f.reshape(grid.shape + (3,))
    )
    return MomentumField(grid=big, f=f.reshape(-1, 3), t=field.t, gauge=field.gauge,
                         units=field.units)
