import numpy as np
import pytest

from photonpol.mfield import (
    MomentumField,
    MomentumGrid,
    gauge_transform,
    jones_field,
    make_beam,
    project_transverse,
)
from photonpol.synthesis import (
    NATURAL,
    SI,
    PhysicalConstants,
    PositionField,
    divergence_check,
    energy,
    evolve,
    fd_divergence,
    omega,
    pad_field,
    position_field,
    position_field_direct,
    real_field,
    spectral_divergence,
)

EX, EY, EZ = np.eye(3)


def random_field(rng, shape=(4, 6, 4), spacing=(0.3, 0.2, 0.25), center=(0.1, -0.2, 1.0)):
    grid = MomentumGrid.cartesian(shape, spacing, center=center)
    f = rng.normal(size=(grid.size, 3)) + 1j * rng.normal(size=(grid.size, 3))
    return project_transverse(MomentumField(grid=grid, f=f))


def smooth_field(rng, longitudinal=False):
    grid = MomentumGrid.cartesian((8, 8, 8), 0.5, center=(0, 0, 0))
    env = np.exp(-np.sum((grid.k - [0.1, 0, 0.3]) ** 2, axis=1))
    pol = np.array([1.0, 0.5j, 0.2]) + 0.1 * rng.normal(size=3)
    field = MomentumField(grid=grid, f=env[:, None] * pol)
    return field if longitudinal else project_transverse(field)


def test_constants():
    assert NATURAL.c == NATURAL.hbar == NATURAL.epsilon0 == 1.0
    assert SI.c == 299792458.0
    with pytest.raises(ValueError):
        PhysicalConstants(c=0.0)


def test_evolve_identity_and_modulus(rng):
    field = random_field(rng)
    np.testing.assert_array_equal(evolve(field, 0.0).f, field.f)
    for t in 10.0 ** np.arange(-3, 4):
        out = evolve(field, t)
        assert out.t == t
        np.testing.assert_allclose(np.abs(out.f), np.abs(field.f), rtol=1e-14, atol=0)


def test_evolve_group_and_energy(rng):
    field = random_field(rng)
    np.testing.assert_allclose(evolve(evolve(field, 0.4), 1.3).f, evolve(field, 1.7).f,
                               atol=1e-12)
    e0 = energy(field)
    for t in (0.1, 10.0, 1e4):
        assert energy(evolve(field, t)) == pytest.approx(e0, rel=1e-12)
    assert divergence_check(evolve(field, 3.0)) < 1e-14


def test_evolve_si_frequency(rng):
    field = random_field(rng)
    t = 1e-9
    out = evolve(field, t, SI)
    np.testing.assert_allclose(out.f, field.f * np.exp(-1j * SI.c * field.grid.magnitude * t)[:, None])


def test_schrodinger_central_difference_order(rng):
    field = random_field(rng)
    om = omega(field.grid)[:, None]

    def residual(dt, t=0.8):
        plus, minus, now = (evolve(field, t + dt).f, evolve(field, t - dt).f, evolve(field, t).f)
        return np.max(np.abs(1j * (plus - minus) / (2 * dt) - om * now))

    r = [residual(0.04 / 2**i) for i in range(4)]
    ratios = [a / b for a, b in zip(r, r[1:])]
    for q in ratios:
        assert 3.8 < q < 4.2


def test_position_field_matches_direct_sum(rng):
    field = random_field(rng)
    pf = position_field(field)
    ref = position_field_direct(field)
    assert np.max(np.abs(pf.E - ref)) <= 1e-12 * np.max(np.abs(ref))
    assert pf.shape == field.grid.shape
    np.testing.assert_allclose(pf.spacing, [2 * np.pi / (4 * 0.3), 2 * np.pi / (6 * 0.2),
                                            2 * np.pi / (4 * 0.25)])


def test_position_field_si_weighting(rng):
    field = random_field(rng)
    pf = position_field(field, SI)
    ref = position_field_direct(field, SI)
    np.testing.assert_allclose(pf.E, ref, rtol=0, atol=1e-12 * np.max(np.abs(ref)))


def test_single_mode():
    grid = MomentumGrid.cartesian((4, 4, 4), 0.25, center=(0, 0, 1.0))
    n = 37
    amp = 0.7 - 0.2j
    f = np.zeros((grid.size, 3), dtype=complex)
    a0 = np.cross(grid.w[n], EX)
    a0 /= np.linalg.norm(a0)
    f[n] = amp * a0
    field = MomentumField(grid=grid, f=f)
    pf = position_field(field)
    k0 = grid.k[n]
    expected = ((2 * np.pi) ** -1.5 * np.sqrt(np.linalg.norm(k0)) * amp * 0.25**3
                * np.exp(1j * pf.x @ k0)[:, None] * a0)
    np.testing.assert_allclose(pf.E, expected, atol=1e-15)
    assert divergence_check(field) <= 1e-12


def test_parseval(rng):
    field = random_field(rng)
    pf = position_field(field)
    lhs = np.sum(np.abs(pf.E) ** 2) * pf.cell_volume
    rhs = np.sum(omega(field.grid) * np.sum(np.abs(field.f) ** 2, axis=1) * field.grid.weights)
    assert abs(lhs - rhs) / rhs <= 1e-10


def test_synthesis_linearity_in_phase(rng):
    field = random_field(rng)
    t = 0.9
    evolved = position_field(evolve(field, t)).E
    manual = position_field(field.with_values(field.f * np.exp(-1j * omega(field.grid) * t)[:, None])).E
    np.testing.assert_allclose(evolved, manual, atol=1e-14)


def test_real_field():
    grid = MomentumGrid.cartesian((2, 2, 2), 0.5, center=(0, 0, 1))
    base = dict(x=np.zeros((3, 3)), t=0.0, shape=(3, 1, 1), spacing=(1.0, 1.0, 1.0),
                k_origin=grid.k[0])
    e = np.array([[1.0, -2.0, 0.5]] * 3, dtype=complex)
    np.testing.assert_allclose(real_field(PositionField(E=e, **base)), np.sqrt(2) * e.real)
    np.testing.assert_array_equal(real_field(PositionField(E=1j * e, **base)), 0.0)


def test_real_field_is_real(rng):
    pf = position_field(random_field(rng))
    out = real_field(pf)
    assert out.dtype == float
    np.testing.assert_allclose(out, np.sqrt(2) * pf.E.real, atol=1e-14 * np.max(np.abs(pf.E)))


def test_divergence_check(rng):
    field = random_field(rng)
    assert divergence_check(field) <= 1e-12
    g = rng.normal(size=field.grid.size) + 1j
    longitudinal = field.with_values(field.grid.w * g[:, None])
    assert divergence_check(longitudinal) == pytest.approx(1.0, abs=1e-14)


def test_spectral_divergence_zero_for_projected(rng):
    field = smooth_field(rng)
    assert np.max(np.abs(spectral_divergence(field))) <= 1e-12


@pytest.mark.parametrize("longitudinal", [False, True])
def test_fd_divergence_second_order(rng, longitudinal):
    field = smooth_field(rng, longitudinal=longitudinal)
    errs = []
    for p in (1, 2, 4, 8):
        big = pad_field(field, p)
        pf = position_field(big)
        errs.append(np.max(np.abs(fd_divergence(pf) - spectral_divergence(big))))
    ratios = [a / b for a, b in zip(errs, errs[1:])]
    assert ratios[-1] == pytest.approx(4.0, abs=0.5)
    assert all(q > 2.5 for q in ratios)


def test_pad_field_preserves_samples(rng):
    field = smooth_field(rng)
    big = pad_field(field, 2)
    assert big.grid.shape == (16, 16, 16)
    assert big.norm2() == pytest.approx(field.norm2(), rel=1e-14)
    nz = np.linalg.norm(big.f, axis=1) > 0
    np.testing.assert_allclose(np.sort(big.grid.k[nz], axis=0), np.sort(field.grid.k, axis=0),
                               atol=1e-14)


def test_synthesis_is_gauge_independent():
    beam = make_beam("radial", 1.0, 0.1, (8, 8, 8), 0.05, EZ)
    direct = position_field(beam).E
    for gauge in (EX, EY, np.array([1.0, 1.0, -0.5])):
        via = jones_field(beam, gauge).to_field()
        np.testing.assert_allclose(position_field(via).E, direct, atol=1e-12 * np.max(np.abs(direct)))
    moved = gauge_transform(jones_field(beam, EZ), EX).to_field()
    np.testing.assert_allclose(position_field(moved).E, direct, atol=1e-12 * np.max(np.abs(direct)))


def test_position_needs_uniform_grid(rng):
    grid = MomentumGrid(k=np.array([[0, 0, 1.0], [0, 1.0, 1.0]]), weights=[1.0, 1.0])
    with pytest.raises(ValueError):
        position_field(MomentumField(grid=grid, f=np.zeros((2, 3))))
