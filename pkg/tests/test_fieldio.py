import numpy as np
import pytest

from photonpol import fieldio
from photonpol.errors import FieldFormatError
from photonpol.mfield import MomentumField, MomentumGrid, make_beam
from photonpol.synthesis import evolve, position_field

EZ = np.array([0.0, 0.0, 1.0])


@pytest.fixture
def beam():
    return evolve(make_beam("radial", 1.0, 0.1, (6, 6, 4), 0.037, EZ), 0.123)


@pytest.fixture
def scattered(rng):
    k = rng.normal(size=(20, 3)) + [0, 0, 3]
    grid = MomentumGrid(k=k, weights=rng.uniform(0.1, 1.0, 20))
    f = rng.normal(size=(20, 3)) + 1j * rng.normal(size=(20, 3))
    return MomentumField(grid=grid, f=f, t=-1.5e-3)


def same_field(a, b):
    np.testing.assert_array_equal(a.grid.k, b.grid.k)
    np.testing.assert_array_equal(a.grid.weights, b.grid.weights)
    np.testing.assert_array_equal(a.f, b.f)
    assert a.t == b.t
    assert a.grid.shape == b.grid.shape
    assert a.units == b.units
    if a.gauge is None:
        assert b.gauge is None
    else:
        np.testing.assert_array_equal(a.gauge, b.gauge)


@pytest.mark.parametrize("fmt", ["text", "bin"])
def test_roundtrip_bit_exact(tmp_path, beam, scattered, fmt):
    for field in (beam, scattered):
        path = tmp_path / f"f.{fmt}"
        fieldio.save(field, path, fmt)
        same_field(field, fieldio.load(path))


def test_text_header_layout(beam):
    text = fieldio.dumps_text(beam)
    head = text.splitlines()[:8]
    assert head[0] == "# photonpol-field v1"
    assert head[1] == "# space: k"
    assert head[2] == "# shape: 6 6 4"
    assert head[4] == "# gauge: 0 0 1"
    assert head[7].startswith("# columns: kx ky kz re_fx im_fx")
    assert len(text.splitlines()) == 8 + beam.grid.size


def test_binary_layout(beam):
    blob = fieldio.dumps_binary(beam)
    assert blob[:8] == b"PHPOLFLD"
    hlen = int.from_bytes(blob[8:12], "little")
    rows = np.frombuffer(blob[12 + hlen:], dtype="<f8").reshape(-1, 9)
    np.testing.assert_array_equal(rows[:, :3], beam.grid.k)
    np.testing.assert_array_equal(rows[:, 4], beam.f[:, 0].imag)


@pytest.mark.parametrize("fmt", ["text", "bin"])
def test_position_roundtrip(tmp_path, beam, fmt):
    pf = position_field(beam)
    path = tmp_path / "x.out"
    fieldio.save(pf, path, fmt)
    back = fieldio.load(path)
    np.testing.assert_array_equal(back.E, pf.E)
    np.testing.assert_array_equal(back.x, pf.x)
    np.testing.assert_array_equal(back.k_origin, pf.k_origin)
    assert back.shape == pf.shape and back.spacing == pf.spacing
    assert fieldio.dumps_text(pf).splitlines()[1] == "# space: x"


def test_deterministic_bytes(beam):
    assert fieldio.dumps_text(beam) == fieldio.dumps_text(beam)
    assert fieldio.dumps_binary(beam) == fieldio.dumps_binary(beam)


@pytest.mark.parametrize("mutate, message", [
    (lambda t: t.replace("# photonpol-field v1", "# something"), "line 1"),
    (lambda t: t.replace("# time: ", "# time: x"), "line 6"),
    (lambda t: t.replace("# units: natural\n", ""), "units"),
    (lambda t: t + "1 2 3\n", "expected 9 values"),
])
def test_text_errors(beam, mutate, message):
    with pytest.raises(FieldFormatError, match=message):
        fieldio.loads_text(mutate(fieldio.dumps_text(beam)))


def test_binary_errors(beam):
    blob = fieldio.dumps_binary(beam)
    with pytest.raises(FieldFormatError):
        fieldio.loads_binary(b"NOTMAGIC" + blob[8:])
    with pytest.raises(FieldFormatError):
        fieldio.loads_binary(blob[:-3])
