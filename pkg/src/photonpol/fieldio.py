"""Field file formats.

Text layout (``--format text``)::

    # photonpol-field v1
    # space: k
    # shape: 32 32 32
    # spacing: 0.02 0.02 0.02
    # gauge: 0 0 1
    # time: 0
    # units: natural
    # columns: kx ky kz re_fx im_fx re_fy im_fy re_fz im_fz
    <one row per sample, %.17g>

``space`` is ``k`` for momentum fields and ``x`` for synthesized position
fields (columns x y z re_Ex ... and an extra ``k_origin`` header line).
``shape``/``spacing`` read ``none`` for non-uniform sample lists, in which
case a trailing ``weight`` column holds the quadrature weights. ``gauge``
may be ``none``.

Binary layout (``--format bin``): the 8-byte magic ``PHPOLFLD``, a
little-endian uint32 header length, the header as UTF-8 JSON with the same
keys, then the rows as little-endian float64 in C order.

17 significant digits in text and raw float64 in binary make both round
trips exact.
"""

import io
import json
import struct

import numpy as np

from .errors import FieldFormatError
from .mfield import MomentumField, MomentumGrid
from .synthesis import PositionField

MAGIC = b"PHPOLFLD"
TEXT_TAG = "photonpol-field v1"
FLOAT_FMT = "%.17g"

_K_COLS = ["kx", "ky", "kz", "re_fx", "im_fx", "re_fy", "im_fy", "re_fz", "im_fz"]
_X_COLS = ["x", "y", "z", "re_Ex", "im_Ex", "re_Ey", "im_Ey", "re_Ez", "im_Ez"]


def fmt(x):
    return FLOAT_FMT % x


def _header_and_rows(obj):
    if isinstance(obj, MomentumField):
        grid = obj.grid
        header = {
            "space": "k",
            "shape": list(grid.shape) if grid.is_uniform else None,
            "spacing": list(grid.spacing) if grid.is_uniform else None,
            "gauge": None if obj.gauge is None else [float(g) for g in obj.gauge],
            "time": float(obj.t),
            "units": obj.units,
        }
        cols = list(_K_COLS)
        parts = [grid.k, _split(obj.f)]
        if not grid.is_uniform:
            cols.append("weight")
            parts.append(grid.weights[:, None])
    elif isinstance(obj, PositionField):
        header = {
            "space": "x",
            "shape": list(obj.shape),
            "spacing": list(obj.spacing),
            "gauge": None,
            "time": float(obj.t),
            "units": obj.units,
            "k_origin": [float(v) for v in obj.k_origin],
        }
        cols = list(_X_COLS)
        parts = [obj.x, _split(obj.E)]
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    header["columns"] = cols
    return header, np.ascontiguousarray(np.hstack(parts), dtype="<f8")


def _split(z):
    out = np.empty((z.shape[0], 6))
    out[:, 0::2] = z.real
    out[:, 1::2] = z.imag
    return out


def _join(cols):
    return cols[:, 0::2] + 1j * cols[:, 1::2]


def _build(header, rows):
    space = header.get("space")
    cols = header.get("columns")
    if rows.ndim != 2 or rows.shape[1] != len(cols):
        raise FieldFormatError(f"expected {len(cols)} columns, found {rows.shape}")
    shape = header.get("shape")
    spacing = header.get("spacing")
    try:
        if space == "k":
            if cols[:9] != _K_COLS:
                raise FieldFormatError("unexpected column layout for a k-space file")
            if shape is None:
                if cols[-1] != "weight":
                    raise FieldFormatError("non-uniform grid needs a weight column")
                grid = MomentumGrid(k=rows[:, :3], weights=rows[:, 9])
            else:
                grid = MomentumGrid(k=rows[:, :3],
                                    weights=np.full(rows.shape[0], float(np.prod(spacing))),
                                    shape=tuple(shape), spacing=tuple(spacing))
            return MomentumField(grid=grid, f=_join(rows[:, 3:9]), t=header["time"],
                                 gauge=header.get("gauge"), units=header.get("units", "natural"))
        if space == "x":
            if cols != _X_COLS:
                raise FieldFormatError("unexpected column layout for an x-space file")
            return PositionField(x=rows[:, :3].copy(), E=_join(rows[:, 3:9]), t=header["time"],
                                 shape=tuple(shape), spacing=tuple(spacing),
                                 k_origin=np.asarray(header["k_origin"], dtype=float),
                                 units=header.get("units", "natural"))
    except (KeyError, TypeError) as exc:
        raise FieldFormatError(f"incomplete header: {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, FieldFormatError):
            raise
        raise FieldFormatError(str(exc)) from exc
    raise FieldFormatError(f"unknown space {space!r}")


def _vec(values):
    return "none" if values is None else " ".join(fmt(v) if isinstance(v, float) else str(v)
                                                  for v in values)


def dumps_text(obj):
    header, rows = _header_and_rows(obj)
    lines = [f"# {TEXT_TAG}", f"# space: {header['space']}",
             f"# shape: {_vec(header['shape'])}", f"# spacing: {_vec(header['spacing'])}",
             f"# gauge: {_vec(header['gauge'])}", f"# time: {fmt(header['time'])}",
             f"# units: {header['units']}"]
    if "k_origin" in header:
        lines.append(f"# k_origin: {_vec(header['k_origin'])}")
    lines.append(f"# columns: {' '.join(header['columns'])}")
    buf = io.StringIO()
    np.savetxt(buf, rows, fmt=FLOAT_FMT)
    return "\n".join(lines) + "\n" + buf.getvalue()


def dumps_binary(obj):
    header, rows = _header_and_rows(obj)
    blob = json.dumps(header, sort_keys=True).encode("utf-8")
    return MAGIC + struct.pack("<I", len(blob)) + blob + rows.tobytes()


def _parse_vec(text, kind, lineno):
    if text.strip() == "none":
        return None
    try:
        return [kind(tok) for tok in text.split()]
    except ValueError as exc:
        raise FieldFormatError(f"line {lineno}: {exc}") from exc


def loads_text(text):
    lines = text.splitlines()
    if not lines or lines[0].strip() != f"# {TEXT_TAG}":
        raise FieldFormatError("line 1: missing photonpol-field header tag")
    header = {}
    body_start = len(lines)
    for i, line in enumerate(lines[1:], start=2):
        if not line.startswith("#"):
            body_start = i - 1
            break
        key, sep, value = line[1:].partition(":")
        if not sep:
            raise FieldFormatError(f"line {i}: malformed header line")
        key, value = key.strip(), value.strip()
        if key in ("shape",):
            header[key] = _parse_vec(value, int, i)
        elif key in ("spacing", "gauge", "k_origin"):
            header[key] = _parse_vec(value, float, i)
        elif key == "time":
            try:
                header[key] = float(value)
            except ValueError as exc:
                raise FieldFormatError(f"line {i}: bad time value") from exc
        elif key == "columns":
            header[key] = value.split()
        else:
            header[key] = value
    for key in ("space", "shape", "spacing", "gauge", "time", "units", "columns"):
        if key not in header:
            raise FieldFormatError(f"header is missing '{key}'")
    ncol = len(header["columns"])
    body = "\n".join(lines[body_start:])
    try:
        fast = np.loadtxt(io.StringIO(body), dtype=float, ndmin=2)
    except ValueError:
        fast = None
    if fast is not None:
        if fast.size == 0:
            fast = fast.reshape(0, ncol)
        if fast.shape[1] == ncol:
            return _build(header, fast)
    # slow path only to locate the offending line
    rows = []
    for i, line in enumerate(lines[body_start:], start=body_start + 1):
        if not line.strip():
            continue
        toks = line.split()
        if len(toks) != ncol:
            raise FieldFormatError(f"line {i}: expected {ncol} values, found {len(toks)}")
        try:
            rows.append([float(t) for t in toks])
        except ValueError as exc:
            raise FieldFormatError(f"line {i}: {exc}") from exc
    return _build(header, np.asarray(rows, dtype=float).reshape(-1, ncol))


def loads_binary(data):
    if data[:8] != MAGIC:
        raise FieldFormatError("not a photonpol binary field (bad magic)")
    if len(data) < 12:
        raise FieldFormatError("truncated binary header")
    (hlen,) = struct.unpack("<I", data[8:12])
    try:
        header = json.loads(data[12:12 + hlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FieldFormatError(f"bad binary header: {exc}") from exc
    payload = data[12 + hlen:]
    ncol = len(header.get("columns", []))
    if ncol == 0 or len(payload) % (8 * ncol):
        raise FieldFormatError("binary payload size does not match the column count")
    rows = np.frombuffer(payload, dtype="<f8").reshape(-1, ncol).astype(float)
    return _build(header, rows)


def save(obj, path, format="text"):
    if format == "text":
        with open(path, "w", newline="\n") as fh:
            fh.write(dumps_text(obj))
    elif format == "bin":
        with open(path, "wb") as fh:
            fh.write(dumps_binary(obj))
    else:
        raise ValueError(f"unknown format {format!r}")


def load(path):
    """Read either layout, detected from the leading bytes."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data.startswith(MAGIC):
        return loads_binary(data)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FieldFormatError("file is neither a binary nor a text field") from exc
    return loads_text(text)
