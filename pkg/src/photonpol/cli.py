"""Command-line front end.

Exit codes: 0 success, 2 parse/format error, 3 singular gauge, 4 invariant
failure. Every failure prints exactly one line ``ERROR <CODE>: <message>`` to
stderr.
"""

import argparse
import io
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from . import fieldio
from .checks import run_checks, sha256, to_json
from .errors import PolarizationError, SingularGauge
from .frames import frame_matrix, local_frame
from .mfield import (
    MomentumField,
    gauge_transform,
    jones_field,
    make_beam,
    regauge_fixed_field,
    schmidt,
    stokes_field,
)
from . import synthesis

EXIT_OK, EXIT_PARSE, EXIT_SINGULAR, EXIT_INVARIANT = 0, 2, 3, 4
EXAMPLE_BEAMS = ("uniform", "radial", "azimuthal")


class CliError(Exception):
    def __init__(self, code, message, status=EXIT_PARSE):
        super().__init__(message)
        self.code = code
        self.status = status


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("USAGE", message)


Vec3 = Tuple[float, float, float]


class BeamSpec(BaseModel):
    """JSON beam description accepted by ``photonpol beam``."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["uniform-gaussian", "radial", "azimuthal"]
    axis: Vec3 = (0.0, 0.0, 1.0)
    center: float = Field(gt=0)
    width: float = Field(gt=0)
    shape: Tuple[int, int, int]
    spacing: Union[float, Vec3]
    gauge: Vec3
    jones: Optional[Tuple[Tuple[float, float], Tuple[float, float]]] = None
    normalize: bool = True

    @field_validator("shape")
    @classmethod
    def _positive_shape(cls, v):
        if min(v) < 1:
            raise ValueError("grid dimensions must be positive")
        return v

    @field_validator("spacing")
    @classmethod
    def _positive_spacing(cls, v):
        if min(np.atleast_1d(v)) <= 0:
            raise ValueError("spacing must be positive")
        return v

    def build(self):
        jones = (1.0, 0.0)
        if self.jones is not None:
            jones = tuple(complex(re, im) for re, im in self.jones)
        return make_beam(self.kind, self.center, self.width, self.shape, self.spacing,
                         self.gauge, axis=self.axis, jones=jones, normalize=self.normalize)


def load_spec(source):
    """Parse a beam spec from a path or ``example:<name>``."""
    if source.startswith("example:"):
        name = source.split(":", 1)[1]
        if name not in EXAMPLE_BEAMS:
            raise CliError("SPEC", f"unknown example beam {name!r}; choose from {EXAMPLE_BEAMS}")
        text = resources.files("photonpol").joinpath("data", f"{name}.json").read_text()
    else:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise CliError("IO", f"cannot read {source}: {exc.strerror}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError("SPEC", f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    try:
        return BeamSpec.model_validate(raw)
    except ValidationError as exc:
        err = exc.errors()[0]
        where = ".".join(str(p) for p in err["loc"]) or "<root>"
        raise CliError("SPEC", f"{source}: field '{where}': {err['msg']}") from exc


def parse_vec(text):
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        vals = []
    if len(vals) != 3 or not all(np.isfinite(vals)):
        raise CliError("USAGE", f"expected three comma-separated numbers, got {text!r}")
    return np.array(vals)


def _emit(text, out):
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_field(path, want=MomentumField):
    try:
        obj = fieldio.load(path)
    except OSError as exc:
        raise CliError("IO", f"cannot read {path}: {exc.strerror}") from exc
    if not isinstance(obj, want):
        raise CliError("FORMAT", f"{path} is not a {want.__name__} file")
    return obj


def _field_gauge(field, override):
    if override is not None:
        return parse_vec(override)
    if field.gauge is None:
        raise CliError("USAGE", "field file declares no gauge; pass --gauge")
    return field.gauge


def cmd_frame(args):
    k = parse_vec(args.k)
    frame = local_frame(k, parse_vec(args.gauge))
    varpi = frame_matrix(frame)
    w = frame.w
    left = np.max(np.abs(varpi.conj().T @ varpi - np.eye(2)))
    right = np.max(np.abs(varpi @ varpi.conj().T - (np.eye(3) - np.outer(w, w))))
    triad = max(np.max(np.abs(np.cross(frame.u, frame.v) - frame.w)),
                np.max(np.abs(np.cross(frame.v, frame.w) - frame.u)),
                np.max(np.abs(np.cross(frame.w, frame.u) - frame.v)))
    lines = [f"{name} = {' '.join(fieldio.fmt(x) for x in vec)}"
             for name, vec in (("u", frame.u), ("v", frame.v), ("w", frame.w))]
    lines.append("varpi =")
    lines += ["  " + " ".join(fieldio.fmt(x) for x in row.real) for row in varpi]
    lines += [f"residual varpi^H varpi - I2 = {fieldio.fmt(left)}",
              f"residual varpi varpi^H - (I3 - w w^T) = {fieldio.fmt(right)}",
              f"residual triad = {fieldio.fmt(triad)}"]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_beam(args):
    spec = load_spec(args.spec)
    try:
        field = spec.build()
    except SingularGauge:
        raise
    except ValueError as exc:
        raise CliError("SPEC", str(exc)) from exc
    if not args.out:
        raise CliError("USAGE", "beam needs --out")
    fieldio.save(field, args.out, args.format)
    print(f"norm2 = {fieldio.fmt(field.norm2())}")
    print(f"divergence_residual = {fieldio.fmt(synthesis.divergence_check(field))}")
    return EXIT_OK


def cmd_regauge(args):
    field = _load_field(args.field)
    if field.gauge is None:
        raise CliError("USAGE", "field file declares no gauge to regauge from")
    if args.gauge is None:
        raise CliError("USAGE", "regauge needs --gauge")
    if not args.out:
        raise CliError("USAGE", "regauge needs --out")
    new = parse_vec(args.gauge)
    jf = jones_field(field, field.gauge)
    if args.mode == "represent":
        out = gauge_transform(jf, new).to_field()
    else:
        out = regauge_fixed_field(jf, new)
    fieldio.save(out, args.out, args.format)
    print(f"mode = {args.mode}")
    print(f"norm2 = {fieldio.fmt(out.norm2())}")
    return EXIT_OK


def _stokes_table(field, gauge):
    sf = stokes_field(jones_field(field, gauge))
    rows = np.hstack([field.grid.k, sf.components, sf.vectors, sf.void[:, None].astype(float)])
    head = [f"# stokes gauge: {' '.join(fieldio.fmt(x) for x in sf.gauge)}",
            "# columns: kx ky kz s1 s2 s3 sx sy sz void"]
    buf = io.StringIO()
    np.savetxt(buf, rows, fmt=fieldio.FLOAT_FMT)
    return "\n".join(head) + "\n" + buf.getvalue()


def cmd_stokes(args):
    field = _load_field(args.field)
    _emit(_stokes_table(field, _field_gauge(field, args.gauge)), args.out)
    return EXIT_OK


def cmd_schmidt(args):
    field = _load_field(args.field)
    sr = schmidt(jones_field(field, _field_gauge(field, args.gauge)))
    body = {"singular_values": list(sr.singular_values), "probabilities": list(sr.probabilities),
            "entropy": sr.entropy, "gauge": list(sr.gauge), "norm2": sr.norm2,
            "measure": sr.measure}
    _emit(to_json(body) + "\n", args.out)
    return EXIT_OK


def cmd_synth(args):
    field = _load_field(args.field)
    constants = synthesis.constants_for(field.units)
    if args.t:
        field = synthesis.evolve(field, args.t, constants)
    if not args.out:
        raise CliError("USAGE", "synth needs --out")
    try:
        pf = synthesis.position_field(field, constants)
    except ValueError as exc:
        raise CliError("FORMAT", str(exc)) from exc
    fieldio.save(pf, args.out, args.format)
    print(f"divergence_residual = {fieldio.fmt(synthesis.divergence_check(field))}")
    return EXIT_OK


def cmd_check(args):
    field = _load_field(args.field)
    with open(args.field, "rb") as fh:
        digest = sha256(fh.read())
    report = run_checks(field, inputs_digest=digest,
                        gauge=None if args.gauge is None else parse_vec(args.gauge),
                        alt_gauge=None if args.alt_gauge is None else parse_vec(args.alt_gauge),
                        constants=synthesis.constants_for(field.units))
    _emit(to_json(report.as_dict()) + "\n", args.out)
    if not report.passed:
        failed = [r.name for r in report.results if not r.passed]
        raise CliError("INVARIANT", f"failed: {','.join(failed)}", status=EXIT_INVARIANT)
    return EXIT_OK


def build_parser():
    p = Parser(prog="photonpol", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt=False):
        sp.add_argument("--out", help="output path (stdout when omitted, where allowed)")
        if fmt:
            sp.add_argument("--format", choices=("text", "bin"), default="text")

    sp = sub.add_parser("frame", help="print the local frame for one wavevector")
    sp.add_argument("--k", required=True, help="wavevector kx,ky,kz (use --k=-1,0,0 for negatives)")
    sp.add_argument("--gauge", required=True, help="gauge vector x,y,z")
    common(sp)
    sp.set_defaults(func=cmd_frame)

    sp = sub.add_parser("beam", help="build a beam from a JSON spec or example:<name>")
    sp.add_argument("spec")
    common(sp, fmt=True)
    sp.set_defaults(func=cmd_beam)

    sp = sub.add_parser("regauge", help="change the gauge of a stored field")
    sp.add_argument("field")
    sp.add_argument("--gauge", help="new gauge vector x,y,z")
    sp.add_argument("--mode", choices=("represent", "rotate"), default="represent")
    common(sp, fmt=True)
    sp.set_defaults(func=cmd_regauge)

    for name, func, text in (("stokes", cmd_stokes, "per-sample Stokes table"),
                             ("schmidt", cmd_schmidt, "Schmidt entanglement report")):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("field")
        sp.add_argument("--gauge", help="gauge x,y,z (default: the file's gauge)")
        common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("synth", help="synthesize the position-space field")
    sp.add_argument("field")
    sp.add_argument("--t", type=float, default=0.0, help="evolve by this time first")
    common(sp, fmt=True)
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("check", help="run the invariant suite and write a JSON report")
    sp.add_argument("field")
    sp.add_argument("--gauge", help="gauge to test in (default: the file's gauge)")
    sp.add_argument("--alt-gauge", help="second gauge for transformation checks")
    common(sp)
    sp.set_defaults(func=cmd_check)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        status, code, msg = exc.status, exc.code, str(exc)
    except SingularGauge as exc:
        status, code, msg = EXIT_SINGULAR, exc.code, str(exc)
    except PolarizationError as exc:
        status, code, msg = EXIT_PARSE, exc.code, str(exc)
    except OSError as exc:
        status, code, msg = EXIT_PARSE, "IO", str(exc)
    print(f"ERROR {code}: {' '.join(msg.split())}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
