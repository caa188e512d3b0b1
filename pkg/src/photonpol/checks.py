"""Invariant suite run by ``photonpol check`` on a stored field.

Each check measures one residual and compares it with a fixed tolerance.
Relative residuals are scaled by the largest per-sample magnitude of the
quantity involved so the tolerances do not depend on the field's
normalization.
"""

import hashlib
import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from . import algebra, synthesis
from .errors import SingularGauge
from .frames import as_gauge, singular_mask
from .mfield import (
    gauge_angles,
    gauge_transform,
    jones_field,
    regauge_by_rotation,
    regauge_fixed_field,
    schmidt,
    stokes_field,
)

CANDIDATE_GAUGES = (
    (1.0, 0.0, 0.0),
    (0.0, 1.0, 0.0),
    (0.0, 0.0, 1.0),
    (1.0, 1.0, 1.0),
)
EVOLVE_TIMES = (1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1000.0)


@dataclass
class CheckResult:
    name: str
    residual: float
    tolerance: float
    passed: bool
    comparison: str = "<="

    def as_dict(self):
        return {"name": self.name, "residual": self.residual, "tolerance": self.tolerance,
                "comparison": self.comparison, "passed": self.passed}


@dataclass
class RunReport:
    command: str
    inputs_digest: str
    gauge: list
    alt_gauge: list
    results: list = field(default_factory=list)
    values: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    def add(self, name, residual, tolerance):
        residual = float(residual)
        self.results.append(CheckResult(name, residual, tolerance,
                                        bool(np.isfinite(residual) and residual <= tolerance)))

    def add_band(self, name, value, lo, hi):
        value = float(value)
        self.results.append(CheckResult(name, value, hi, bool(lo <= value <= hi),
                                        comparison=f"in [{to_json(lo)}, {to_json(hi)}]"))

    def as_dict(self):
        body = {
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "gauge": self.gauge,
            "alt_gauge": self.alt_gauge,
            "invariants": [r.as_dict() for r in self.results],
            "values": self.values,
            "passed": self.passed,
        }
        body["outputs_digest"] = sha256(to_json({k: body[k] for k in ("invariants", "values")}))
        return body


def to_json(obj, indent=0):
    """JSON with every float written to 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, bool) or obj is None:
        return {True: "true", False: "false", None: "null"}[obj]
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return "%.17g" % obj if np.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{to_json(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(to_json(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + to_json(v, indent + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def sha256(data):
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def pick_alt_gauge(grid, gauge, margin=1e-6):
    """First candidate gauge distinct from ``gauge`` that is well clear of every sample."""
    for cand in CANDIDATE_GAUGES:
        cand = as_gauge(cand)
        if np.allclose(cand, gauge):
            continue
        if not np.any(singular_mask(grid.k, cand, tol=margin)):
            return cand
    raise SingularGauge("no candidate gauge is nonsingular on this grid")


def _rel(diff, ref):
    scale = float(np.max(np.abs(ref))) if np.size(ref) else 0.0
    return float(np.max(np.abs(diff))) / scale if scale > 0 else float(np.max(np.abs(diff)))


def run_checks(field, inputs_digest="", gauge=None, alt_gauge=None,
               constants=synthesis.NATURAL, command="check"):
    gauge = as_gauge(gauge if gauge is not None else
                     field.gauge if field.gauge is not None else (0.0, 0.0, 1.0))
    alt = as_gauge(alt_gauge) if alt_gauge is not None else pick_alt_gauge(field.grid, gauge)
    report = RunReport(command=command, inputs_digest=inputs_digest,
                       gauge=[float(x) for x in gauge], alt_gauge=[float(x) for x in alt])

    # Pauli algebra
    worst = 0.0
    for i, j in itertools.product((1, 2, 3), repeat=2):
        expected = sum(2j * algebra.levi_civita(i, j, k) * algebra.pauli(k) for k in (1, 2, 3))
        worst = max(worst, float(np.max(np.abs(algebra.commutator(i, j) - expected))))
    report.add("pauli_commutators", worst, 1e-15)

    report.add("transversality", synthesis.divergence_check(field), 1e-12)
    report.values["norm2"] = field.norm2()

    jf = jones_field(field, gauge)
    varpi = jf.varpi
    eye2 = np.einsum("nia,nib->nab", varpi.conj(), varpi) - np.eye(2)
    proj = np.einsum("nia,nja->nij", varpi, varpi.conj()) - (
        np.eye(3) - jf.frame.w[:, :, None] * jf.frame.w[:, None, :])
    report.add("quasi_unitarity_left", np.max(np.abs(eye2)), 1e-12)
    report.add("quasi_unitarity_projector", np.max(np.abs(proj)), 1e-12)

    fmax = field.f
    report.add("jones_roundtrip", _rel(jf.to_field().f - field.f, fmax), 1e-12)

    sf = stokes_field(jf)
    live = ~jf.void
    report.add("stokes_purity",
               np.max(np.abs(np.linalg.norm(sf.vectors[live], axis=1) - 1.0)), 1e-10)

    phi = gauge_angles(jf, alt)
    jf2 = gauge_transform(jf, alt)
    sf2 = stokes_field(jf2)
    w = field.grid.w
    expected = np.einsum("nij,nj->ni", algebra.rot_so3(w, -phi), sf.vectors)
    report.add("gauge_covariance_polarization", np.max(np.abs(sf2.vectors - expected)[live]), 1e-10)
    report.add("gauge_representation_invariance", _rel(jf2.to_field().f - field.f, fmax), 1e-12)
    report.add("helicity_invariance",
               np.max(np.abs(sf2.components[:, 2] - sf.components[:, 2])), 1e-12)
    direct = jones_field(field, alt)
    report.add("gauge_transform_two_path", np.max(np.abs(direct.jones - jf2.jones)[live]), 1e-10)

    rotated = regauge_fixed_field(jf, alt)
    report.add("regauge_two_path",
               _rel(rotated.f - regauge_by_rotation(field, gauge, alt).f, fmax), 1e-12)
    back = jones_field(rotated, gauge)
    s_rot = stokes_field(back).vectors
    expected = np.einsum("nij,nj->ni", algebra.rot_so3(w, 2.0 * phi), sf.vectors)
    report.add("double_angle_polarization", np.max(np.abs(s_rot - expected)[live]), 1e-10)
    report.add("regauge_norm_invariance",
               abs(rotated.norm2() - field.norm2()) / field.norm2(), 1e-12)

    mag = np.abs(field.f)
    worst = 0.0
    for t in EVOLVE_TIMES:
        worst = max(worst, _rel(np.abs(synthesis.evolve(field, t, constants).f) - mag, mag))
    report.add("evolution_unitarity", worst, 1e-14)
    e0 = synthesis.energy(field, constants)
    worst = max(abs(synthesis.energy(synthesis.evolve(field, t, constants), constants) - e0) / e0
                for t in EVOLVE_TIMES)
    report.add("energy_conservation", worst, 1e-12)
    ab = synthesis.evolve(synthesis.evolve(field, 0.7, constants), 1.9, constants)
    report.add("evolution_group", _rel(ab.f - synthesis.evolve(field, 2.6, constants).f, fmax),
               1e-12)
    report.add_band("schrodinger_fd_order", _fd_order(field, constants), 3.5, 4.5)

    if field.grid.is_uniform:
        pf = synthesis.position_field(field, constants)
        lhs = float(np.sum(np.abs(pf.E) ** 2)) * pf.cell_volume
        weight = constants.hbar * synthesis.omega(field.grid, constants) / constants.epsilon0
        rhs = float(np.sum(weight * np.sum(np.abs(field.f) ** 2, axis=1) * field.grid.weights))
        report.add("parseval", abs(lhs - rhs) / rhs, 1e-10)
        via = synthesis.position_field(jf2.to_field(), constants)
        report.add("synthesis_gauge_independence", _rel(via.E - pf.E, pf.E), 1e-12)

    sr = schmidt(jf)
    report.add("schmidt_norm", abs(sum(s * s for s in sr.singular_values) - field.norm2()), 1e-10)
    report.add_band("schmidt_entropy_range", sr.entropy, 0.0, float(np.log(2.0)) + 1e-12)
    report.values["schmidt_entropy"] = sr.entropy
    report.values["schmidt_singular_values"] = list(sr.singular_values)
    report.values["schmidt_entropy_alt_gauge"] = schmidt(jf2).entropy
    return report


def schrodinger_residual(field, t, dt, constants=synthesis.NATURAL):
    """max |i (f(t+dt) - f(t-dt)) / (2 dt) - omega f(t)| over samples."""
    plus = synthesis.evolve(field, t + dt, constants).f
    minus = synthesis.evolve(field, t - dt, constants).f
    now = synthesis.evolve(field, t, constants).f
    om = synthesis.omega(field.grid, constants)[:, None]
    return float(np.max(np.abs(1j * (plus - minus) / (2.0 * dt) - om * now)))


def _fd_order(field, constants):
    om = float(np.max(synthesis.omega(field.grid, constants)))
    dt = 0.05 / om
    return schrodinger_residual(field, 0.3, dt, constants) / schrodinger_residual(
        field, 0.3, dt / 2.0, constants)
