"""Momentum-space photon polarization toolkit.

Local gauge frames, Jones/Stokes algebra on vector wavefunctions, gauge
transformations, time evolution, position-space synthesis and a Schmidt
measure of polarization-momentum entanglement.
"""

from .errors import (
    AllZeroField,
    FieldFormatError,
    PolarizationError,
    SingularGauge,
    TransversalityViolation,
)

__version__ = "0.1.0"

__all__ = [
    "AllZeroField",
    "FieldFormatError",
    "PolarizationError",
    "SingularGauge",
    "TransversalityViolation",
]
