"""Open quantum battery: two coupled oscillators with a Lamb-shifted, driven, lossy charger."""

from .eigenmodes import (
    CouplingMatrix,
    SupermodeDecomposition,
    coupling_matrix,
    eigenfrequencies,
    resonant_drive_frequency,
    supermode_decomposition,
)
from .ergotropy import annotate, ergotropy_from_amplitude
from .errors import NumericalError, QBatteryError, ValidationError
from .harness import build_preset, emit, run_sweep, switching_contrast
from .model import VACUUM, AmplitudePair, SystemParams, TimeSeries, thermal_occupation, validate

__all__ = [
    "AmplitudePair",
    "CouplingMatrix",
    "NumericalError",
    "QBatteryError",
    "SupermodeDecomposition",
    "SystemParams",
    "TimeSeries",
    "VACUUM",
    "ValidationError",
    "annotate",
    "build_preset",
    "coupling_matrix",
    "eigenfrequencies",
    "emit",
    "ergotropy_from_amplitude",
    "resonant_drive_frequency",
    "run_sweep",
    "supermode_decomposition",
    "switching_contrast",
    "thermal_occupation",
    "validate",
]
