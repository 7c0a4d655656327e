"""Extractable work of the charger and the battery.

For an oscillator that starts in its ground state and evolves under this
linear model the reduced state is a displaced (thermal) state, whose
ergotropy with respect to H_i = omega_i o^dag o is omega_i |<o>|^2.
The bare frequencies weight the energies; the Lamb shift only enters through
the dynamics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import SystemParams, TimeSeries


@dataclass(frozen=True)
class EnergyRecord:
    t: float
    w_a: float
    w_b: float


def ergotropy_from_amplitude(omega_i, amplitude):
    """omega_i * |amplitude|^2; works elementwise on arrays."""
    return omega_i * np.abs(amplitude) ** 2


def annotate(times, a, b, params: SystemParams, extra: dict | None = None) -> TimeSeries:
    """Attach w_a = omega_a |a|^2 and w_b = omega_b |b|^2 to a raw trajectory."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return TimeSeries(
        t=times,
        a=a,
        b=b,
        w_a=ergotropy_from_amplitude(params.omega_a, a),
        w_b=ergotropy_from_amplitude(params.omega_b, b),
        extra=dict(extra or {}),
    )


def energy_records(series: TimeSeries) -> list[EnergyRecord]:
    return [EnergyRecord(float(t), float(wa), float(wb)) for t, wa, wb in zip(series.t, series.w_a, series.w_b)]
