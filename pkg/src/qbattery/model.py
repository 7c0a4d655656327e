"""Physical parameters and value types shared by every engine.

Units: every frequency and rate is measured in a reference angular frequency
omega (so omega = 1 numerically), times in 1/omega, with hbar = k_B = 1.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field, fields

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class SystemParams:
    """Parameters of the driven charger (mode a) coupled to the battery (mode b).

    ``drive_frequency`` may be zero or negative: in the strong-coupling presets
    the lower eigenfrequency lambda_minus = omega - g is below zero and the
    charger is still driven there.
    """

    omega_a: float
    omega_b: float
    g: float
    drive_amplitude: float
    drive_frequency: float
    gamma_a: float
    lamb_shift: float = 0.0
    n_thermal: float = 0.0

    @property
    def omega_a_prime(self) -> float:
        """Charger frequency renormalized by the Lamb shift."""
        return self.omega_a + self.lamb_shift

    def replace(self, **changes) -> "SystemParams":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        unknown = set(changes) - set(values)
        if unknown:
            raise ValidationError(f"unknown parameter(s): {sorted(unknown)}")
        values.update(changes)
        return SystemParams(**values)

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def validate(params: SystemParams) -> SystemParams:
    """Return ``params`` unchanged, or raise on the first violated invariant."""
    for f in fields(params):
        value = getattr(params, f.name)
        if not isinstance(value, numbers.Real) or isinstance(value, bool):
            raise ValidationError(f"{f.name}: expected a real number, got {value!r}")
        if not math.isfinite(value):
            raise ValidationError(f"{f.name}: non-finite value {value!r}")
    if params.omega_a <= 0:
        raise ValidationError(f"omega_a: non-positive frequency {params.omega_a}")
    if params.omega_b <= 0:
        raise ValidationError(f"omega_b: non-positive frequency {params.omega_b}")
    if params.g < 0:
        raise ValidationError(f"g: negative coupling {params.g}")
    if params.drive_amplitude < 0:
        raise ValidationError(f"drive_amplitude: negative drive amplitude {params.drive_amplitude}")
    if params.gamma_a < 0:
        raise ValidationError(f"gamma_a: negative decay rate {params.gamma_a}")
    if params.n_thermal < 0:
        raise ValidationError(f"n_thermal: negative thermal occupation {params.n_thermal}")
    if params.omega_a_prime <= 0:
        raise ValidationError(
            f"omega_a + lamb_shift: renormalized frequency non-positive ({params.omega_a_prime})"
        )
    return params


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation 1/(exp(omega/T) - 1); exactly 0 at T = 0."""
    if omega <= 0:
        raise ValidationError(f"omega must be positive, got {omega}")
    if temperature < 0:
        raise ValidationError(f"temperature must be non-negative, got {temperature}")
    if temperature == 0:
        return 0.0
    x = omega / temperature
    if x > 700.0:  # expm1 overflows past ~709
        return 0.0
    return 1.0 / math.expm1(x)


@dataclass(frozen=True)
class AmplitudePair:
    """Mean-field amplitudes <a> and <b> at one instant."""

    a: complex = 0j
    b: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ValidationError(f"non-finite amplitude ({self.a}, {self.b})")

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b], dtype=complex)


VACUUM = AmplitudePair()


@dataclass(eq=False)
class TimeSeries:
    """Column-oriented trajectory of amplitudes and energies.

    ``extra`` holds engine-specific diagnostics (the density-matrix engine adds
    ``trace_err`` and ``trunc_tail``); its insertion order is the column order.
    """

    t: np.ndarray
    a: np.ndarray
    b: np.ndarray
    w_a: np.ndarray
    w_b: np.ndarray
    extra: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.a = np.asarray(self.a, dtype=complex)
        self.b = np.asarray(self.b, dtype=complex)
        self.w_a = np.asarray(self.w_a, dtype=float)
        self.w_b = np.asarray(self.w_b, dtype=float)
        self.extra = {k: np.asarray(v, dtype=float) for k, v in self.extra.items()}
        n = len(self.t)
        for name in ("a", "b", "w_a", "w_b"):
            if len(getattr(self, name)) != n:
                raise ValidationError(f"column {name!r} has length {len(getattr(self, name))}, expected {n}")
        for name, col in self.extra.items():
            if len(col) != n:
                raise ValidationError(f"column {name!r} has length {len(col)}, expected {n}")
        if n > 1 and not np.all(np.diff(self.t) > 0):
            raise ValidationError("time stamps must be strictly increasing")

    def __len__(self) -> int:
        return len(self.t)

    def records(self):
        """Yield ``(t, a, b, w_a, w_b)`` tuples in time order."""
        for row in zip(self.t, self.a, self.b, self.w_a, self.w_b):
            yield tuple(x.item() for x in row)

    @property
    def final(self) -> AmplitudePair:
        return AmplitudePair(self.a[-1], self.b[-1])
