"""Normal modes of the Lamb-shift-renormalized charger/battery pair.

The quadratic part of the effective Hamiltonian is (a^dag, b^dag) G (a, b)^T
with the real symmetric matrix

    G = [[omega_a + lamb_shift, g],
         [g,                    omega_b]].

Its eigenvalues lambda_plus >= lambda_minus are the resonances of the coupled
system. The supermodes are

    C_plus  = sin(alpha) a + cos(alpha) b
    C_minus = cos(alpha) a - sin(alpha) b

with cos(alpha) = -g / norm < 0 fixing the sign convention, so that the drive
F on the charger splits into F sin(alpha) on C_plus and F cos(alpha) on C_minus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ValidationError
from .model import SystemParams, validate

Branch = Literal["plus", "minus"]
BRANCHES: tuple[str, ...] = ("minus", "plus")


@dataclass(frozen=True)
class CouplingMatrix:
    m11: float
    m12: float
    m21: float
    m22: float

    def __post_init__(self):
        if self.m12 != self.m21:
            raise ValidationError(f"coupling matrix must be symmetric, got m12={self.m12}, m21={self.m21}")

    @property
    def g(self) -> float:
        return self.m12

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]], dtype=float)


@dataclass(frozen=True)
class SupermodeDecomposition:
    lambda_plus: float
    lambda_minus: float
    sin_alpha: float
    cos_alpha: float
    drive_plus: float
    drive_minus: float

    @property
    def v_plus(self) -> np.ndarray:
        return np.array([self.sin_alpha, self.cos_alpha])

    @property
    def v_minus(self) -> np.ndarray:
        return np.array([self.cos_alpha, -self.sin_alpha])

    def as_dict(self) -> dict[str, float]:
        return {
            "lambda_plus": self.lambda_plus,
            "lambda_minus": self.lambda_minus,
            "sin_alpha": self.sin_alpha,
            "cos_alpha": self.cos_alpha,
            "drive_plus": self.drive_plus,
            "drive_minus": self.drive_minus,
        }


def coupling_matrix(params: SystemParams) -> CouplingMatrix:
    return CouplingMatrix(
        m11=params.omega_a + params.lamb_shift,
        m12=params.g,
        m21=params.g,
        m22=params.omega_b,
    )


def _half_split(G: CouplingMatrix) -> tuple[float, float, float]:
    """Return (mean, half_detuning, radius) of the 2x2 eigenproblem."""
    mean = 0.5 * (G.m11 + G.m22)
    half_det = 0.5 * (G.m11 - G.m22)
    radius = math.hypot(half_det, G.g)
    return mean, half_det, radius


def eigenfrequencies(G: CouplingMatrix) -> tuple[float, float]:
    """Closed-form eigenvalues ``(lambda_plus, lambda_minus)`` of G."""
    mean, _, radius = _half_split(G)
    return mean + radius, mean - radius


def supermode_decomposition(params: SystemParams) -> SupermodeDecomposition:
    """Eigenfrequencies, mixing angle and per-supermode drive amplitudes.

    The numerator of sin(alpha) is (omega_b - lambda_plus). On resonance
    (omega_a' = omega_b) this is the familiar (omega - lambda_plus); off
    resonance it is the choice that keeps (sin, cos) an eigenvector of G.
    """
    validate(params)
    if params.g == 0:
        raise ValidationError("supermodes undefined for decoupled system (g = 0)")
    G = coupling_matrix(params)
    lam_plus, lam_minus = eigenfrequencies(G)
    _, half_det, radius = _half_split(G)
    g = params.g
    # omega_b - lambda_plus = -(half_det + radius), evaluated without cancellation
    if half_det >= 0:
        shift = half_det + radius
    else:
        shift = g * g / (radius - half_det)
    numerator = -shift
    norm = math.hypot(g, numerator)
    sin_alpha = numerator / norm
    cos_alpha = -g / norm
    F = params.drive_amplitude
    return SupermodeDecomposition(
        lambda_plus=lam_plus,
        lambda_minus=lam_minus,
        sin_alpha=sin_alpha,
        cos_alpha=cos_alpha,
        drive_plus=F * sin_alpha,
        drive_minus=F * cos_alpha,
    )


def resonant_drive_frequency(params: SystemParams, branch: Branch) -> float:
    """lambda_plus or lambda_minus of the renormalized coupling matrix."""
    if branch not in BRANCHES:
        raise ValidationError(f"branch must be one of {BRANCHES}, got {branch!r}")
    lam_plus, lam_minus = eigenfrequencies(coupling_matrix(validate(params)))
    return lam_plus if branch == "plus" else lam_minus
