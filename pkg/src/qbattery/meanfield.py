"""Zero-temperature amplitude equations for the driven charger/battery pair.

    d<a>/dt = -i F exp(-i omega_f t) - i g <b> - (gamma_a/2 + i omega_a') <a>
    d<b>/dt = -i g <a> - i omega_b <b>

Two independent solvers are provided: a fixed-step RK4 integrator in the lab
frame (``integrate``) and the exact solution of the autonomous system in the
frame rotating at omega_f (``closed_form``).
"""

from __future__ import annotations

import cmath
import math
from typing import Literal

import numpy as np
import scipy.linalg

from .eigenmodes import coupling_matrix, eigenfrequencies
from .ergotropy import annotate
from .errors import NumericalError, ValidationError
from .model import VACUUM, AmplitudePair, SystemParams, TimeSeries, validate

DEFAULT_DT = 0.01
DEFAULT_T_FINAL = 200.0

# resolution guard: dt * (fastest lab-frame frequency) must not exceed this
MAX_PHASE_PER_STEP = 0.1


def _require_zero_temperature(params: SystemParams) -> None:
    if params.n_thermal != 0:
        raise ValidationError(
            f"mean-field engine valid only at N = 0 (got n_thermal={params.n_thermal}); use the liouville engine"
        )


def max_time_step(params: SystemParams) -> float:
    """Largest dt accepted by the fixed-step integrators."""
    lam_plus, _ = eigenfrequencies(coupling_matrix(params))
    fastest = max(params.omega_a_prime, params.omega_b, lam_plus)
    return MAX_PHASE_PER_STEP / fastest


def check_time_grid(params: SystemParams, t_final: float, dt: float) -> int:
    """Validate ``(t_final, dt)`` and return the number of RK4 steps."""
    if not (t_final > 0 and math.isfinite(t_final)):
        raise ValidationError(f"t_final must be positive and finite, got {t_final}")
    if not (dt > 0 and math.isfinite(dt)):
        raise ValidationError(f"dt must be positive and finite, got {dt}")
    dt_max = max_time_step(params)
    if dt > dt_max * (1 + 1e-12):
        raise ValidationError(f"time step dt={dt} too coarse; maximal admissible dt is {dt_max:.6g}")
    return step_count(t_final, dt)


def step_count(t_final: float, dt: float) -> int:
    """floor(t_final/dt), tolerant of round-off when dt divides t_final."""
    ratio = t_final / dt
    nearest = round(ratio)
    if abs(ratio - nearest) <= 1e-9 * max(1.0, ratio):
        return int(nearest)
    return int(math.floor(ratio))


def _derivs(t, a, b, F, wf, g, decay, wb):
    da = -1j * F * cmath.exp(-1j * wf * t) - 1j * g * b - decay * a
    db = -1j * g * a - 1j * wb * b
    return da, db


def _coefficients(params: SystemParams):
    decay = complex(0.5 * params.gamma_a, params.omega_a + params.lamb_shift)
    return (params.drive_amplitude, params.drive_frequency, params.g, decay, params.omega_b)


def rhs(t: float, state: AmplitudePair, params: SystemParams) -> AmplitudePair:
    """Time derivatives of the lab-frame amplitudes."""
    _require_zero_temperature(validate(params))
    return AmplitudePair(*_derivs(t, state.a, state.b, *_coefficients(params)))


def integrate(
    params: SystemParams,
    initial: AmplitudePair = VACUUM,
    t_final: float = DEFAULT_T_FINAL,
    dt: float = DEFAULT_DT,
) -> TimeSeries:
    """Classical RK4 with fixed step ``dt``; one record per step, t = k*dt."""
    _require_zero_temperature(validate(params))
    n_steps = check_time_grid(params, t_final, dt)
    coeffs = _coefficients(params)

    a, b = initial.a, initial.b
    a_out = np.empty(n_steps + 1, dtype=complex)
    b_out = np.empty(n_steps + 1, dtype=complex)
    a_out[0], b_out[0] = a, b
    half = 0.5 * dt
    sixth = dt / 6.0
    for k in range(n_steps):
        t = k * dt
        k1a, k1b = _derivs(t, a, b, *coeffs)
        k2a, k2b = _derivs(t + half, a + half * k1a, b + half * k1b, *coeffs)
        k3a, k3b = _derivs(t + half, a + half * k2a, b + half * k2b, *coeffs)
        k4a, k4b = _derivs(t + dt, a + dt * k3a, b + dt * k3b, *coeffs)
        a = a + sixth * (k1a + 2 * k2a + 2 * k3a + k4a)
        b = b + sixth * (k1b + 2 * k2b + 2 * k3b + k4b)
        a_out[k + 1], b_out[k + 1] = a, b
    if not (np.all(np.isfinite(a_out)) and np.all(np.isfinite(b_out))):
        raise NumericalError("RK4 trajectory diverged")
    times = np.arange(n_steps + 1) * dt
    return annotate(times, a_out, b_out, params)


def drift_matrix(params: SystemParams) -> tuple[np.ndarray, np.ndarray]:
    """``(M, c)`` of the rotating-frame system dx/dt = M x + c."""
    detuning_a = params.omega_a_prime - params.drive_frequency
    detuning_b = params.omega_b - params.drive_frequency
    g = params.g
    M = np.array(
        [[-0.5 * params.gamma_a - 1j * detuning_a, -1j * g], [-1j * g, -1j * detuning_b]],
        dtype=complex,
    )
    c = np.array([-1j * params.drive_amplitude, 0.0], dtype=complex)
    return M, c


def _fixed_point(M: np.ndarray, c: np.ndarray) -> np.ndarray:
    """A point with M x + c = 0; min-norm when M is singular but consistent."""
    x, *_ = np.linalg.lstsq(M, -c, rcond=None)
    scale = np.abs(M).max() * np.abs(x).max() + np.abs(c).max()
    if np.abs(M @ x + c).max() > 1e-12 * max(scale, 1e-300):
        raise NumericalError("resonant undamped drive: secular growth, no steady state")
    return x


def steady_state(params: SystemParams) -> AmplitudePair:
    """Rotating-frame fixed point -M^{-1} c (requires gamma_a > 0)."""
    _require_zero_temperature(validate(params))
    if params.gamma_a == 0:
        raise ValidationError("no steady state without dissipation (gamma_a = 0)")
    x = _fixed_point(*drift_matrix(params))
    return AmplitudePair(x[0], x[1])


def _propagator(M: np.ndarray):
    """Return ``f(times) -> exp(M t)`` stacked over times."""
    evals, V = np.linalg.eig(M)
    if np.linalg.cond(V) < 1e8:
        V_inv = np.linalg.inv(V)

        def expm_t(times):
            phases = np.exp(np.multiply.outer(times, evals))
            return np.einsum("ij,tj,jk->tik", V, phases, V_inv)

        return expm_t

    # near an exceptional point the eigenbasis is ill-conditioned
    def expm_t(times):
        return np.stack([scipy.linalg.expm(M * t) for t in times])

    return expm_t


def closed_form_series(params: SystemParams, initial: AmplitudePair, times) -> tuple[np.ndarray, np.ndarray]:
    """Exact lab-frame amplitudes at each of ``times``; returns ``(a, b)`` arrays."""
    _require_zero_temperature(validate(params))
    times = np.atleast_1d(np.asarray(times, dtype=float))
    M, c = drift_matrix(params)
    x_ss = _fixed_point(M, c)
    # rotating and lab frames coincide at t = 0
    offset = initial.as_array() - x_ss
    x_rot = _propagator(M)(times) @ offset + x_ss
    x_lab = x_rot * np.exp(-1j * params.drive_frequency * times)[:, None]
    # the eigenbasis round trip leaves ~1e-17 residue; pin t = 0 to the initial state
    x_lab[times == 0] = initial.as_array()
    return x_lab[:, 0], x_lab[:, 1]


def closed_form(params: SystemParams, initial: AmplitudePair, t: float) -> AmplitudePair:
    a, b = closed_form_series(params, initial, [t])
    return AmplitudePair(a[0], b[0])


def simulate(
    params: SystemParams,
    initial: AmplitudePair = VACUUM,
    t_final: float = DEFAULT_T_FINAL,
    dt: float = DEFAULT_DT,
    method: Literal["closed_form", "rk4"] = "closed_form",
) -> TimeSeries:
    """Trajectory sampled at t = k*dt.

    ``closed_form`` is exact where a rotating-frame fixed point exists and falls
    back to RK4 otherwise (undamped drive at an eigenfrequency).
    """
    if method == "rk4":
        return integrate(params, initial, t_final, dt)
    if method != "closed_form":
        raise ValidationError(f"unknown mean-field method {method!r}")
    n_steps = check_time_grid(params, t_final, dt)
    times = np.arange(n_steps + 1) * dt
    try:
        a, b = closed_form_series(params, initial, times)
    except NumericalError:
        return integrate(params, initial, t_final, dt)
    return annotate(times, a, b, params)
