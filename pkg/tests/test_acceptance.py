"""Acceptance criteria, one test each.

Every test records (number, title, passed, detail) so that the terminal summary
prints one PASS/FAIL line per criterion, then asserts the same condition.
Runtime budgets are part of each criterion and are checked against wall time.

Run standalone with ``python tests/test_acceptance.py``.
"""

import math
import sys
import time

import numpy as np
import pytest

from qbattery import harness, liouville, meanfield
from qbattery.eigenmodes import coupling_matrix, eigenfrequencies, supermode_decomposition
from qbattery.liouville import DensityMatrix, FockBasis, build_operators, expectation, iter_evolve, truncation_tail
from qbattery.model import VACUUM, AmplitudePair, SystemParams

from conftest import ACCEPTANCE_RESULTS


def record(number, title, checks, elapsed, budget):
    """``checks`` maps a label to (ok, value text); the runtime budget is appended."""
    checks = dict(checks)
    checks["runtime"] = (elapsed < budget, f"{elapsed:.2f}s < {budget:g}s")
    passed = all(ok for ok, _ in checks.values())
    detail = "; ".join(f"{k} {v or ('yes' if ok else 'no')}{'' if ok else ' [X]'}" for k, (ok, v) in checks.items())
    ACCEPTANCE_RESULTS.append((number, title, passed, detail))
    assert passed, detail


def fig1(**changes):
    base = SystemParams(1.0, 1.0, 0.16, 0.1, 0.84, 0.05, 0.0, 0.0)
    return base.replace(**changes)


def test_criterion_1_single_mode_steady_state():
    start = time.perf_counter()
    p = SystemParams(1.0, 1.0, 0.0, 0.1, 1.0, 0.05, 0.0, 0.0)
    oracle = 2 * p.drive_amplitude / p.gamma_a
    ts = meanfield.simulate(p, VACUUM, t_final=200.0, dt=0.01)
    a_final = abs(ts.a[-1])
    w_final = ts.w_a[-1]
    elapsed = time.perf_counter() - start
    record(1, "single-mode resonant steady state", {
        "|a(200)|-4": (abs(a_final - oracle) <= 1e-6, f"= {a_final - oracle:.3e} (tol 1e-6)"),
        "W_A(200)-16": (abs(w_final - oracle**2) <= 1e-5, f"= {w_final - oracle**2:.3e} (tol 1e-5)"),
    }, elapsed, 1.0)


def test_criterion_2_eigenstructure_identities():
    start = time.perf_counter()
    rng = np.random.default_rng(20261016)
    worst_trace = worst_det = worst_vec = 0.0
    for _ in range(1000):
        omega_a, omega_b = rng.uniform(0.2, 3.0, 2)
        lamb = rng.uniform(max(-0.5, 0.05 - omega_a), 0.5)
        p = SystemParams(omega_a, omega_b, rng.uniform(0.01, 2.0), rng.uniform(0, 0.5),
                         rng.uniform(-2, 3), rng.uniform(0, 0.5), lamb, 0.0)
        sm = supermode_decomposition(p)
        G = coupling_matrix(p).as_array()
        wa, wb, g = p.omega_a_prime, p.omega_b, p.g
        worst_trace = max(worst_trace, abs(sm.lambda_plus + sm.lambda_minus - (wa + wb)))
        worst_det = max(worst_det, abs(sm.lambda_plus * sm.lambda_minus - (wa * wb - g * g)))
        worst_vec = max(
            worst_vec,
            np.abs(G @ sm.v_plus - sm.lambda_plus * sm.v_plus).max(),
            np.abs(G @ sm.v_minus - sm.lambda_minus * sm.v_minus).max(),
        )
    resonant_exact = True
    for _ in range(200):
        omega, g = rng.uniform(0.2, 3.0), rng.uniform(0.01, 2.0)
        lp, lm = eigenfrequencies(coupling_matrix(SystemParams(omega, omega, g, 0.1, 1.0, 0.05)))
        resonant_exact &= (lp == omega + g) and (lm == omega - g)
    elapsed = time.perf_counter() - start
    record(2, "eigenstructure identities", {
        "trace": (worst_trace <= 1e-12, f"{worst_trace:.1e}"),
        "det": (worst_det <= 1e-12, f"{worst_det:.1e}"),
        "Gv-lv": (worst_vec <= 1e-10, f"{worst_vec:.1e}"),
        "resonant exact": (resonant_exact, str(resonant_exact)),
    }, elapsed, 1.0)


def test_criterion_3_rabi_transfer():
    start = time.perf_counter()
    p = SystemParams(1.0, 1.0, 0.16, 0.0, 1.0, 0.0, 0.0, 0.0)
    t_half = math.pi / (2 * p.g)
    rk = meanfield.integrate(p, AmplitudePair(1, 0), t_final=t_half, dt=t_half / 1000)
    b_half = abs(rk.b[-1])
    exact = meanfield.simulate(p, AmplitudePair(1, 0), t_final=100.0, dt=0.01)
    drift_exact = np.abs(np.abs(exact.a) ** 2 + np.abs(exact.b) ** 2 - 1).max()
    rk = meanfield.integrate(p, AmplitudePair(1, 0), t_final=100.0, dt=0.0025)
    drift_rk = np.abs(np.abs(rk.a) ** 2 + np.abs(rk.b) ** 2 - 1).max()
    elapsed = time.perf_counter() - start
    record(3, "Rabi transfer", {
        "|b(pi/2g)|-1": (abs(b_half - 1) <= 1e-8, f"{abs(b_half - 1):.1e}"),
        "norm drift closed form": (drift_exact <= 1e-10, f"{drift_exact:.1e}"),
        "norm drift rk4": (drift_rk <= 1e-10, f"{drift_rk:.1e}"),
    }, elapsed, 1.0)


def test_criterion_4_oracle_equivalence():
    start = time.perf_counter()
    p = fig1(drive_amplitude=0.02)
    basis = FockBasis(10, 10)
    ops = build_operators(basis)
    t, a, b, trace_err, tail = [], [], [], [], []
    for time_k, rho in iter_evolve(DensityMatrix.vacuum(basis), p, t_final=50.0, dt=0.01, sample_stride=5):
        phase = np.exp(-1j * p.drive_frequency * time_k)
        t.append(time_k)
        a.append(phase * expectation(rho, ops.a))
        b.append(phase * expectation(rho, ops.b))
        trace_err.append(abs(rho.trace - 1))
        tail.append(truncation_tail(rho))
    a_mf, b_mf = meanfield.closed_form_series(p, VACUUM, t)
    dev_a = np.abs(np.array(a) - a_mf).max()
    dev_b = np.abs(np.array(b) - b_mf).max()
    min_eig = rho.min_eigenvalue()
    elapsed = time.perf_counter() - start
    record(4, "oracle equivalence", {
        "max|da|": (dev_a < 1e-4, f"{dev_a:.1e}"),
        "max|db|": (dev_b < 1e-4, f"{dev_b:.1e}"),
        "trace drift": (max(trace_err) < 1e-8, f"{max(trace_err):.1e}"),
        "tail": (max(tail) < 1e-8, f"{max(tail):.1e}"),
        "min eig": (min_eig >= -1e-8, f"{min_eig:.1e}"),
    }, elapsed, 120.0)


def test_criterion_5_lamb_shift_absorption():
    start = time.perf_counter()
    shifted = fig1(omega_a=1.0, lamb_shift=0.1)
    absorbed = fig1(omega_a=1.1, lamb_shift=0.0)
    mf = {}
    for method in ("closed_form", "rk4"):
        x = meanfield.simulate(shifted, t_final=200.0, dt=0.01, method=method)
        y = meanfield.simulate(absorbed, t_final=200.0, dt=0.01, method=method)
        mf[method] = max(np.abs(x.a - y.a).max(), np.abs(x.b - y.b).max())
    basis = FockBasis(8, 8)
    kw = dict(t_final=50.0, dt=0.01, sample_stride=10)
    ref = liouville.simulate(absorbed.replace(drive_amplitude=0.02), basis, **kw)
    dm = {}
    for form in ("explicit", "absorbed"):
        s = liouville.simulate(shifted.replace(drive_amplitude=0.02), basis, lamb_term=form, **kw)
        dm[form] = max(np.abs(s.a - ref.a).max(), np.abs(s.b - ref.b).max())
    elapsed = time.perf_counter() - start
    checks = {f"meanfield {k}": (v <= 1e-12, f"{v:.1e}") for k, v in mf.items()}
    checks.update({f"liouville {k}": (v <= 1e-12, f"{v:.1e}") for k, v in dm.items()})
    record(5, "Lamb-shift absorption", checks, elapsed, 60.0)


def test_criterion_6_thermal_fixed_point():
    start = time.perf_counter()
    p = SystemParams(1.0, 1.0, 0.0, 0.0, 1.0, 0.05, 0.0, 0.5)
    # the battery is decoupled (g = 0) and stays in its vacuum, so its cutoff is 1
    basis = FockBasis(12, 1)
    n_a = build_operators(basis).number_a
    t_final = 200.0 / p.gamma_a
    for _, rho in iter_evolve(DensityMatrix.vacuum(basis), p, t_final=t_final, dt=0.1, sample_stride=10**6):
        pass
    occupation = expectation(rho, n_a).real
    # the battery cutoff does not change the charger dynamics: compare against a full (12, 12) run
    full = FockBasis(12, 12)
    short = dict(t_final=100.0, dt=0.1, sample_stride=10**6)
    *_, (_, rho_small) = iter_evolve(DensityMatrix.vacuum(basis), p, **short)
    *_, (_, rho_full) = iter_evolve(DensityMatrix.vacuum(full), p, **short)
    gap = abs(expectation(rho_small, n_a) - expectation(rho_full, build_operators(full).number_a))
    elapsed = time.perf_counter() - start
    record(6, "thermal fixed point", {
        "<n_a>-0.5": (abs(occupation - 0.5) <= 1e-3, f"{occupation - 0.5:.1e}"),
        "cutoff_b 1 vs 12": (gap <= 1e-12, f"{gap:.1e}"),
    }, elapsed, 60.0)


def test_criterion_7_switching_effect():
    start = time.perf_counter()
    contrast, order_reverses = {}, {}
    for name in ("fig1_weak_resonant", "fig2_strong_resonant"):
        minus = harness.run_sweep(harness.build_preset(name, "minus"))
        plus = harness.run_sweep(harness.build_preset(name, "plus"))
        contrast[name] = dict(harness.switching_contrast(minus, plus))
        d_minus = minus.row(-0.1).w_a_final - minus.row(0.1).w_a_final
        d_plus = plus.row(-0.1).w_a_final - plus.row(0.1).w_a_final
        order_reverses[name] = d_minus * d_plus < 0
    c1, c2 = contrast["fig1_weak_resonant"], contrast["fig2_strong_resonant"]
    elapsed = time.perf_counter() - start
    record(7, "switching effect", {
        "fig1 sign flip": (c1[-0.1] * c1[0.1] < 0, f"({c1[-0.1]:+.4f}, {c1[0.1]:+.4f})"),
        "fig2 sign flip": (c2[-0.1] * c2[0.1] < 0, f"({c2[-0.1]:+.4f}, {c2[0.1]:+.4f})"),
        "fig1 w_a order reverses": (order_reverses["fig1_weak_resonant"], ""),
        "fig2 w_a order reverses": (order_reverses["fig2_strong_resonant"], ""),
        "fig2 weaker": (all(abs(c2[d]) < abs(c1[d]) for d in (-0.1, 0.1)), ""),
    }, elapsed, 10.0)


def test_criterion_8_frequency_correction():
    start = time.perf_counter()
    preset = harness.build_preset("fig1_weak_resonant", "minus")
    params = preset.params_for(0.1)
    corrected = meanfield.simulate(params, t_final=preset.t_final, dt=preset.dt).w_b[-1]
    p0 = preset.base_params
    bare = meanfield.simulate(params.replace(drive_frequency=p0.omega_a - p0.g),
                              t_final=preset.t_final, dt=preset.dt).w_b[-1]
    gain = corrected / bare - 1
    elapsed = time.perf_counter() - start
    record(8, "frequency-correction benefit", {
        "relative gain": (gain >= 0.05, f"{gain:.3g} (w_b {corrected:.4g} vs {bare:.4g})"),
    }, elapsed, 5.0)


def test_criterion_9_integrator_order():
    start = time.perf_counter()
    p = fig1()
    errors = []
    for dt in (0.02, 0.01):
        rk = meanfield.integrate(p, VACUUM, t_final=200.0, dt=dt)
        a, b = meanfield.closed_form_series(p, VACUUM, rk.t)
        errors.append(max(np.abs(rk.a - a).max(), np.abs(rk.b - b).max()))
    ratio = errors[0] / errors[1]
    elapsed = time.perf_counter() - start
    record(9, "integrator order", {
        "error ratio": (ratio >= 12, f"{ratio:.2f} ({errors[0]:.2e} -> {errors[1]:.2e})"),
    }, elapsed, 5.0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
