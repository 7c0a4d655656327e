"""Lindblad master-equation oracle on a truncated two-mode Fock space.

The density matrix is propagated in the frame rotating at the drive frequency,
where the Hamiltonian is time independent:

    H = (omega_a' - omega_f) a^dag a + (omega_b - omega_f) b^dag b
        + g (a b^dag + b a^dag) + F (a + a^dag)

    drho/dt = -i[H, rho] + gamma_a (N + 1) D[a] rho + gamma_a N D[a^dag] rho

The Lamb-shift commutator -i lamb_shift [a^dag a, rho] is absorbed into
omega_a' = omega_a + lamb_shift, since
-i[omega_a a^dag a, rho] - i lamb_shift [a^dag a, rho] = -i[omega_a' a^dag a, rho].
``lamb_term="explicit"`` keeps it as a separate commutator instead, which is
how that identity is checked.

Basis ordering: |n_a, n_b> has flat index n_a * (cutoff_b + 1) + n_b.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Literal, NamedTuple

import numpy as np
import scipy.sparse as sp

from .ergotropy import annotate
from .errors import NumericalError, ValidationError
from .meanfield import DEFAULT_DT, DEFAULT_T_FINAL, check_time_grid
from .model import SystemParams, TimeSeries, validate

LambTerm = Literal["absorbed", "explicit"]

TRACE_DRIFT_LIMIT = 1e-6
NEGATIVE_POPULATION_LIMIT = -1e-8


@dataclass(frozen=True)
class FockBasis:
    cutoff_a: int
    cutoff_b: int

    def __post_init__(self):
        for name in ("cutoff_a", "cutoff_b"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
                raise ValidationError(f"{name} must be an integer >= 1, got {value!r}")

    @property
    def dim(self) -> int:
        return (self.cutoff_a + 1) * (self.cutoff_b + 1)

    def index(self, n_a: int, n_b: int) -> int:
        if not (0 <= n_a <= self.cutoff_a and 0 <= n_b <= self.cutoff_b):
            raise ValidationError(f"Fock state |{n_a}, {n_b}> outside basis {self}")
        return n_a * (self.cutoff_b + 1) + n_b

    def occupations(self, flat: int) -> tuple[int, int]:
        return divmod(flat, self.cutoff_b + 1)


class Operators(NamedTuple):
    a: sp.csr_matrix
    a_dagger: sp.csr_matrix
    b: sp.csr_matrix
    b_dagger: sp.csr_matrix
    number_a: sp.csr_matrix
    number_b: sp.csr_matrix
    identity: sp.csr_matrix


def _ladder(cutoff: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), offsets=1, format="csr")


def build_operators(basis: FockBasis) -> Operators:
    eye_a = sp.identity(basis.cutoff_a + 1, format="csr")
    eye_b = sp.identity(basis.cutoff_b + 1, format="csr")
    a = sp.kron(_ladder(basis.cutoff_a), eye_b, format="csr").astype(complex)
    b = sp.kron(eye_a, _ladder(basis.cutoff_b), format="csr").astype(complex)
    a_dag = a.conj().T.tocsr()
    b_dag = b.conj().T.tocsr()
    # exact integer diagonals; a_dag @ a would carry sqrt(n)^2 round-off
    n_a = sp.kron(sp.diags(np.arange(basis.cutoff_a + 1.0)), eye_b, format="csr").astype(complex)
    n_b = sp.kron(eye_a, sp.diags(np.arange(basis.cutoff_b + 1.0)), format="csr").astype(complex)
    return Operators(
        a=a,
        a_dagger=a_dag,
        b=b,
        b_dagger=b_dag,
        number_a=n_a,
        number_b=n_b,
        identity=sp.identity(basis.dim, dtype=complex, format="csr"),
    )


class DensityMatrix:
    """State of the two-mode system; ``elements`` is a dense dim x dim array."""

    def __init__(self, basis: FockBasis, elements):
        elements = np.asarray(elements, dtype=complex)
        if elements.shape != (basis.dim, basis.dim):
            raise ValidationError(f"density matrix shape {elements.shape} does not match basis dim {basis.dim}")
        self.basis = basis
        self.elements = elements

    @classmethod
    def fock(cls, basis: FockBasis, n_a: int = 0, n_b: int = 0) -> "DensityMatrix":
        rho = np.zeros((basis.dim, basis.dim), dtype=complex)
        k = basis.index(n_a, n_b)
        rho[k, k] = 1.0
        return cls(basis, rho)

    @classmethod
    def vacuum(cls, basis: FockBasis) -> "DensityMatrix":
        return cls.fock(basis, 0, 0)

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.elements))

    def hermiticity_error(self) -> float:
        return float(np.abs(self.elements - self.elements.conj().T).max())

    def min_eigenvalue(self) -> float:
        herm = 0.5 * (self.elements + self.elements.conj().T)
        return float(np.linalg.eigvalsh(herm)[0])

    def check(self, trace_tol: float = 1e-8, herm_tol: float = 1e-12, diag_tol: float = -1e-10) -> None:
        """Raise ``NumericalError`` if any density-matrix invariant is violated."""
        if self.hermiticity_error() > herm_tol:
            raise NumericalError(f"density matrix not Hermitian (error {self.hermiticity_error():.3g})")
        if abs(self.trace - 1) > trace_tol:
            raise NumericalError(f"density matrix trace {self.trace} deviates from 1")
        if np.diag(self.elements).real.min() < diag_tol:
            raise NumericalError("density matrix has negative populations")


def rotating_frame_hamiltonian(
    params: SystemParams, basis: FockBasis, lamb_term: LambTerm = "absorbed", ops: Operators | None = None
) -> sp.csr_matrix:
    """Drive-frame Hamiltonian; with ``lamb_term="explicit"`` the charger uses the bare omega_a."""
    ops = ops or build_operators(basis)
    omega_a = params.omega_a_prime if lamb_term == "absorbed" else params.omega_a
    wf = params.drive_frequency
    H = (
        (omega_a - wf) * ops.number_a
        + (params.omega_b - wf) * ops.number_b
        + params.g * (ops.a @ ops.b_dagger + ops.b @ ops.a_dagger)
        + params.drive_amplitude * (ops.a + ops.a_dagger)
    )
    return H.tocsr()


class MasterEquation:
    """Right-hand side of the master equation with precomputed sparse operators."""

    def __init__(self, params: SystemParams, basis: FockBasis, lamb_term: LambTerm = "absorbed"):
        if lamb_term not in ("absorbed", "explicit"):
            raise ValidationError(f"lamb_term must be 'absorbed' or 'explicit', got {lamb_term!r}")
        self.params = validate(params)
        self.basis = basis
        self.lamb_term = lamb_term
        self.ops = build_operators(basis)
        self.hamiltonian = rotating_frame_hamiltonian(params, basis, lamb_term, self.ops)
        self.lamb_generator = self.ops.number_a * params.lamb_shift if lamb_term == "explicit" else None

        gamma, n_th = params.gamma_a, params.n_thermal
        jumps = []
        if gamma > 0:
            jumps.append(np.sqrt(gamma * (n_th + 1)) * self.ops.a)
            if n_th > 0:
                jumps.append(np.sqrt(gamma * n_th) * self.ops.a_dagger)
        self.jumps = [J.tocsr() for J in jumps]
        self.superoperator = self._superoperator()

    def _superoperator(self) -> sp.csr_matrix:
        """The generator acting on row-major vec(rho): vec(A rho B) = (A kron B^T) vec(rho)."""
        eye = sp.identity(self.basis.dim, dtype=complex, format="csr")

        def commutator(X):
            return -1j * (sp.kron(X, eye) - sp.kron(eye, X.T))

        S = commutator(self.hamiltonian)
        if self.lamb_generator is not None:
            S = S + commutator(self.lamb_generator)
        for J in self.jumps:
            JdJ = J.conj().T @ J
            S = S + sp.kron(J, J.conj()) - 0.5 * (sp.kron(JdJ, eye) + sp.kron(eye, JdJ.T))
        return S.tocsr()

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return (self.superoperator @ rho.ravel()).reshape(rho.shape)


def lindblad_rhs(rho: DensityMatrix, params: SystemParams, basis: FockBasis | None = None,
                 lamb_term: LambTerm = "absorbed") -> np.ndarray:
    basis = basis or rho.basis
    return MasterEquation(params, basis, lamb_term)(rho.elements)


def iter_evolve(
    rho0: DensityMatrix,
    params: SystemParams,
    t_final: float = DEFAULT_T_FINAL,
    dt: float = DEFAULT_DT,
    sample_stride: int = 1,
    lamb_term: LambTerm = "absorbed",
) -> Iterator[tuple[float, DensityMatrix]]:
    """Yield ``(t, rho)`` every ``sample_stride`` RK4 steps, starting with t = 0.

    The final time is always yielded even if it is not on the stride.
    """
    validate(params)
    if isinstance(sample_stride, bool) or int(sample_stride) != sample_stride or sample_stride < 1:
        raise ValidationError(f"sample_stride must be a positive integer, got {sample_stride!r}")
    n_steps = check_time_grid(params, t_final, dt)
    rho0.check(trace_tol=1e-8, herm_tol=1e-12, diag_tol=-1e-10)
    basis = rho0.basis
    L = MasterEquation(params, basis, lamb_term)

    rho = rho0.elements.copy()
    yield 0.0, DensityMatrix(basis, rho.copy())
    half = 0.5 * dt
    for k in range(n_steps):
        k1 = L(rho)
        k2 = L(rho + half * k1)
        k3 = L(rho + half * k2)
        k4 = L(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

        trace_drift = abs(np.trace(rho) - 1)
        min_pop = np.diag(rho).real.min()
        if not (trace_drift <= TRACE_DRIFT_LIMIT and min_pop >= NEGATIVE_POPULATION_LIMIT):
            raise NumericalError(
                f"truncation/step failure at t={(k + 1) * dt:.6g} (trace drift {trace_drift:.3g}, "
                f"min population {min_pop:.3g}), increase cutoff or decrease dt"
            )
        if (k + 1) % sample_stride == 0 or k + 1 == n_steps:
            yield (k + 1) * dt, DensityMatrix(basis, rho.copy())


def evolve(
    rho0: DensityMatrix,
    params: SystemParams,
    t_final: float = DEFAULT_T_FINAL,
    dt: float = DEFAULT_DT,
    sample_stride: int = 1,
    lamb_term: LambTerm = "absorbed",
) -> list[tuple[float, DensityMatrix]]:
    return list(iter_evolve(rho0, params, t_final, dt, sample_stride, lamb_term))


def expectation(rho: DensityMatrix, op) -> complex:
    """Tr(rho op) for dense or sparse ``op``."""
    if sp.issparse(op):
        return complex(op.T.multiply(rho.elements).sum())
    op = np.asarray(op)
    if op.shape != rho.elements.shape:
        raise ValidationError(f"operator shape {op.shape} does not match density matrix {rho.elements.shape}")
    return complex(np.sum(rho.elements * op.T))


def truncation_tail(rho: DensityMatrix) -> float:
    """Population in states with n_a = cutoff_a or n_b = cutoff_b."""
    basis = rho.basis
    pops = np.diag(rho.elements).real.reshape(basis.cutoff_a + 1, basis.cutoff_b + 1)
    edge = pops[-1, :].sum() + pops[:-1, -1].sum()
    return float(edge)


def simulate(
    params: SystemParams,
    basis: FockBasis,
    t_final: float = DEFAULT_T_FINAL,
    dt: float = DEFAULT_DT,
    sample_stride: int = 1,
    rho0: DensityMatrix | None = None,
    lamb_term: LambTerm = "absorbed",
) -> TimeSeries:
    """Lab-frame moments <a>, <b> and diagnostics along an evolution.

    <o>_lab(t) = exp(-i omega_f t) Tr(rho_rot(t) o).
    """
    rho0 = rho0 or DensityMatrix.vacuum(basis)
    if rho0.basis != basis:
        raise ValidationError("initial state basis does not match requested basis")
    ops = build_operators(basis)
    times, a_vals, b_vals, trace_err, tails = [], [], [], [], []
    for t, rho in iter_evolve(rho0, params, t_final, dt, sample_stride, lamb_term):
        phase = np.exp(-1j * params.drive_frequency * t)
        times.append(t)
        a_vals.append(phase * expectation(rho, ops.a))
        b_vals.append(phase * expectation(rho, ops.b))
        trace_err.append(abs(rho.trace - 1))
        tails.append(truncation_tail(rho))
    return annotate(times, a_vals, b_vals, params, extra={"trace_err": trace_err, "trunc_tail": tails})
