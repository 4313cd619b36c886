"""3x3 complex linear algebra primitives and state-quality metrics.

States live on the bare basis (|1>, |2>, |3>) and are plain numpy arrays:
pure states are complex 3-vectors, operators and density matrices are
3x3 complex arrays.  The coherence convention is rho21 = <2|rho|1>,
i.e. ``rho[1, 0]``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NumericalStateError, ValidationError

# Density-matrix admissibility tolerances.
HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-8
NORM_TOL = 1e-10


def basis_state(i: int) -> np.ndarray:
    """Bare basis vector |i> for i in {1, 2, 3}."""
    if i not in (1, 2, 3):
        raise ValidationError(f"level index must be 1, 2 or 3, got {i}")
    psi = np.zeros(3, dtype=complex)
    psi[i - 1] = 1.0
    return psi


def projection_operator(i: int, j: int) -> np.ndarray:
    """Atomic projection operator |i><j| as a 3x3 matrix."""
    if i not in (1, 2, 3) or j not in (1, 2, 3):
        raise ValidationError(f"level indices must be in 1..3, got ({i}, {j})")
    op = np.zeros((3, 3), dtype=complex)
    op[i - 1, j - 1] = 1.0
    return op


def pure_density(psi: np.ndarray) -> np.ndarray:
    """Rank-1 density matrix |psi><psi| of a normalized pure state."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (3,):
        raise ValidationError(f"pure state must be a 3-vector, got shape {psi.shape}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValidationError(f"pure state is not normalized: |psi| = {norm}")
    return np.outer(psi, psi.conj())


def state_overlap(target: np.ndarray, rho: np.ndarray) -> float:
    """Overlap <psi|rho|psi> with a pure target state (the squared fidelity)."""
    target = np.asarray(target, dtype=complex)
    norm = np.linalg.norm(target)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValidationError(f"target state is not normalized: |psi| = {norm}")
    overlap = np.vdot(target, np.asarray(rho) @ target).real
    if overlap < -POSITIVITY_TOL * 10:
        raise NumericalStateError(f"overlap <psi|rho|psi> = {overlap} is negative")
    return float(min(max(overlap, 0.0), 1.0))


def fidelity_to_pure(target: np.ndarray, rho: np.ndarray) -> float:
    """Uhlmann fidelity F = sqrt(<psi|rho|psi>) against a pure target."""
    return float(np.sqrt(state_overlap(target, rho)))


def hermitize(m: np.ndarray) -> np.ndarray:
    """Project onto the Hermitian part, (m + m^dagger)/2."""
    return (m + m.conj().T) / 2.0


@dataclass(frozen=True)
class StateQuality:
    """Defect report for a candidate density matrix (reports, never throws)."""

    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float

    @property
    def is_valid(self) -> bool:
        return (
            self.hermiticity_defect < HERMITICITY_TOL
            and self.trace_defect < TRACE_TOL
            and self.min_eigenvalue > -POSITIVITY_TOL
        )


def state_quality(rho: np.ndarray) -> StateQuality:
    """Measure how far a 3x3 complex matrix is from a valid density matrix."""
    rho = np.asarray(rho, dtype=complex)
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    trace = float(abs(np.trace(rho).real - 1.0) + abs(np.trace(rho).imag))
    eigs = np.linalg.eigvalsh(hermitize(rho))
    return StateQuality(herm, trace, float(eigs.min()))


def assert_density(rho: np.ndarray) -> None:
    """Raise ValidationError unless rho satisfies the density-matrix invariants."""
    q = state_quality(rho)
    if not q.is_valid:
        raise ValidationError(
            "not a valid density matrix: "
            f"hermiticity defect {q.hermiticity_defect:.3e}, "
            f"trace defect {q.trace_defect:.3e}, "
            f"min eigenvalue {q.min_eigenvalue:.3e}"
        )
