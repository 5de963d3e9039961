"""Closed linear quantum systems at the quadrature-coefficient level.

A network of n oscillator modes carries the canonical commutation structure
through the block-diagonal symplectic form Theta = diag(J, ..., J) with
J = [[0, 1], [-1, 0]]. A quadratic Hamiltonian with symmetric coefficient
matrix R generates the linear dynamics A = 2 Theta R. Such dynamics are
physically realizable exactly when A Theta + Theta A^T = 0, and the flow
Phi(t) = exp(A t) then preserves both the symplectic form and the
Hamiltonian itself. This module provides the types and the residuals that
certify those facts numerically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidDimensionError, InvalidInputError, InvalidParameterError

SYMPLECTIC_UNIT = np.array([[0.0, 1.0], [-1.0, 0.0]])


def _require_finite(arr: np.ndarray, name: str) -> None:
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite entries")


@dataclass(frozen=True)
class SymplecticForm:
    """The commutation matrix Theta for ``n_modes`` oscillator modes."""

    n_modes: int
    matrix: np.ndarray

    @property
    def dimension(self) -> int:
        return 2 * self.n_modes


def make_symplectic(n_modes: int) -> SymplecticForm:
    """Build Theta = diag(J, ..., J) with one 2x2 block per mode."""
    if not isinstance(n_modes, (int, np.integer)) or n_modes < 1:
        raise InvalidDimensionError(
            f"n_modes must be a positive integer, got {n_modes!r}"
        )
    matrix = np.kron(np.eye(int(n_modes)), SYMPLECTIC_UNIT)
    return SymplecticForm(n_modes=int(n_modes), matrix=matrix)


@dataclass(frozen=True)
class HamiltonianMatrix:
    """Symmetric coefficient matrix of a quadratic Hamiltonian.

    ``dimension`` is the full quadrature dimension 2n. The matrix is
    validated on construction: it must be square, of even dimension, exactly
    symmetric, and finite.
    """

    matrix: np.ndarray
    dimension: int

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "HamiltonianMatrix":
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidDimensionError(f"Hamiltonian matrix must be square, got shape {m.shape}")
        if m.shape[0] % 2 != 0 or m.shape[0] < 2:
            raise InvalidDimensionError(
                f"Hamiltonian matrix dimension must be a positive even number, got {m.shape[0]}"
            )
        _require_finite(m, "Hamiltonian matrix")
        if not np.array_equal(m, m.T):
            raise InvalidParameterError("Hamiltonian matrix must be symmetric")
        return cls(matrix=m, dimension=m.shape[0])


@dataclass(frozen=True)
class LinearQuantumSystem:
    """A closed linear system: Hamiltonian, symplectic form, dynamics, output.

    The dynamics matrix always equals 2 Theta R by construction, which makes
    the system physically realizable up to floating-point roundoff.
    """

    hamiltonian: HamiltonianMatrix
    theta: SymplecticForm
    dynamics: np.ndarray
    output: np.ndarray

    @classmethod
    def from_hamiltonian(cls, r: np.ndarray, output: np.ndarray) -> "LinearQuantumSystem":
        ham = HamiltonianMatrix.from_matrix(r)
        theta = make_symplectic(ham.dimension // 2)
        c = np.atleast_2d(np.asarray(output, dtype=float))
        if c.shape[1] != ham.dimension:
            raise InvalidDimensionError(
                f"output has {c.shape[1]} columns, expected {ham.dimension}"
            )
        _require_finite(c, "output matrix")
        dynamics = dynamics_from_hamiltonian(ham.matrix, theta)
        return cls(hamiltonian=ham, theta=theta, dynamics=dynamics, output=c)


def dynamics_from_hamiltonian(r: np.ndarray, theta: SymplecticForm) -> np.ndarray:
    """Return A = 2 Theta R for a symmetric Hamiltonian coefficient matrix."""
    r = np.asarray(r, dtype=float)
    if r.shape != (theta.dimension, theta.dimension):
        raise InvalidDimensionError(
            f"Hamiltonian matrix shape {r.shape} does not match "
            f"symplectic dimension {theta.dimension}"
        )
    _require_finite(r, "Hamiltonian matrix")
    return 2.0 * theta.matrix @ r


def realizability_residual(a: np.ndarray, theta: SymplecticForm) -> float:
    """Frobenius norm of A Theta + Theta A^T.

    Zero (up to roundoff) exactly when the dynamics preserve the canonical
    commutation relations, i.e. when A = 2 Theta R for some symmetric R.
    """
    a = np.asarray(a, dtype=float)
    if a.shape != (theta.dimension, theta.dimension):
        raise InvalidDimensionError(
            f"dynamics shape {a.shape} does not match symplectic dimension {theta.dimension}"
        )
    _require_finite(a, "dynamics matrix")
    t = theta.matrix
    return float(np.linalg.norm(a @ t + t @ a.T, ord="fro"))


def hamiltonian_drift(r: np.ndarray, phi: np.ndarray) -> float:
    """Frobenius norm of Phi^T R Phi - R.

    Measures how far a propagator Phi has drifted from conserving the
    quadratic Hamiltonian with coefficient matrix R.
    """
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise InvalidDimensionError(f"Hamiltonian matrix must be square, got shape {r.shape}")
    if phi.shape != r.shape:
        raise InvalidDimensionError(
            f"propagator shape {phi.shape} does not match Hamiltonian shape {r.shape}"
        )
    _require_finite(r, "Hamiltonian matrix")
    _require_finite(phi, "propagator")
    return float(np.linalg.norm(phi.T @ r @ phi - r, ord="fro"))


def symplectic_drift(phi: np.ndarray, theta: SymplecticForm) -> float:
    """Frobenius norm of Phi Theta Phi^T - Theta for a propagator Phi."""
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (theta.dimension, theta.dimension):
        raise InvalidDimensionError(
            f"propagator shape {phi.shape} does not match symplectic dimension {theta.dimension}"
        )
    _require_finite(phi, "propagator")
    t = theta.matrix
    return float(np.linalg.norm(phi @ t @ phi.T - t, ord="fro"))
