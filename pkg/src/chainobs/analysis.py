"""Certificates for the observer chain: definiteness and norm bounds.

The full observer Hamiltonian block R_o is 2N x 2N, but its definiteness
reduces to that of an N x N comparison matrix: collapsing each observer
mode to the norm of its 2-block and applying Cauchy-Schwarz to the coupling
terms leaves a symmetric tridiagonal matrix with the self-energies omega on
the diagonal and -mu~_2 .. -mu~_N off it. That matrix splits into a rank-one
part diag(mu~_1, 0, ..., 0) plus a weighted chain Laplacian, so it is
positive definite whenever the chain is connected and mu~_1 > 0.

Positive definiteness of R_o in turn bounds the propagator: the flow
exp(2 Theta R_o t) conserves the quadratic form of R_o, which traps its
spectral norm below sqrt(lambda_max / lambda_min) for all time. The
certificate produced here carries exactly that ratio; verify_exp_bound
spot checks it against computed exponentials.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .builder import ChainObserverParams
from .errors import (
    BoundViolatedError,
    InvalidParameterError,
    NotPositiveDefiniteError,
)
from .lqs import SymplecticForm, dynamics_from_hamiltonian
from .simulate import propagator


@dataclass(frozen=True)
class ReducedMatrix:
    """Symmetric tridiagonal comparison matrix of an observer chain."""

    matrix: np.ndarray
    diagonal: np.ndarray
    off_diagonal: np.ndarray


@dataclass(frozen=True)
class SpectralCertificate:
    """Extreme eigenvalues of a positive definite matrix and the norm bound

    exp_norm_bound = sqrt(lambda_max / lambda_min), which dominates
    ||exp(2 Theta R t)||_2 for every t when R carries the certificate.
    """

    lambda_min: float
    lambda_max: float
    exp_norm_bound: float


def build_reduced(chain: ChainObserverParams) -> ReducedMatrix:
    """Collapse a chain's 2N x 2N Hamiltonian block to its N x N comparison."""
    n = chain.n_elements
    diag = chain.omega.copy()
    off = -chain.mu_tilde[1:].copy()
    matrix = np.diag(diag)
    for i in range(n - 1):
        matrix[i, i + 1] = off[i]
        matrix[i + 1, i] = off[i]
    return ReducedMatrix(matrix=matrix, diagonal=diag, off_diagonal=off)


def laplacian_split(rm: ReducedMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Split the comparison matrix into rank-one plus chain-Laplacian parts.

    The rank-one part is diag(mu~_1, 0, ..., 0) with mu~_1 recovered from
    the first row sum; the remainder is the Laplacian of the weighted path
    graph, whose rows sum to zero and whose kernel is the all-ones vector.
    """
    n = rm.matrix.shape[0]
    mu_1 = float(rm.matrix[0].sum())
    rank_one = np.zeros((n, n))
    rank_one[0, 0] = mu_1
    laplacian = rm.matrix - rank_one
    return rank_one, laplacian


def certify_positive_definite(r_o: np.ndarray) -> SpectralCertificate:
    """Eigenvalue certificate that a symmetric matrix is positive definite.

    Raises a not-positive-definite error carrying lambda_min when the
    smallest eigenvalue fails the relative threshold 1e-10 * lambda_max.
    """
    m = np.asarray(r_o, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidParameterError(f"matrix must be square, got shape {m.shape}")
    asym = float(np.abs(m - m.T).max()) if m.size else 0.0
    scale = float(np.abs(m).max()) if m.size else 0.0
    if asym > 1e-12 * max(1.0, scale):
        raise InvalidParameterError("matrix must be symmetric")
    eigenvalues = np.linalg.eigvalsh(m)
    lam_min = float(eigenvalues[0])
    lam_max = float(eigenvalues[-1])
    if lam_max <= 0.0 or lam_min <= 1e-10 * lam_max:
        raise NotPositiveDefiniteError(
            f"matrix is not positive definite: lambda_min = {lam_min:.6e}, "
            f"lambda_max = {lam_max:.6e}",
            lambda_min=lam_min,
        )
    return SpectralCertificate(
        lambda_min=lam_min,
        lambda_max=lam_max,
        exp_norm_bound=float(np.sqrt(lam_max / lam_min)),
    )


def verify_exp_bound(
    r_o: np.ndarray,
    theta: SymplecticForm,
    sample_times: np.ndarray,
) -> tuple[float, float]:
    """Check ||exp(2 Theta R_o t)||_2 against the certificate bound.

    Returns (max observed spectral norm, bound). Raises a bound-violated
    error if any sampled exponential exceeds bound * (1 + 1e-9), which
    would indicate an inaccurate exponential rather than bad parameters.
    """
    times = np.asarray(sample_times, dtype=float).reshape(-1)
    if times.size == 0:
        raise InvalidParameterError("sample_times must be nonempty")
    if not np.all(np.isfinite(times)) or np.any(times < 0.0):
        raise InvalidParameterError("sample times must be finite and nonnegative")
    certificate = certify_positive_definite(r_o)
    a = dynamics_from_hamiltonian(np.asarray(r_o, dtype=float), theta)
    worst = 0.0
    for t in times:
        norm = float(np.linalg.norm(propagator(a, float(t)), ord=2))
        worst = max(worst, norm)
        if norm > certificate.exp_norm_bound * (1.0 + 1e-9):
            raise BoundViolatedError(
                f"||exp(A t)||_2 = {norm:.12e} at t = {t:g} exceeds the certified "
                f"bound {certificate.exp_norm_bound:.12e}"
            )
    return worst, certificate.exp_norm_bound
