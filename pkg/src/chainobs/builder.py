"""Construction of chain-coupled distributed observers.

The plant is a single oscillator mode with a static quadrature output
z_p = c_p x_p and no internal dynamics. The observer is a chain of N
oscillator modes in which element 1 couples to the plant and element i
couples to element i+1, all through rank-one Hamiltonian interaction blocks
built from the plant's output direction alpha = c_p^T:

    coupling blocks   R_ci = -mu_i * alpha alpha^T,
    self-energies     R_oi = omega_i * I,
    element outputs   C_oi = c_p.

With the frequency lineup omega_i = mu~_i + mu~_{i+1} (omega_N = mu~_N),
where mu~_i = mu_i ||alpha||^2 are the output-normalized coupling strengths,
the stacked observer state direction (alpha; ...; alpha) is a fixed point of
the observer dynamics driven by the constant plant output. That algebraic
identity is what check_fixed_point certifies.

The assembled plant+observer system carries a block-tridiagonal Hamiltonian
coefficient matrix and inherits physical realizability by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateOutputError,
    InvalidDimensionError,
    InvalidParameterError,
    UnsupportedPlantError,
    UnsupportedSchemeError,
)
from .lqs import SYMPLECTIC_UNIT, SymplecticForm, dynamics_from_hamiltonian, make_symplectic

SCHEME_UNIFORM = "uniform"
SCHEME_ODD_HARMONICS = "odd-harmonics"
SCHEME_ALL_HARMONICS = "all-harmonics"
SCHEME_RANDOM = "random"
SCHEMES = (SCHEME_UNIFORM, SCHEME_ODD_HARMONICS, SCHEME_ALL_HARMONICS, SCHEME_RANDOM)


@dataclass(frozen=True)
class PlantSpec:
    """One-mode plant: dynamics a_p, output row c_p, Hamiltonian block r_p."""

    a_p: np.ndarray
    c_p: np.ndarray
    r_p: np.ndarray

    @classmethod
    def from_hamiltonian(cls, r_p: np.ndarray, c_p: np.ndarray) -> "PlantSpec":
        r = np.asarray(r_p, dtype=float)
        c = np.asarray(c_p, dtype=float).reshape(-1)
        if r.shape != (2, 2):
            raise InvalidDimensionError(f"plant Hamiltonian block must be 2x2, got {r.shape}")
        if not np.array_equal(r, r.T):
            raise InvalidParameterError("plant Hamiltonian block must be symmetric")
        if c.shape != (2,):
            raise InvalidDimensionError(f"plant output must have exactly 2 entries, got {c.shape}")
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(c))):
            raise InvalidParameterError("plant parameters must be finite")
        a_p = 2.0 * SYMPLECTIC_UNIT @ r
        return cls(a_p=a_p, c_p=c, r_p=r)

    @classmethod
    def static_plant(cls, c_p: np.ndarray) -> "PlantSpec":
        """A plant with zero Hamiltonian, so its output stays constant."""
        return cls.from_hamiltonian(np.zeros((2, 2)), c_p)


@dataclass(frozen=True)
class ParameterScheme:
    """Recipe for the coupling strengths mu~ of an N-element chain.

    ``variant`` selects the schedule; ``omega0`` is the fundamental
    frequency that scales it; ``seed`` feeds the generator for the random
    variant and must be left None otherwise.
    """

    variant: str
    omega0: float
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.variant not in SCHEMES:
            raise UnsupportedSchemeError(
                f"unknown scheme {self.variant!r}, expected one of {', '.join(SCHEMES)}"
            )
        if not (np.isfinite(self.omega0) and self.omega0 > 0):
            raise InvalidParameterError(f"omega0 must be positive, got {self.omega0!r}")
        if self.seed is not None:
            if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
                raise InvalidParameterError(f"seed must be a nonnegative integer, got {self.seed!r}")
            if self.variant != SCHEME_RANDOM:
                raise InvalidParameterError(
                    f"seed is only meaningful for the random scheme, not {self.variant!r}"
                )


@dataclass(frozen=True)
class ChainObserverParams:
    """All coefficient data of a constructed N-element observer chain."""

    n_elements: int
    alpha: np.ndarray
    mu_tilde: np.ndarray
    mu: np.ndarray
    omega: np.ndarray
    r_c: np.ndarray
    r_o_blocks: np.ndarray
    c_o_rows: np.ndarray


@dataclass(frozen=True)
class AugmentedSystem:
    """Plant plus observer chain as one closed linear quantum system.

    ``b_o`` is the constant-drive column of the observer subsystem: the
    observer dynamics read x_o' = a_o x_o + b_o z_p with z_p scalar, so it
    is a length-2N vector (2 J beta_1 on element 1, zero elsewhere).
    """

    r_a: np.ndarray
    a_a: np.ndarray
    c_a: np.ndarray
    a_o: np.ndarray
    b_o: np.ndarray
    theta: SymplecticForm

    @property
    def n_elements(self) -> int:
        return self.theta.n_modes - 1

    @property
    def r_o(self) -> np.ndarray:
        """Observer-only Hamiltonian coefficient block."""
        return self.r_a[2:, 2:]

    @property
    def c_o(self) -> np.ndarray:
        """Observer output rows acting on the observer state alone."""
        return self.c_a[1:, 2:]


@dataclass(frozen=True)
class ConsensusTarget:
    """The stacked state the observer averages toward, per unit plant output."""

    ones_vector: np.ndarray
    alpha_stack: np.ndarray


def make_mu_schedule(scheme: ParameterScheme, n_elements: int) -> np.ndarray:
    """Produce the coupling strengths mu~ for an N-element chain.

    uniform          mu~_i = omega0
    odd-harmonics    mu~_i = i * omega0
    all-harmonics    mu~_{2i-1} = mu~_{2i} = omega0 (N/2 + 1 - i), N even
    random           N independent draws, uniform on (0, omega0*N]
    """
    if not isinstance(n_elements, (int, np.integer)) or n_elements < 1:
        raise InvalidDimensionError(f"n_elements must be a positive integer, got {n_elements!r}")
    n = int(n_elements)
    w0 = float(scheme.omega0)
    if scheme.variant == SCHEME_UNIFORM:
        return np.full(n, w0)
    if scheme.variant == SCHEME_ODD_HARMONICS:
        return w0 * np.arange(1, n + 1, dtype=float)
    if scheme.variant == SCHEME_ALL_HARMONICS:
        if n % 2 != 0:
            raise UnsupportedSchemeError(
                f"the all-harmonics schedule is defined for even chain lengths only, got N={n}"
            )
        out = np.empty(n)
        for i in range(1, n // 2 + 1):
            out[2 * i - 2] = out[2 * i - 1] = w0 * (n / 2 + 1 - i)
        return out
    # random variant; the generator is created here and never shared
    if scheme.seed is None:
        raise InvalidParameterError("the random scheme requires a seed")
    rng = np.random.default_rng(scheme.seed)
    draws = rng.uniform(0.0, w0 * n, n)
    while np.any(draws == 0.0):
        zero = draws == 0.0
        draws[zero] = rng.uniform(0.0, w0 * n, int(zero.sum()))
    return draws


def omegas_from_mu(mu_tilde: np.ndarray) -> np.ndarray:
    """Frequency lineup omega_i = mu~_i + mu~_{i+1}, with omega_N = mu~_N."""
    mt = np.asarray(mu_tilde, dtype=float).reshape(-1)
    if mt.size < 1:
        raise InvalidDimensionError("mu_tilde must have at least one entry")
    if not np.all(np.isfinite(mt)) or np.any(mt <= 0.0):
        raise InvalidParameterError("all coupling strengths must be positive and finite")
    omega = np.empty_like(mt)
    omega[:-1] = mt[:-1] + mt[1:]
    omega[-1] = mt[-1]
    return omega


def build_chain(plant: PlantSpec, mu_tilde: np.ndarray) -> ChainObserverParams:
    """Construct the observer chain for a plant output and coupling strengths."""
    alpha = np.asarray(plant.c_p, dtype=float).reshape(-1)
    norm2 = float(alpha @ alpha)
    if norm2 == 0.0:
        raise DegenerateOutputError("plant output c_p is zero; the chain cannot observe it")
    mt = np.asarray(mu_tilde, dtype=float).reshape(-1)
    omega = omegas_from_mu(mt)
    n = mt.size
    mu = mt / norm2
    outer = np.outer(alpha, alpha)
    r_c = np.stack([-mu[i] * outer for i in range(n)])
    r_o_blocks = np.stack([omega[i] * np.eye(2) for i in range(n)])
    c_o_rows = np.tile(alpha, (n, 1))
    return ChainObserverParams(
        n_elements=n,
        alpha=alpha,
        mu_tilde=mt.copy(),
        mu=mu,
        omega=omega,
        r_c=r_c,
        r_o_blocks=r_o_blocks,
        c_o_rows=c_o_rows,
    )


def assemble_augmented(plant: PlantSpec, chain: ChainObserverParams) -> AugmentedSystem:
    """Assemble the block-tridiagonal plant+observer system.

    Element 1's coupling block sits between the plant and the first
    observer mode; coupling block i+1 sits between observer modes i and
    i+1. The diagonal carries the plant block (zero) and the self-energies
    omega_i I. Dynamics follow as twice the symplectic form times the
    Hamiltonian coefficient matrix.
    """
    if np.any(plant.r_p != 0.0) or np.any(plant.a_p != 0.0):
        raise UnsupportedPlantError(
            "only static plants (r_p = 0) admit this observer construction"
        )
    if not np.array_equal(chain.alpha, np.asarray(plant.c_p, dtype=float).reshape(-1)):
        raise InvalidParameterError("chain was built for a different plant output")
    n = chain.n_elements
    dim = 2 * (n + 1)
    r_a = np.zeros((dim, dim))
    for i in range(n):
        lo = 2 * (i + 1)
        r_a[lo : lo + 2, lo : lo + 2] = chain.r_o_blocks[i]
    for i in range(n):
        row = 2 * i
        col = 2 * (i + 1)
        r_a[row : row + 2, col : col + 2] = chain.r_c[i]
        r_a[col : col + 2, row : row + 2] = chain.r_c[i]
    theta = make_symplectic(n + 1)
    a_a = dynamics_from_hamiltonian(r_a, theta)
    c_a = np.zeros((n + 1, dim))
    c_a[0, 0:2] = plant.c_p
    for i in range(n):
        c_a[i + 1, 2 * (i + 1) : 2 * (i + 1) + 2] = chain.c_o_rows[i]
    a_o = a_a[2:, 2:].copy()
    beta_1 = -chain.mu[0] * chain.alpha
    b_o = np.zeros(2 * n)
    b_o[0:2] = 2.0 * SYMPLECTIC_UNIT @ beta_1
    return AugmentedSystem(r_a=r_a, a_a=a_a, c_a=c_a, a_o=a_o, b_o=b_o, theta=theta)


def check_fixed_point(aug: AugmentedSystem, chain: ChainObserverParams) -> float:
    """Residual of the constant-drive fixed point of the observer chain.

    Returns the norm of a_o (alpha; ...; alpha) + b_o ||alpha||^2, which
    is zero exactly when the frequency lineup matches the coupling
    strengths. Diagnostic only; never raises on a nonzero residual.
    """
    stack = np.tile(chain.alpha, chain.n_elements)
    norm2 = float(chain.alpha @ chain.alpha)
    return float(np.linalg.norm(aug.a_o @ stack + aug.b_o * norm2))


def consensus_target(chain: ChainObserverParams) -> ConsensusTarget:
    """Stacked observer state whose every element output equals one."""
    norm2 = float(chain.alpha @ chain.alpha)
    stack = np.tile(chain.alpha, chain.n_elements) / norm2
    return ConsensusTarget(ones_vector=np.ones(chain.n_elements), alpha_stack=stack)
