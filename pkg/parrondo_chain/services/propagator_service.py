"""Exact single-excitation time evolution.

Static Hamiltonians are exponentiated through their spectral decomposition, so
there is no time-step error anywhere. Driven evolution chains the two segment
propagators of each period and uses partial exponentials inside a segment, so
any time can be sampled, not only multiples of the period.
"""
import logging
import math
from functools import lru_cache
from typing import Tuple, Union

import numpy as np
from scipy import linalg as la

from ..exceptions import ChainValidationError, DiagonalizationError, DimensionMismatchError
from ..models import (
    AmplitudeState,
    ChainSpec,
    DriveProtocol,
    HamiltonianMatrix,
    MagnusTerms,
    SpectralDecomposition,
)
from .chain_service import hamiltonian_for

logger = logging.getLogger(__name__)

DECOMPOSITION_CACHE_SIZE = 512

MatrixLike = Union[HamiltonianMatrix, np.ndarray]


def diagonalize(hamiltonian: HamiltonianMatrix) -> SpectralDecomposition:
    """Eigen-decomposition of the tridiagonal Hamiltonian, eigenvalues ascending."""
    dimension = hamiltonian.dimension
    try:
        eigenvalues, eigenvectors = la.eigh_tridiagonal(
            hamiltonian.diagonal, hamiltonian.offdiagonal.values)
    except (la.LinAlgError, ValueError) as e:
        raise DiagonalizationError(dimension, str(e)) from e
    if not (np.all(np.isfinite(eigenvalues)) and np.all(np.isfinite(eigenvectors))):
        raise DiagonalizationError(dimension, "non-finite eigenpairs")
    return SpectralDecomposition(np.ascontiguousarray(eigenvalues), np.ascontiguousarray(eigenvectors))


@lru_cache(maxsize=DECOMPOSITION_CACHE_SIZE)
def decomposition_for(spec: ChainSpec) -> SpectralDecomposition:
    """Cached decomposition per ChainSpec; the cache lives in each worker process."""
    logger.debug(f"Diagonalizing {spec}")
    return diagonalize(hamiltonian_for(spec))


def _check_time(tau: float) -> float:
    tau = float(tau)
    if not math.isfinite(tau) or tau < 0:
        raise ChainValidationError(f"Evolution time must be finite and non-negative, got {tau}")
    return tau


def _check_dimensions(decomp: SpectralDecomposition, state: AmplitudeState):
    if decomp.dimension != state.n_sites:
        raise DimensionMismatchError(
            f"Hamiltonian has dimension {decomp.dimension} but the state has {state.n_sites} sites")


def _evolve_sites(decomp: SpectralDecomposition, a: np.ndarray, tau: float) -> np.ndarray:
    v = decomp.eigenvectors
    return v @ (np.exp(-1j * decomp.eigenvalues * tau) * (v.T @ a))


def static_propagator(decomp: SpectralDecomposition, tau: float) -> np.ndarray:
    """exp(-i H tau) restricted to the single-excitation block."""
    tau = _check_time(tau)
    v = decomp.eigenvectors
    return (v * np.exp(-1j * decomp.eigenvalues * tau)) @ v.T


def propagate_static(decomp: SpectralDecomposition, state: AmplitudeState, tau: float) -> AmplitudeState:
    tau = _check_time(tau)
    _check_dimensions(decomp, state)
    if tau == 0.0:
        return state
    # the vacuum has zero energy, a0 is untouched
    return state.with_sites(_evolve_sites(decomp, state.a, tau))


def transition_amplitude(decomp: SpectralDecomposition, from_site: int, to_site: int, tau: float) -> complex:
    """<to| exp(-i H tau) |from> with 1-based site labels."""
    tau = _check_time(tau)
    n = decomp.dimension
    for label, site in (('from_site', from_site), ('to_site', to_site)):
        if not 1 <= site <= n:
            raise ChainValidationError(f"{label}={site} out of range 1..{n}")
    v = decomp.eigenvectors
    return complex(np.sum(v[to_site - 1] * np.exp(-1j * decomp.eigenvalues * tau) * v[from_site - 1]))


def static_trajectory(decomp: SpectralDecomposition, state: AmplitudeState, taus: np.ndarray) -> np.ndarray:
    """Site amplitudes at every time in taus, shape (len(taus), N)."""
    _check_dimensions(decomp, state)
    taus = np.asarray(taus, dtype=float)
    v = decomp.eigenvectors
    coefficients = state.a @ v
    return (coefficients * np.exp(-1j * np.outer(taus, decomp.eigenvalues))) @ v.T


def protocol_decompositions(protocol: DriveProtocol) -> Tuple[SpectralDecomposition, SpectralDecomposition]:
    return decomposition_for(protocol.spec1), decomposition_for(protocol.spec2)


def one_period_propagator(protocol: DriveProtocol) -> np.ndarray:
    """U(T) = exp(-i H2 T2) exp(-i H1 T1)."""
    first, second = protocol_decompositions(protocol)
    return static_propagator(second, protocol.t2) @ static_propagator(first, protocol.t1)


def _split_times(protocol: DriveProtocol, taus: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Whole periods elapsed and the offset inside the current period."""
    period = protocol.period
    periods = np.floor(taus / period).astype(int)
    offsets = taus - periods * period
    # roundoff can leave an offset a hair outside [0, T)
    wrapped = offsets >= period
    periods[wrapped] += 1
    offsets[wrapped] -= period
    negative = offsets < 0
    periods[negative] -= 1
    offsets[negative] += period
    return periods, np.clip(offsets, 0.0, period)


def driven_trajectory(protocol: DriveProtocol, state: AmplitudeState, taus: np.ndarray) -> np.ndarray:
    """Site amplitudes of the driven evolution at every time in taus, shape (len(taus), N)."""
    first, second = protocol_decompositions(protocol)
    _check_dimensions(first, state)
    taus = np.asarray(taus, dtype=float)
    if taus.size == 0:
        return np.empty((0, state.n_sites), dtype=complex)
    if np.any(taus < 0) or not np.all(np.isfinite(taus)):
        raise ChainValidationError("Evolution times must be finite and non-negative")

    periods, offsets = _split_times(protocol, taus)
    u_first = static_propagator(first, protocol.t1)
    u_period = static_propagator(second, protocol.t2) @ u_first

    # states at period boundaries, stored as rows
    boundary = np.empty((periods.max() + 1, state.n_sites), dtype=complex)
    boundary[0] = state.a
    for m in range(1, boundary.shape[0]):
        boundary[m] = u_period @ boundary[m - 1]

    out = np.empty((taus.size, state.n_sites), dtype=complex)
    in_first = offsets < protocol.t1
    if np.any(in_first):
        v = first.eigenvectors
        coefficients = boundary[periods[in_first]] @ v
        phases = np.exp(-1j * np.outer(offsets[in_first], first.eigenvalues))
        out[in_first] = (coefficients * phases) @ v.T
    in_second = ~in_first
    if np.any(in_second):
        v = second.eigenvectors
        after_first = boundary @ u_first.T
        coefficients = after_first[periods[in_second]] @ v
        phases = np.exp(-1j * np.outer(offsets[in_second] - protocol.t1, second.eigenvalues))
        out[in_second] = (coefficients * phases) @ v.T
    return out


def driven_propagate(protocol: DriveProtocol, state: AmplitudeState, tau: float) -> AmplitudeState:
    """Evolve under spec1 for T1, spec2 for T2, repeated, stopping part-way through a segment if needed."""
    tau = _check_time(tau)
    sites = driven_trajectory(protocol, state, np.array([tau]))[0]
    return state.with_sites(sites)


def effective_couplings(protocol: DriveProtocol) -> Tuple[float, float]:
    """High-frequency couplings eta*x1 + (1-eta)*x2 for alpha and beta."""
    eta = protocol.eta
    s1, s2 = protocol.spec1, protocol.spec2
    alpha_eff = eta * s1.alpha + (1.0 - eta) * s2.alpha
    beta_eff = eta * s1.beta + (1.0 - eta) * s2.beta
    return alpha_eff, beta_eff


def effective_spec(protocol: DriveProtocol) -> ChainSpec:
    """Static chain of the time-averaged Hamiltonian, Bob-side deviations averaged bond by bond."""
    eta = protocol.eta
    s1, s2 = protocol.spec1, protocol.spec2
    alpha_eff, beta_eff = effective_couplings(protocol)
    if s1.delta_alpha == s2.delta_alpha:
        delta_alpha = s1.delta_alpha
    else:
        bob_alpha = eta * s1.alpha * (1 + s1.delta_alpha) + (1 - eta) * s2.alpha * (1 + s2.delta_alpha)
        delta_alpha = bob_alpha / alpha_eff - 1.0
    if s1.delta_beta == s2.delta_beta:
        delta_beta = s1.delta_beta
    else:
        bob_beta = eta * s1.beta * (1 + s1.delta_beta) + (1 - eta) * s2.beta * (1 + s2.delta_beta)
        delta_beta = bob_beta / beta_eff - 1.0
    return ChainSpec(n=protocol.n, alpha=alpha_eff, beta=beta_eff,
                     delta_alpha=delta_alpha, delta_beta=delta_beta)


def effective_propagate(protocol: DriveProtocol, state: AmplitudeState, tau: float) -> AmplitudeState:
    return propagate_static(decomposition_for(effective_spec(protocol)), state, tau)


def _dense(matrix: MatrixLike) -> np.ndarray:
    if isinstance(matrix, HamiltonianMatrix):
        return matrix.to_dense()
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatchError(f"Expected a square matrix, got shape {matrix.shape}")
    return matrix


def magnus_terms(h1: MatrixLike, h2: MatrixLike, period: float, delta_t: float) -> MagnusTerms:
    """First and second Magnus terms of exp(-i H2 T2) exp(-i H1 T1).

    T1 = T/2 + dT and T2 = T/2 - dT. The second term is (1/2) T1 T2 [H1, H2]
    = -(1/8) [H2, H1] (T^2 - 4 dT^2); it is formed from the factors T1 and T2
    so that it vanishes exactly at |dT| = T/2.
    """
    first, second = _dense(h1), _dense(h2)
    if first.shape != second.shape:
        raise DimensionMismatchError(f"Hamiltonians differ in shape: {first.shape} vs {second.shape}")
    period, delta_t = float(period), float(delta_t)
    if period <= 0:
        raise ChainValidationError(f"Period must be positive, got {period}")
    if abs(delta_t) > period / 2.0 * (1.0 + 1e-12):
        raise ChainValidationError(f"|delta_t| must not exceed T/2, got delta_t={delta_t}, T={period}")

    omega1 = -1j * ((first + second) * (period / 2.0) - (second - first) * delta_t)
    t1, t2 = period / 2.0 + delta_t, period / 2.0 - delta_t
    commutator = first @ second - second @ first
    omega2 = 0.5 * t1 * t2 * commutator
    return MagnusTerms(omega1.astype(complex), omega2.astype(complex))


def magnus_terms_for(protocol: DriveProtocol) -> MagnusTerms:
    return magnus_terms(hamiltonian_for(protocol.spec1), hamiltonian_for(protocol.spec2),
                        protocol.period, protocol.delta_t)


def magnus_propagator(terms: MagnusTerms) -> np.ndarray:
    """exp(Omega1 + Omega2), the second-order approximation of the one-period propagator."""
    return la.expm(terms.total)
