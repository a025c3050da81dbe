"""Transfer fidelities, fidelity time series and first-arrival peak detection."""
import logging
import math
from typing import Union

import numpy as np

from ..exceptions import NoArrivalDetected, PropagationError
from ..models import (
    AmplitudeState,
    BellSign,
    BlochAngles,
    DriveProtocol,
    FidelitySeries,
    Peak,
    PeakConfig,
    Scenario,
    SpectralDecomposition,
)
from ..models.fidelity import FIDELITY_TOLERANCE
from .propagator_service import driven_trajectory, static_trajectory

logger = logging.getLogger(__name__)

Evolver = Union[SpectralDecomposition, DriveProtocol]

SQRT_HALF = 1.0 / math.sqrt(2.0)


def _clamp(values, what: str):
    """Clip roundoff excursions out of [0, 1]; anything larger is a propagation bug."""
    array = np.asarray(values, dtype=float)
    if np.any(array < -FIDELITY_TOLERANCE) or np.any(array > 1.0 + FIDELITY_TOLERANCE):
        worst = float(array[np.argmax(np.maximum(-array, array - 1.0))]) if array.ndim else float(array)
        raise PropagationError(f"{what} fidelity {worst!r} outside [0, 1]")
    clipped = np.clip(array, 0.0, 1.0)
    return float(clipped) if clipped.ndim == 0 else clipped


def single_qubit_fidelity(f_n1, theta: float):
    """Bob's fidelity for a qubit sent from site 1; f_n1 may be a scalar or an array over time."""
    f = np.asarray(f_n1, dtype=complex)
    if np.any(np.abs(f) > 1.0 + FIDELITY_TOLERANCE):
        raise PropagationError(f"Transition amplitude exceeds 1 in modulus: {np.max(np.abs(f))!r}")
    half = theta / 2.0
    values = (math.cos(half) ** 2
              + 0.5 * math.sin(theta) ** 2 * f.real
              - math.cos(theta) * math.sin(half) ** 2 * np.abs(f) ** 2)
    return _clamp(values, "Single-qubit")


def bell_fidelity(a_nm1, a_n, sign: BellSign):
    """Overlap of Bob's two-site state with the Bell state Alice prepared."""
    sign = BellSign.parse(sign)
    a_nm1 = np.asarray(a_nm1, dtype=complex)
    a_n = np.asarray(a_n, dtype=complex)
    weight = np.abs(a_nm1) ** 2 + np.abs(a_n) ** 2
    if np.any(weight > 1.0 + FIDELITY_TOLERANCE):
        raise PropagationError(f"Bob's block carries weight {np.max(weight)!r} > 1")
    return _clamp(0.5 * np.abs(a_nm1 + int(sign) * a_n) ** 2, "Bell")


def initial_state_single(angles: BlochAngles, n_sites: int) -> AmplitudeState:
    a = np.zeros(n_sites, dtype=complex)
    a[0] = np.exp(1j * angles.phi) * math.sin(angles.theta / 2.0)
    return AmplitudeState(math.cos(angles.theta / 2.0), a)


def initial_state_bell(sign: BellSign, n_sites: int) -> AmplitudeState:
    a = np.zeros(n_sites, dtype=complex)
    a[0] = SQRT_HALF
    a[1] = int(BellSign.parse(sign)) * SQRT_HALF
    return AmplitudeState(0.0, a)


def initial_state(scenario: Scenario, n_sites: int) -> AmplitudeState:
    if scenario.is_bell:
        return initial_state_bell(scenario.sign, n_sites)
    return initial_state_single(scenario.angles, n_sites)


def reduced_density_single(state: AmplitudeState) -> np.ndarray:
    """Bob's one-site density matrix in the basis (|0>, |1>)."""
    a_n = state.a[-1]
    return np.array([
        [1.0 - abs(a_n) ** 2, state.a0 * np.conj(a_n)],
        [a_n * np.conj(state.a0), abs(a_n) ** 2],
    ], dtype=complex)


def reduced_density_pair(state: AmplitudeState) -> np.ndarray:
    """Density matrix of sites (N-1, N) in the basis (|00>, |01>, |10>, |11>)."""
    a0, x, y = state.a0, state.a[-2], state.a[-1]
    rest = 1.0 - abs(x) ** 2 - abs(y) ** 2 - abs(a0) ** 2
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = abs(a0) ** 2 + rest
    rho[0, 1] = a0 * np.conj(y)
    rho[0, 2] = a0 * np.conj(x)
    rho[1, 0] = np.conj(rho[0, 1])
    rho[2, 0] = np.conj(rho[0, 2])
    rho[1, 1] = abs(y) ** 2
    rho[1, 2] = y * np.conj(x)
    rho[2, 1] = x * np.conj(y)
    rho[2, 2] = abs(x) ** 2
    return rho


def fidelity_from_density_single(rho: np.ndarray, angles: BlochAngles) -> float:
    """<psi|rho|psi> with |psi> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
    psi = np.array([math.cos(angles.theta / 2.0),
                    np.exp(1j * angles.phi) * math.sin(angles.theta / 2.0)])
    return _clamp(np.vdot(psi, rho @ psi).real, "Single-qubit")


def fidelity_from_density_bell(rho: np.ndarray, sign: BellSign) -> float:
    psi = np.array([0.0, int(BellSign.parse(sign)) * SQRT_HALF, SQRT_HALF, 0.0], dtype=complex)
    return _clamp(np.vdot(psi, rho @ psi).real, "Bell")


def _trajectory(evolver: Evolver, state: AmplitudeState, taus: np.ndarray) -> np.ndarray:
    if isinstance(evolver, DriveProtocol):
        return driven_trajectory(evolver, state, taus)
    return static_trajectory(evolver, state, taus)


def _n_sites(evolver: Evolver) -> int:
    return evolver.n if isinstance(evolver, DriveProtocol) else evolver.dimension


def fidelity_series(evolver: Evolver, scenario: Scenario, config: PeakConfig) -> FidelitySeries:
    """F(tau) on the config's time grid under a static decomposition or a driven protocol."""
    n = _n_sites(evolver)
    taus = config.time_grid(n)
    if scenario.is_bell:
        amplitudes = _trajectory(evolver, initial_state_bell(scenario.sign, n), taus)
        values = bell_fidelity(amplitudes[:, -2], amplitudes[:, -1], scenario.sign)
    else:
        # the vacuum is stationary, so f_{N,1} from |1> fixes the fidelity for every phi
        amplitudes = _trajectory(evolver, AmplitudeState.localized(1, n), taus)
        values = single_qubit_fidelity(amplitudes[:, -1], scenario.angles.theta)
    return FidelitySeries(taus, np.atleast_1d(values))


def _refine(taus: np.ndarray, values: np.ndarray, j: int) -> Peak:
    y1, y2, y3 = values[j - 1], values[j], values[j + 1]
    curvature = y1 - 2.0 * y2 + y3
    if curvature >= 0.0:
        return Peak(float(taus[j]), float(y2))
    h = taus[j + 1] - taus[j]
    shift = h * (y1 - y3) / (2.0 * curvature)
    height = y2 - (y1 - y3) ** 2 / (8.0 * curvature)
    return Peak(float(taus[j] + shift), float(min(max(height, 0.0), 1.0)))


def first_arrival_peak(series: FidelitySeries, config: PeakConfig) -> Peak:
    """Highest sample of the first stretch that stays at or above threshold_fraction of the series maximum.

    Neighbouring maxima of one arrival are merged as long as F does not dip
    below the threshold between them. The stretch must close inside the
    window, so a series still rising at tau_max has no arrival.
    """
    values = series.values
    if values.size < 3:
        raise NoArrivalDetected(f"Series of {values.size} samples has no interior point")
    threshold = config.threshold_fraction * float(values.max())
    above = (values >= threshold) & (values > 0.0)
    if not above.any():
        raise NoArrivalDetected(
            f"no arrival detected within tau <= {series.tau_max:g} (threshold {threshold:.4g})")
    start = int(np.argmax(above))
    below = np.flatnonzero(~above[start:])
    stop = start + int(below[0]) if below.size else values.size
    j = start + int(np.argmax(values[start:stop]))
    if j == 0 or j == values.size - 1:
        raise NoArrivalDetected(
            f"no arrival detected within tau <= {series.tau_max:g} (threshold {threshold:.4g})")
    return _refine(series.taus, values, j)


def peak_fidelity(evolver: Evolver, scenario: Scenario, config: PeakConfig) -> Peak:
    return first_arrival_peak(fidelity_series(evolver, scenario, config), config)
