import logging
import math
from dataclasses import replace
from typing import Iterable, List, Optional, Tuple

import numpy as np

from ..exceptions import ChainValidationError
from ..models import DisorderScan, DriveProtocol, FidelitySeries, PeakConfig, Scenario, grid_values
from ..tasks import SweepWorker
from .fidelity_service import fidelity_series
from .parrondo_service import peak_task

logger = logging.getLogger(__name__)

DEVIATIONS = ('delta_alpha', 'delta_beta')


def apply_disorder(protocol: DriveProtocol, delta_alpha: float = 0.0, delta_beta: float = 0.0) -> DriveProtocol:
    """Same deviation on Bob's bonds of both driven Hamiltonians."""
    return replace(
        protocol,
        spec1=replace(protocol.spec1, delta_alpha=delta_alpha, delta_beta=delta_beta),
        spec2=replace(protocol.spec2, delta_alpha=delta_alpha, delta_beta=delta_beta),
    )


class DisorderService:
    """Robustness of a driven protocol against Bob-side coupling deviations."""

    def __init__(self, peak_config: Optional[PeakConfig] = None, worker: Optional[SweepWorker] = None):
        self.peak_config = peak_config or PeakConfig()
        self.worker = worker or SweepWorker()

    def disorder_scan(self, protocol: DriveProtocol, scenario: Scenario, which: str,
                      delta_range: Tuple[float, float] = (-0.2, 0.2), step: float = 0.01,
                      config: Optional[PeakConfig] = None) -> DisorderScan:
        """First-peak fidelity for each deviation of one Bob-side bond, the other held at 0."""
        if which not in DEVIATIONS:
            raise ChainValidationError(f"Unknown deviation {which!r}; expected one of {', '.join(DEVIATIONS)}")
        config = config or self.peak_config
        deltas = grid_values(delta_range[0], delta_range[1], step, which)
        if deltas[0] > 0 or deltas[-1] < 0 or not np.any(deltas == 0.0):
            raise ChainValidationError(f"{which} range must contain 0 on the step grid")
        if 1.0 + deltas[0] <= 0:
            raise ChainValidationError(f"{which}={deltas[0]:g} makes a Bob-side coupling non-positive")

        protocols = [apply_disorder(protocol, **{which: float(delta)}) for delta in deltas]
        logger.info(f"Disorder scan over {which}: {deltas.size} points from {deltas[0]:g} to {deltas[-1]:g}")
        results = self.worker.map(peak_task, [(p, scenario, config) for p in protocols])

        values = np.empty(deltas.size)
        failures = {}
        for i, (delta, (f_peak, _tau, error)) in enumerate(zip(deltas, results)):
            values[i] = f_peak
            if error is not None:
                logger.warning(f"Disorder point {which}={delta:g} failed: {error}")
                failures[float(delta)] = error

        baseline = float(values[np.flatnonzero(deltas == 0.0)[0]])
        if math.isnan(baseline):
            logger.warning("Undisordered point has no first-arrival peak")
        return DisorderScan(which, deltas, values, baseline, failures)

    def disorder_time_series(self, protocol: DriveProtocol, scenario: Scenario,
                             delta_pairs: Iterable[Tuple[float, float]],
                             config: Optional[PeakConfig] = None) -> List[FidelitySeries]:
        """Full F(tau) curves, one per (delta_alpha, delta_beta) pair."""
        config = config or self.peak_config
        series = []
        for delta_alpha, delta_beta in delta_pairs:
            disordered = apply_disorder(protocol, delta_alpha, delta_beta)
            logger.debug(f"Time series for delta_alpha={delta_alpha:g}, delta_beta={delta_beta:g}")
            series.append(fidelity_series(disordered, scenario, config))
        return series
