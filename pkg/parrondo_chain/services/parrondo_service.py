import logging
import math
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from ..exceptions import ChainValidationError, ConfigError, NoArrivalDetected, ParrondoChainError, SweepFailedError
from ..models import (
    ChainSpec,
    DriveProtocol,
    FrequencyScanPoint,
    ParrondoOutcome,
    Peak,
    PeakConfig,
    Scenario,
    StaticScanPoint,
    SweepGrid,
    SweepRecord,
    SweepResult,
)
from ..repositories import ReferenceRepository
from ..tasks import SweepWorker
from .fidelity_service import peak_fidelity
from .propagator_service import decomposition_for

logger = logging.getLogger(__name__)

COUPLINGS = ('alpha', 'beta')
WINNING = 'winning'
LOSING = 'losing'

SEARCH_GRID = 'grid'
SEARCH_LOCAL = 'local'
SEARCH_QUOTED = 'quoted'
SEARCH_MODES = (SEARCH_GRID, SEARCH_LOCAL, SEARCH_QUOTED)

Target = Union[ChainSpec, DriveProtocol]
PeakTaskResult = Tuple[float, float, Optional[str]]


def peak_task(item: Tuple[Target, Scenario, PeakConfig]) -> PeakTaskResult:
    """First-arrival peak of one static chain or driven protocol; runs inside pool workers."""
    target, scenario, config = item
    try:
        evolver = target if isinstance(target, DriveProtocol) else decomposition_for(target)
        peak = peak_fidelity(evolver, scenario, config)
        return peak.f_star, peak.tau_star, None
    except ParrondoChainError as e:
        return math.nan, math.nan, str(e)


def classify_static(f_peak: float, f_0: float) -> str:
    """'winning' when the static chain beats the uniform reference, 'losing' otherwise."""
    if f_0 <= 0:
        raise ChainValidationError(f"Reference fidelity must be positive, got {f_0}")
    return WINNING if f_peak / f_0 > 1.0 else LOSING


def chain_with(n: int, coupling: str, value: float, **fixed) -> ChainSpec:
    """Chain with one boundary coupling set, the other fixed (default 1)."""
    if coupling not in COUPLINGS:
        raise ChainValidationError(f"Unknown coupling {coupling!r}; expected 'alpha' or 'beta'")
    params = {'alpha': 1.0, 'beta': 1.0}
    params.update(fixed)
    params[coupling] = value
    return ChainSpec(n=n, alpha=params['alpha'], beta=params['beta'])


class ParrondoService:
    """Static classification, driven sweeps and table reproduction."""

    def __init__(self, peak_config: Optional[PeakConfig] = None,
                 worker: Optional[SweepWorker] = None,
                 repository: Optional[ReferenceRepository] = None):
        self.peak_config = peak_config or PeakConfig()
        self.worker = worker or SweepWorker()
        self.repository = repository or ReferenceRepository()
        self._reference_cache: Dict[Tuple[int, Scenario, PeakConfig], float] = {}

    def _config(self, config: Optional[PeakConfig]) -> PeakConfig:
        return config if config is not None else self.peak_config

    def static_peak(self, spec: ChainSpec, scenario: Scenario, config: Optional[PeakConfig] = None) -> Peak:
        return peak_fidelity(decomposition_for(spec), scenario, self._config(config))

    def driven_peak(self, protocol: DriveProtocol, scenario: Scenario,
                    config: Optional[PeakConfig] = None) -> Peak:
        return peak_fidelity(protocol, scenario, self._config(config))

    def reference_fidelity(self, n: int, scenario: Scenario, config: Optional[PeakConfig] = None) -> float:
        """F0 of the uniform chain of length n, computed once per (n, scenario, config)."""
        config = self._config(config)
        key = (n, scenario, config)
        if key not in self._reference_cache:
            self._reference_cache[key] = self.static_peak(ChainSpec.uniform(n), scenario, config).f_star
            logger.debug(f"Reference fidelity for N={n} {scenario.kind}: {self._reference_cache[key]:.6f}")
        return self._reference_cache[key]

    def static_scan(self, scenario: Scenario, n: int, coupling: str, values: Iterable[float],
                    config: Optional[PeakConfig] = None) -> List[StaticScanPoint]:
        """First-peak fidelity and ratio to F0 for each value of one boundary coupling."""
        config = self._config(config)
        values = [float(v) for v in values]
        if not values:
            raise ChainValidationError("empty scan range")
        for value in values:
            if value <= 0:
                raise ChainValidationError(f"Scanned {coupling} values must be positive, got {value}")
        specs = [chain_with(n, coupling, value) for value in values]

        f_0 = self.reference_fidelity(n, scenario, config)
        logger.info(f"Static {coupling} scan: N={n}, {len(values)} values, F0={f_0:.6f}")
        results = self.worker.map(peak_task, [(spec, scenario, config) for spec in specs])

        points = []
        for value, (f_peak, tau_star, error) in zip(values, results):
            if error is not None:
                raise NoArrivalDetected(f"{coupling}={value:g}: {error}")
            points.append(StaticScanPoint(value, f_peak, f_peak / f_0, tau_star))
        return points

    def evaluate_protocol(self, protocol: DriveProtocol, scenario: Scenario,
                          config: Optional[PeakConfig] = None) -> ParrondoOutcome:
        config = self._config(config)
        outcome = ParrondoOutcome(
            f_h1=self.static_peak(protocol.spec1, scenario, config).f_star,
            f_h2=self.static_peak(protocol.spec2, scenario, config).f_star,
            f_0=self.reference_fidelity(protocol.n, scenario, config),
            f_p=self.driven_peak(protocol, scenario, config).f_star,
        )
        logger.debug(f"omega={protocol.omega:g} eta={protocol.eta:g}: {outcome}")
        return outcome

    def sweep(self, protocol_template: DriveProtocol, grid: SweepGrid, scenario: Scenario,
              config: Optional[PeakConfig] = None) -> SweepResult:
        """Driven first-peak fidelity over every (omega, eta) of the grid.

        The couplings and application order come from the template; its own
        omega and eta are ignored. Failed points are kept as records.
        """
        config = self._config(config)
        points = grid.points()
        logger.info(f"Sweeping {len(points)} grid points for N={protocol_template.n} {scenario.kind}")
        items = [(protocol_template.with_drive(omega, eta), scenario, config) for omega, eta in points]
        results = self.worker.map(peak_task, items)

        records = []
        for (omega, eta), (f_p, _tau, error) in zip(points, results):
            if error is not None:
                logger.warning(f"Sweep point omega={omega:g}, eta={eta:g} failed: {error}")
            records.append(SweepRecord(omega, eta, f_p, error))

        result = SweepResult.from_records(records)
        if result is None:
            raise SweepFailedError(f"All {len(records)} sweep points failed")
        logger.info(f"Best point omega={result.best_omega:g}, eta={result.best_eta:g}, "
                    f"F_P={result.best_f_p:.6f} ({len(result.failures)} failed points)")
        return result

    def order_dependence(self, beta_a: float, beta_b: float, n: int, grid: SweepGrid,
                         config: Optional[PeakConfig] = None,
                         scenario: Optional[Scenario] = None) -> Tuple[SweepResult, SweepResult]:
        """Sweep optima for beta_a applied first and for the reversed order."""
        scenario = scenario or Scenario.bell()
        forward = DriveProtocol(chain_with(n, 'beta', beta_a), chain_with(n, 'beta', beta_b), grid.omega_min)
        first = self.sweep(forward, grid, scenario, config)
        if beta_a == beta_b:
            return first, first
        return first, self.sweep(forward.swapped(), grid, scenario, config)

    def frequency_scan(self, spec_first: ChainSpec, spec_second: ChainSpec, eta: float,
                       omegas: Sequence[float], scenario: Scenario,
                       config: Optional[PeakConfig] = None
                       ) -> Tuple[List[FrequencyScanPoint], List[FrequencyScanPoint]]:
        """First-peak fidelity against omega, starting with spec_first and then with spec_second."""
        config = self._config(config)
        omegas = [float(w) for w in omegas]
        if not omegas:
            raise ChainValidationError("empty scan range")
        template = DriveProtocol(spec_first, spec_second, omegas[0], eta)

        scans = []
        for protocol in (template, template.swapped()):
            items = [(protocol.with_drive(omega, eta), scenario, config) for omega in omegas]
            points = []
            for omega, (f_peak, tau_star, error) in zip(omegas, self.worker.map(peak_task, items)):
                if error is not None:
                    logger.warning(f"Frequency scan point omega={omega:g} failed: {error}")
                points.append(FrequencyScanPoint(omega, f_peak, tau_star))
            scans.append(points)
        return scans[0], scans[1]

    def _table_grid(self, table: Dict[str, Any], row: Dict[str, Any], search: str) -> SweepGrid:
        if search == SEARCH_GRID:
            if table['grid'] == 'bell':
                return SweepGrid.bell_default()
            return SweepGrid.single_qubit_default()
        if search == SEARCH_LOCAL:
            return SweepGrid.around(row['omega'], row['eta'])
        return SweepGrid(row['omega'], row['omega'], 0.01, row['eta'], row['eta'], 0.01)

    def reproduce_table(self, table_id: int, search: str = SEARCH_GRID,
                        config: Optional[PeakConfig] = None) -> List[Dict[str, Any]]:
        """Recompute a published table from its coupling pairs.

        search picks where the (omega, eta) optimum is looked for: the full
        captioned grid, a small window around the quoted point, or the quoted
        point only. The quoted point is always evaluated as well.
        """
        if search not in SEARCH_MODES:
            raise ConfigError(f"Invalid search mode: {search!r}")
        config = self._config(config)
        table = self.repository.get_table(table_id)
        scenario = Scenario.bell() if table['scenario'] == Scenario.BELL else Scenario.single()
        coupling = table['coupling']
        fixed = table.get('fixed', {})
        first_key, second_key = f'{coupling}_1', f'{coupling}_2'

        logger.info(f"Reproducing table {table_id}: {len(table['rows'])} rows, search={search}")
        rows = []
        for published in table['rows']:
            n = published['n']
            spec1 = chain_with(n, coupling, published[first_key], **fixed)
            spec2 = chain_with(n, coupling, published[second_key], **fixed)
            quoted = DriveProtocol(spec1, spec2, published['omega'], published['eta'])

            best = self.sweep(quoted, self._table_grid(table, published, search), scenario, config)
            outcome = self.evaluate_protocol(quoted.with_drive(best.best_omega, best.best_eta), scenario, config)
            f_p_quoted = self.driven_peak(quoted, scenario, config).f_star

            row = {'n': n, 'f_0': outcome.f_0, first_key: spec1.to_dict()[coupling]}
            if 'f_h1' in table['columns']:
                row['f_h1'] = outcome.f_h1
            row[second_key] = spec2.to_dict()[coupling]
            if 'f_h2' in table['columns']:
                row['f_h2'] = outcome.f_h2
            row.update({
                'omega': best.best_omega,
                'eta': best.best_eta,
                'f_p': best.best_f_p,
                'f_p_quoted': f_p_quoted,
                'is_parrondo': outcome.is_parrondo,
                'published_f_p': published['f_p'],
                'f_p_diff': best.best_f_p - published['f_p'],
            })
            rows.append(row)
        return rows
