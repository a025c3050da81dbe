import os
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from ..exceptions import ChainValidationError, ConfigError
from ..models import ChainSpec, DriveProtocol, PeakConfig, Scenario, SweepGrid
from .path import OUTPUT_DIR_ENV

logger = logging.getLogger(__name__)

JOBS_ENV = 'PARRONDO_CHAIN_JOBS'

_INT_KEYS = ('n', 'jobs')
_FLOAT_KEYS = ('theta', 'phi', 'alpha', 'beta', 'delta_alpha', 'delta_beta', 'alpha_2', 'beta_2',
               'omega', 'eta', 'tau_max', 'dtau', 'threshold_fraction',
               'omega_min', 'omega_max', 'omega_step', 'eta_min', 'eta_max', 'eta_step')
_NULLABLE_KEYS = ('alpha_2', 'beta_2', 'tau_max', 'omega_min', 'omega_max', 'omega_step',
                  'eta_min', 'eta_max', 'eta_step', 'log_file')
_GRID_KEYS = ('omega_min', 'omega_max', 'omega_step', 'eta_min', 'eta_max', 'eta_step')


class RunConfig:
    """Configuration of one CLI run.

    Values resolve as: explicit set() / overrides, then environment, then the
    JSON file, then the DEFAULT_* class constants. Unknown keys are rejected.
    """
    DEFAULT_SCENARIO = Scenario.SINGLE
    DEFAULT_THETA = math.pi
    DEFAULT_PHI = 0.0
    DEFAULT_SIGN = 1
    DEFAULT_N = 10
    DEFAULT_ALPHA = 1.0
    DEFAULT_BETA = 1.0
    DEFAULT_DELTA_ALPHA = 0.0
    DEFAULT_DELTA_BETA = 0.0
    DEFAULT_ALPHA_2 = None  # None: same as alpha
    DEFAULT_BETA_2 = None
    DEFAULT_OMEGA = 1.0
    DEFAULT_ETA = 0.5
    DEFAULT_TAU_MAX = None  # None: 2N
    DEFAULT_DTAU = 0.01
    DEFAULT_THRESHOLD_FRACTION = 0.795
    DEFAULT_OMEGA_MIN = None  # grid keys left at None take the scenario's default grid
    DEFAULT_OMEGA_MAX = None
    DEFAULT_OMEGA_STEP = None
    DEFAULT_ETA_MIN = None
    DEFAULT_ETA_MAX = None
    DEFAULT_ETA_STEP = None
    DEFAULT_OUTPUT_DIR = 'output'
    DEFAULT_FORMAT = 'csv'
    DEFAULT_JOBS = 1
    DEFAULT_LOG_FILE = None

    KEYS = ('scenario', 'theta', 'phi', 'sign', 'n', 'alpha', 'beta', 'delta_alpha', 'delta_beta',
            'alpha_2', 'beta_2', 'omega', 'eta', 'tau_max', 'dtau', 'threshold_fraction',
            'omega_min', 'omega_max', 'omega_step', 'eta_min', 'eta_max', 'eta_step',
            'output_dir', 'format', 'jobs', 'log_file')

    def __init__(self, config_path: Optional[Path] = None, environ: Optional[Mapping[str, str]] = None,
                 overrides: Optional[Mapping[str, Any]] = None):
        self.config_path = Path(config_path) if config_path else None
        self._config: Dict[str, Any] = {}
        self._load_config()
        self._apply_environment(os.environ if environ is None else environ)
        for key, value in (overrides or {}).items():
            if value is not None:
                self.set(key, value)

    def _load_config(self):
        """Load configuration from the JSON file, if one was given."""
        if self.config_path is None:
            return
        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except FileNotFoundError:
            raise ConfigError(f"Config file not found: {self.config_path}")
        except json.JSONDecodeError as e:
            raise ConfigError(f"Invalid JSON in {self.config_path}: {e}")
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {self.config_path} must hold a JSON object")
        for key, value in data.items():
            self.set(key, value)
        logger.info(f"Configuration loaded from {self.config_path}")

    def _apply_environment(self, environ: Mapping[str, str]):
        if environ.get(OUTPUT_DIR_ENV):
            self.set('output_dir', environ[OUTPUT_DIR_ENV])
        if environ.get(JOBS_ENV):
            self.set('jobs', environ[JOBS_ENV])

    def _coerce(self, key: str, value: Any) -> Any:
        if value is None:
            if key in _NULLABLE_KEYS:
                return None
            raise ConfigError(f"Invalid {key}: null is not allowed")
        try:
            if key in _INT_KEYS:
                if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                    raise ValueError(value)
                return int(value)
            if key in _FLOAT_KEYS:
                if isinstance(value, bool):
                    raise ValueError(value)
                return float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"Invalid {key}: {value!r}")
        if key == 'scenario' and value not in (Scenario.SINGLE, Scenario.BELL):
            raise ConfigError(f"Invalid scenario: {value!r}")
        if key == 'format' and value not in ('csv', 'json'):
            raise ConfigError(f"Invalid format: {value!r}")
        if key == 'sign':
            try:
                return int(Scenario.bell(value).sign)
            except ChainValidationError as e:
                raise ConfigError(str(e))
        if key in ('output_dir', 'log_file'):
            return str(value)
        return value

    def get(self, key: str, default=None):
        """Get a configuration value, falling back to the class default."""
        if key in self._config:
            return self._config[key]
        default_attr = f'DEFAULT_{key.upper()}'
        if hasattr(self, default_attr):
            return getattr(self, default_attr)
        return default

    def set(self, key: str, value: Any):
        if key not in self.KEYS:
            raise ConfigError(f"Unknown config key: {key!r}")
        self._config[key] = self._coerce(key, value)

    def to_dict(self) -> Dict[str, Any]:
        """Every key with its resolved value."""
        return {key: self.get(key) for key in self.KEYS}

    def save(self, path: Path) -> Path:
        """Write the merged configuration as JSON; loading it back gives an equal config."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
            f.write('\n')
        logger.info(f"Configuration saved to {path}")
        return path

    def __eq__(self, other):
        return isinstance(other, RunConfig) and self.to_dict() == other.to_dict()

    @property
    def output_dir(self) -> Path:
        return Path(self.get('output_dir'))

    @property
    def output_format(self) -> str:
        return self.get('format')

    @property
    def jobs(self) -> int:
        jobs = self.get('jobs')
        if jobs < 0:
            raise ConfigError(f"Invalid jobs: {jobs}")
        return jobs

    @property
    def log_file(self) -> Optional[str]:
        return self.get('log_file')

    def chain_spec(self) -> ChainSpec:
        """Static chain; also the first Hamiltonian of a driven protocol."""
        try:
            return ChainSpec(
                n=self.get('n'),
                alpha=self.get('alpha'),
                beta=self.get('beta'),
                delta_alpha=self.get('delta_alpha'),
                delta_beta=self.get('delta_beta'),
            )
        except ChainValidationError as e:
            raise ConfigError(f"Invalid chain: {e}")

    def second_spec(self) -> ChainSpec:
        first = self.chain_spec()
        alpha_2, beta_2 = self.get('alpha_2'), self.get('beta_2')
        try:
            return ChainSpec(
                n=first.n,
                alpha=first.alpha if alpha_2 is None else alpha_2,
                beta=first.beta if beta_2 is None else beta_2,
                delta_alpha=first.delta_alpha,
                delta_beta=first.delta_beta,
            )
        except ChainValidationError as e:
            raise ConfigError(f"Invalid second chain: {e}")

    def protocol(self) -> DriveProtocol:
        try:
            return DriveProtocol(self.chain_spec(), self.second_spec(), self.get('omega'), self.get('eta'))
        except ChainValidationError as e:
            raise ConfigError(f"Invalid protocol: {e}")

    def scenario(self) -> Scenario:
        try:
            if self.get('scenario') == Scenario.BELL:
                return Scenario.bell(self.get('sign'))
            return Scenario.single(self.get('theta'), self.get('phi'))
        except ChainValidationError as e:
            raise ConfigError(f"Invalid scenario: {e}")

    def peak_config(self) -> PeakConfig:
        try:
            return PeakConfig(self.get('tau_max'), self.get('dtau'), self.get('threshold_fraction'))
        except ChainValidationError as e:
            raise ConfigError(f"Invalid peak detection settings: {e}")

    def sweep_grid(self) -> SweepGrid:
        """Grid from the config; unset bounds come from the scenario's default grid."""
        if self.get('scenario') == Scenario.BELL:
            base = SweepGrid.bell_default().to_dict()
        else:
            base = SweepGrid.single_qubit_default().to_dict()
        for key in _GRID_KEYS:
            if self.get(key) is not None:
                base[key] = self.get(key)
        try:
            return SweepGrid(**base)
        except ChainValidationError as e:
            raise ConfigError(f"Invalid sweep grid: {e}")
