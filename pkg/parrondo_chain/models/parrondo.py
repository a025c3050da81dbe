import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..exceptions import ChainValidationError

# coordinates are rounded to this many decimals so grid values print cleanly
GRID_DECIMALS = 10


def grid_values(start: float, stop: float, step: float, name: str = 'grid') -> np.ndarray:
    """Inclusive arithmetic grid start, start+step, ..., <= stop."""
    for label, value in (('start', start), ('stop', stop), ('step', step)):
        if not math.isfinite(float(value)):
            raise ChainValidationError(f"{name} {label} must be finite, got {value}")
    if step <= 0:
        raise ChainValidationError(f"{name} step must be positive, got {step}")
    if start > stop:
        raise ChainValidationError(f"empty scan range: {name} from {start} to {stop}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(count), GRID_DECIMALS) + 0.0


@dataclass(frozen=True)
class StaticScanPoint:
    coupling_value: float
    f_peak: float
    ratio: float
    tau_star: float = float('nan')

    @property
    def is_winning(self) -> bool:
        return self.ratio > 1.0


@dataclass(frozen=True)
class ParrondoOutcome:
    f_h1: float
    f_h2: float
    f_0: float
    f_p: float

    @property
    def is_parrondo(self) -> bool:
        return self.f_h1 < self.f_0 and self.f_h2 < self.f_0 and self.f_p > self.f_0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'f_h1': self.f_h1,
            'f_h2': self.f_h2,
            'f_0': self.f_0,
            'f_p': self.f_p,
            'is_parrondo': self.is_parrondo,
        }


@dataclass(frozen=True)
class SweepGrid:
    omega_min: float = 0.50
    omega_max: float = 3.50
    omega_step: float = 0.01
    eta_min: float = 0.00
    eta_max: float = 1.00
    eta_step: float = 0.01

    def __post_init__(self):
        if self.omega_min <= 0:
            raise ChainValidationError(f"omega_min must be positive (the period diverges at 0), got {self.omega_min}")
        if self.eta_min < 0 or self.eta_max > 1:
            raise ChainValidationError(f"eta range must lie within [0, 1], got [{self.eta_min}, {self.eta_max}]")
        # validates min <= max and step > 0
        self.omegas()
        self.etas()

    @classmethod
    def single_qubit_default(cls) -> 'SweepGrid':
        return cls(0.50, 3.50, 0.01, 0.00, 1.00, 0.01)

    @classmethod
    def bell_default(cls) -> 'SweepGrid':
        return cls(0.01, 3.00, 0.01, 0.00, 1.00, 0.01)

    @classmethod
    def around(cls, omega: float, eta: float, half_width: float = 0.05, step: float = 0.01) -> 'SweepGrid':
        """Local window centred on a known optimum, clipped to the valid domain."""
        return cls(
            omega_min=max(round(omega - half_width, GRID_DECIMALS), step),
            omega_max=round(omega + half_width, GRID_DECIMALS),
            omega_step=step,
            eta_min=max(round(eta - half_width, GRID_DECIMALS), 0.0),
            eta_max=min(round(eta + half_width, GRID_DECIMALS), 1.0),
            eta_step=step,
        )

    def omegas(self) -> np.ndarray:
        return grid_values(self.omega_min, self.omega_max, self.omega_step, 'omega')

    def etas(self) -> np.ndarray:
        return grid_values(self.eta_min, self.eta_max, self.eta_step, 'eta')

    def points(self) -> List[Tuple[float, float]]:
        """Grid points in export order: omega ascending, then eta ascending."""
        return [(float(w), float(e)) for w in self.omegas() for e in self.etas()]

    def __len__(self):
        return self.omegas().size * self.etas().size

    def to_dict(self) -> Dict[str, float]:
        return {
            'omega_min': self.omega_min, 'omega_max': self.omega_max, 'omega_step': self.omega_step,
            'eta_min': self.eta_min, 'eta_max': self.eta_max, 'eta_step': self.eta_step,
        }


@dataclass(frozen=True)
class SweepRecord:
    omega: float
    eta: float
    f_p: float
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass(frozen=True)
class SweepResult:
    best_omega: float
    best_eta: float
    best_f_p: float
    records: Tuple[SweepRecord, ...] = field(repr=False, default=())

    @property
    def failures(self) -> List[SweepRecord]:
        return [r for r in self.records if r.failed]

    @classmethod
    def from_records(cls, records: List[SweepRecord]) -> Optional['SweepResult']:
        """Argmax over successful records; ties keep the smaller omega, then the smaller eta."""
        best = None
        for record in sorted(records, key=lambda r: (r.omega, r.eta)):
            if record.failed:
                continue
            if best is None or record.f_p > best.f_p:
                best = record
        if best is None:
            return None
        return cls(best.omega, best.eta, best.f_p, tuple(records))

    def summary(self) -> Dict[str, float]:
        return {'omega': self.best_omega, 'eta': self.best_eta, 'f_p': self.best_f_p}


@dataclass(frozen=True)
class FrequencyScanPoint:
    omega: float
    f_peak: float
    tau_star: float


@dataclass(frozen=True, eq=False)
class DisorderScan:
    which: str
    delta_values: np.ndarray
    f_peak_values: np.ndarray
    baseline: float
    failures: Dict[float, str] = field(default_factory=dict)

    def __post_init__(self):
        deltas = np.asarray(self.delta_values, dtype=float)
        if deltas.size and np.any(np.diff(deltas) <= 0):
            raise ChainValidationError("Disorder deviations must increase strictly")
        if not np.any(deltas == 0.0):
            raise ChainValidationError("Disorder scan must include the undisordered point 0")

    def value_at(self, delta: float) -> float:
        index = int(np.argmin(np.abs(self.delta_values - delta)))
        return float(self.f_peak_values[index])

    def max_drop(self, window: float) -> float:
        """Largest first-peak loss relative to the baseline for |delta| <= window."""
        mask = np.abs(self.delta_values) <= window + 1e-12
        values = self.f_peak_values[mask]
        values = values[np.isfinite(values)]
        if values.size == 0:
            return float('nan')
        return float(self.baseline - values.min())
