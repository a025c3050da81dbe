import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Any, Dict, Optional

import numpy as np

from ..exceptions import ChainValidationError

FIDELITY_TOLERANCE = 1e-12


class BellSign(IntEnum):
    """Selects |psi+> = (|01> + |10>)/sqrt(2) or |psi-> on Alice's sites (1, 2)."""
    PLUS = 1
    MINUS = -1

    @classmethod
    def parse(cls, value) -> 'BellSign':
        if isinstance(value, str):
            lookup = {'+': cls.PLUS, 'plus': cls.PLUS, '+1': cls.PLUS, '1': cls.PLUS,
                      '-': cls.MINUS, 'minus': cls.MINUS, '-1': cls.MINUS}
            if value.strip().lower() in lookup:
                return lookup[value.strip().lower()]
            raise ChainValidationError(f"Unknown Bell sign: {value!r}")
        try:
            return cls(int(value))
        except (TypeError, ValueError):
            raise ChainValidationError(f"Bell sign must be +1 or -1, got {value!r}")


@dataclass(frozen=True)
class BlochAngles:
    theta: float = math.pi
    phi: float = 0.0

    def __post_init__(self):
        theta, phi = float(self.theta), float(self.phi)
        if not math.isfinite(theta) or not 0.0 <= theta <= math.pi:
            raise ChainValidationError(f"theta must lie in [0, pi], got {self.theta}")
        if not math.isfinite(phi) or not 0.0 <= phi < 2.0 * math.pi:
            raise ChainValidationError(f"phi must lie in [0, 2*pi), got {self.phi}")
        object.__setattr__(self, 'theta', theta)
        object.__setattr__(self, 'phi', phi)


@dataclass(frozen=True)
class Scenario:
    """Transfer task: a single qubit from site 1 to N, or a Bell pair (1, 2) -> (N-1, N)."""
    kind: str
    angles: BlochAngles = BlochAngles()
    sign: BellSign = BellSign.PLUS

    SINGLE = 'single'
    BELL = 'bell'

    def __post_init__(self):
        if self.kind not in (self.SINGLE, self.BELL):
            raise ChainValidationError(f"Unknown scenario {self.kind!r}; expected 'single' or 'bell'")
        object.__setattr__(self, 'sign', BellSign.parse(self.sign))

    @classmethod
    def single(cls, theta: float = math.pi, phi: float = 0.0) -> 'Scenario':
        return cls(cls.SINGLE, angles=BlochAngles(theta, phi))

    @classmethod
    def bell(cls, sign=BellSign.PLUS) -> 'Scenario':
        return cls(cls.BELL, sign=BellSign.parse(sign))

    @property
    def is_bell(self) -> bool:
        return self.kind == self.BELL

    def to_dict(self) -> Dict[str, Any]:
        if self.is_bell:
            return {'kind': self.kind, 'sign': int(self.sign)}
        return {'kind': self.kind, 'theta': self.angles.theta, 'phi': self.angles.phi}


@dataclass(frozen=True)
class PeakConfig:
    """Sampling grid and prominence rule for first-arrival detection.

    tau_max=None means a horizon of 2N for the chain being scanned.
    """
    tau_max: Optional[float] = None
    dtau: float = 0.01
    threshold_fraction: float = 0.795

    def __post_init__(self):
        if self.tau_max is not None:
            tau_max = float(self.tau_max)
            if not math.isfinite(tau_max) or tau_max <= 0:
                raise ChainValidationError(f"tau_max must be positive, got {self.tau_max}")
            object.__setattr__(self, 'tau_max', tau_max)
        dtau = float(self.dtau)
        if not math.isfinite(dtau) or dtau <= 0:
            raise ChainValidationError(f"dtau must be positive, got {self.dtau}")
        object.__setattr__(self, 'dtau', dtau)
        fraction = float(self.threshold_fraction)
        if not 0.0 < fraction <= 1.0:
            raise ChainValidationError(f"threshold_fraction must lie in (0, 1], got {self.threshold_fraction}")
        object.__setattr__(self, 'threshold_fraction', fraction)
        if self.tau_max is not None and self.tau_max / dtau < 10:
            raise ChainValidationError(
                f"tau_max/dtau must be at least 10, got {self.tau_max}/{dtau}")

    def horizon(self, n_sites: int) -> float:
        return self.tau_max if self.tau_max is not None else 2.0 * n_sites

    def time_grid(self, n_sites: int) -> np.ndarray:
        horizon = self.horizon(n_sites)
        count = int(math.floor(horizon / self.dtau + 1e-9)) + 1
        if count < 11:
            raise ChainValidationError(f"Scan horizon {horizon} holds fewer than 10 steps of {self.dtau}")
        return np.arange(count) * self.dtau


@dataclass(frozen=True, eq=False)
class FidelitySeries:
    taus: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        taus = np.array(self.taus, dtype=float)
        values = np.array(self.values, dtype=float)
        if taus.ndim != 1 or taus.shape != values.shape:
            raise ChainValidationError(
                f"Series needs equal-length 1-D arrays, got {taus.shape} and {values.shape}")
        if taus.size and (taus[0] != 0.0 or np.any(np.diff(taus) <= 0)):
            raise ChainValidationError("Series times must start at 0 and increase strictly")
        if np.any(values < -FIDELITY_TOLERANCE) or np.any(values > 1.0 + FIDELITY_TOLERANCE):
            raise ChainValidationError("Series fidelities must lie in [0, 1]")
        taus.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, 'taus', taus)
        object.__setattr__(self, 'values', values)

    def __len__(self):
        return self.taus.size

    @property
    def tau_max(self) -> float:
        return float(self.taus[-1]) if self.taus.size else 0.0


@dataclass(frozen=True)
class Peak:
    tau_star: float
    f_star: float

    def to_dict(self) -> Dict[str, float]:
        return {'tau_star': self.tau_star, 'f_star': self.f_star}
