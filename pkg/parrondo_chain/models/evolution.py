import math
from dataclasses import dataclass, replace
from typing import Any, Dict

import numpy as np

from ..exceptions import ChainValidationError, DimensionMismatchError, PropagationError
from .chain import ChainSpec

NORM_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class AmplitudeState:
    """Vacuum amplitude a0 plus one complex amplitude per site (0-based storage)."""
    a0: complex
    a: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=complex)
        if a.ndim != 1:
            raise DimensionMismatchError(f"Site amplitudes must be 1-D, got shape {a.shape}")
        a.flags.writeable = False
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'a0', complex(self.a0))
        drift = abs(self.norm - 1.0)
        if drift > NORM_TOLERANCE:
            raise PropagationError(f"State norm deviates from 1 by {drift:.3e}")

    @property
    def n_sites(self) -> int:
        return self.a.size

    @property
    def norm(self) -> float:
        return abs(self.a0) ** 2 + float(np.vdot(self.a, self.a).real)

    def amplitude(self, site: int) -> complex:
        """Amplitude at a 1-based site label."""
        if not 1 <= site <= self.n_sites:
            raise ChainValidationError(f"Site {site} out of range 1..{self.n_sites}")
        return complex(self.a[site - 1])

    def with_sites(self, a: np.ndarray) -> 'AmplitudeState':
        """Same vacuum amplitude, new site amplitudes.

        A norm error within NORM_TOLERANCE is rescaled away, so rounding does
        not pile up over long chains of propagations.
        """
        a = np.asarray(a, dtype=complex)
        weight = float(np.vdot(a, a).real)
        target = 1.0 - abs(self.a0) ** 2
        if weight > 0.0 and abs(weight - target) <= NORM_TOLERANCE:
            a = a * math.sqrt(target / weight)
        return AmplitudeState(self.a0, a)

    @classmethod
    def localized(cls, site: int, n_sites: int) -> 'AmplitudeState':
        """Single excitation at a 1-based site."""
        if not 1 <= site <= n_sites:
            raise ChainValidationError(f"Site {site} out of range 1..{n_sites}")
        a = np.zeros(n_sites, dtype=complex)
        a[site - 1] = 1.0
        return cls(0.0, a)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """H = V diag(eigenvalues) V^T with eigenvalues ascending."""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        for array in (self.eigenvalues, self.eigenvectors):
            array.flags.writeable = False

    @property
    def dimension(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


@dataclass(frozen=True)
class DriveProtocol:
    """Piecewise-constant alternation spec1 -> spec2 with period 2*pi/omega.

    spec1 acts for T1 = eta*T at the start of each period, spec2 for the rest.
    """
    spec1: ChainSpec
    spec2: ChainSpec
    omega: float
    eta: float = 0.5

    def __post_init__(self):
        if self.spec1.n != self.spec2.n:
            raise ChainValidationError(
                f"Driven chains must have equal length, got {self.spec1.n} and {self.spec2.n}")
        omega = float(self.omega)
        eta = float(self.eta)
        if not math.isfinite(omega) or omega <= 0:
            raise ChainValidationError(f"Driving frequency omega must be positive and finite, got {self.omega}")
        if not math.isfinite(eta) or not 0.0 <= eta <= 1.0:
            raise ChainValidationError(f"Duty parameter eta must lie in [0, 1], got {self.eta}")
        object.__setattr__(self, 'omega', omega)
        object.__setattr__(self, 'eta', eta)

    @property
    def n(self) -> int:
        return self.spec1.n

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def t1(self) -> float:
        return self.eta * self.period

    @property
    def t2(self) -> float:
        # defined as the remainder so that t1 + t2 == period exactly
        return self.period - self.t1

    @property
    def delta_t(self) -> float:
        return (self.eta - 0.5) * self.period

    def swapped(self) -> 'DriveProtocol':
        return replace(self, spec1=self.spec2, spec2=self.spec1)

    def with_drive(self, omega: float, eta: float) -> 'DriveProtocol':
        return replace(self, omega=omega, eta=eta)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'spec1': self.spec1.to_dict(),
            'spec2': self.spec2.to_dict(),
            'omega': self.omega,
            'eta': self.eta,
        }


@dataclass(frozen=True, eq=False)
class MagnusTerms:
    """First two Magnus terms of the one-period propagator (both anti-Hermitian)."""
    omega1: np.ndarray
    omega2: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.omega1 + self.omega2
