import math
from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np

from ..exceptions import ChainValidationError

MIN_SITES = 6


def _require_finite(name: str, value: float) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ChainValidationError(f"{name} must be a real number, got {value!r}")
    if not math.isfinite(value):
        raise ChainValidationError(f"{name} must be finite, got {value}")
    return value


@dataclass(frozen=True)
class ChainSpec:
    """Mirror-symmetric XX chain with tunable boundary couplings.

    alpha sits on bonds 1-2 and (N-1)-N, beta on bonds 2-3 and (N-2)-(N-1),
    every other bond is gamma = 1. The deviations only touch Bob's side.
    """
    n: int
    alpha: float = 1.0
    beta: float = 1.0
    delta_alpha: float = 0.0
    delta_beta: float = 0.0
    gamma: float = field(default=1.0, repr=False)

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise ChainValidationError(f"Chain length must be an integer, got {self.n!r}")
        if self.n < MIN_SITES:
            raise ChainValidationError(f"Chain length must be at least {MIN_SITES}, got {self.n}")
        object.__setattr__(self, 'n', int(self.n))

        for name in ('alpha', 'beta', 'delta_alpha', 'delta_beta', 'gamma'):
            # + 0.0 folds -0.0 into 0.0 so equal specs hash and format identically
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)) + 0.0)

        if self.gamma != 1.0:
            raise ChainValidationError(f"Bulk coupling gamma is fixed to 1, got {self.gamma}")
        if self.alpha <= 0:
            raise ChainValidationError(f"alpha must be positive, got {self.alpha}")
        if self.beta <= 0:
            raise ChainValidationError(f"beta must be positive, got {self.beta}")
        if 1.0 + self.delta_alpha <= 0:
            raise ChainValidationError(f"delta_alpha={self.delta_alpha} makes bond (N-1, N) non-positive")
        if 1.0 + self.delta_beta <= 0:
            raise ChainValidationError(f"delta_beta={self.delta_beta} makes bond (N-2, N-1) non-positive")

    @property
    def is_mirror_symmetric(self) -> bool:
        return self.delta_alpha == 0.0 and self.delta_beta == 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'alpha': self.alpha,
            'beta': self.beta,
            'delta_alpha': self.delta_alpha,
            'delta_beta': self.delta_beta,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ChainSpec':
        """Build a spec from its JSON object; omitted deltas default to 0."""
        unknown = set(data) - {'n', 'alpha', 'beta', 'delta_alpha', 'delta_beta'}
        if unknown:
            raise ChainValidationError(f"Unknown chain keys: {sorted(unknown)}")
        missing = {'n', 'alpha', 'beta'} - set(data)
        if missing:
            raise ChainValidationError(f"Missing chain keys: {sorted(missing)}")
        return cls(
            n=data['n'],
            alpha=data['alpha'],
            beta=data['beta'],
            delta_alpha=data.get('delta_alpha', 0.0),
            delta_beta=data.get('delta_beta', 0.0),
        )

    @classmethod
    def uniform(cls, n: int) -> 'ChainSpec':
        return cls(n=n, alpha=1.0, beta=1.0)


@dataclass(frozen=True, eq=False)
class CouplingVector:
    """Bond strengths J_{i,i+1}/J_0, entry i (0-based) for bond (i+1, i+2)."""
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise ChainValidationError(f"Couplings must be a non-empty 1-D array, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ChainValidationError("Couplings must be finite")
        if np.any(values <= 0):
            bad = int(np.argmin(values))
            raise ChainValidationError(
                f"Coupling of bond ({bad + 1}, {bad + 2}) must be positive, got {values[bad]}")
        values.flags.writeable = False
        object.__setattr__(self, 'values', values)

    @property
    def n_sites(self) -> int:
        return self.values.size + 1

    def __len__(self):
        return self.values.size

    def __repr__(self):
        return f"<CouplingVector N={self.n_sites} {np.array2string(self.values, precision=4)}>"


@dataclass(frozen=True, eq=False)
class HamiltonianMatrix:
    """Single-excitation block of the dimensionless XX Hamiltonian.

    Real symmetric tridiagonal with zero diagonal; the vacuum is not a row
    of this matrix (it has zero energy and is tracked as a scalar).
    """
    offdiagonal: CouplingVector

    @property
    def dimension(self) -> int:
        return self.offdiagonal.n_sites

    @property
    def diagonal(self) -> np.ndarray:
        return np.zeros(self.dimension)

    def to_dense(self) -> np.ndarray:
        values = self.offdiagonal.values
        return np.diag(values, 1) + np.diag(values, -1)

    def __repr__(self):
        return f"<HamiltonianMatrix dimension={self.dimension}>"
