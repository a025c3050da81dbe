import numpy as np

from ..exceptions import ChainValidationError
from ..models import ChainSpec, CouplingVector, HamiltonianMatrix


def build_couplings(spec: ChainSpec) -> CouplingVector:
    """Bond profile of a chain; index 0 is bond (1, 2), index N-2 is bond (N-1, N)."""
    if not isinstance(spec, ChainSpec):
        raise ChainValidationError(f"Expected a ChainSpec, got {type(spec).__name__}")

    n = spec.n
    values = np.full(n - 1, spec.gamma, dtype=float)
    values[0] = spec.alpha
    values[1] = spec.beta
    # Bob-side bonds carry the deviations, Alice's side never does
    values[n - 3] = spec.beta * (1.0 + spec.delta_beta)
    values[n - 2] = spec.alpha * (1.0 + spec.delta_alpha)
    return CouplingVector(values)


def build_hamiltonian(couplings: CouplingVector) -> HamiltonianMatrix:
    if not isinstance(couplings, CouplingVector):
        couplings = CouplingVector(couplings)
    return HamiltonianMatrix(couplings)


def hamiltonian_for(spec: ChainSpec) -> HamiltonianMatrix:
    return build_hamiltonian(build_couplings(spec))


def site_reversal(n: int) -> np.ndarray:
    """Permutation matrix mapping site k to N+1-k."""
    return np.eye(n)[::-1]
