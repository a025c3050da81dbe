class ParrondoChainError(Exception):
    """Base class for errors raised by the toolkit."""


class ChainValidationError(ParrondoChainError, ValueError):
    """Invalid chain, protocol, grid or scenario parameters."""


class ConfigError(ParrondoChainError, ValueError):
    """Invalid run configuration."""


class DimensionMismatchError(ParrondoChainError, ValueError):
    """Operands of a propagation live in spaces of different dimension."""


class DiagonalizationError(ParrondoChainError, RuntimeError):
    """The eigensolver failed on a Hamiltonian matrix."""

    def __init__(self, dimension: int, reason: str):
        self.dimension = dimension
        super().__init__(f"Eigensolver failed on a {dimension}x{dimension} Hamiltonian: {reason}")


class PropagationError(ParrondoChainError, RuntimeError):
    """Amplitudes or fidelities left their physical range beyond roundoff."""


class NoArrivalDetected(ParrondoChainError, RuntimeError):
    """No qualifying first-arrival peak in a fidelity series."""


class SweepFailedError(ParrondoChainError, RuntimeError):
    """Every point of a parameter sweep failed."""
