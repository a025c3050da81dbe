from .chain import ChainSpec, CouplingVector, HamiltonianMatrix
from .evolution import AmplitudeState, SpectralDecomposition, DriveProtocol, MagnusTerms
from .fidelity import BlochAngles, BellSign, Scenario, PeakConfig, FidelitySeries, Peak
from .parrondo import (
    StaticScanPoint,
    ParrondoOutcome,
    SweepGrid,
    SweepRecord,
    SweepResult,
    FrequencyScanPoint,
    DisorderScan,
    grid_values,
)

__all__ = [
    'ChainSpec',
    'CouplingVector',
    'HamiltonianMatrix',
    'AmplitudeState',
    'SpectralDecomposition',
    'DriveProtocol',
    'MagnusTerms',
    'BlochAngles',
    'BellSign',
    'Scenario',
    'PeakConfig',
    'FidelitySeries',
    'Peak',
    'StaticScanPoint',
    'ParrondoOutcome',
    'SweepGrid',
    'SweepRecord',
    'SweepResult',
    'FrequencyScanPoint',
    'DisorderScan',
    'grid_values',
]
