from .chain_service import build_couplings, build_hamiltonian, hamiltonian_for, site_reversal
from .propagator_service import (
    diagonalize,
    decomposition_for,
    propagate_static,
    static_propagator,
    static_trajectory,
    transition_amplitude,
    one_period_propagator,
    driven_propagate,
    driven_trajectory,
    effective_couplings,
    effective_spec,
    effective_propagate,
    magnus_terms,
    magnus_terms_for,
    magnus_propagator,
)
from .fidelity_service import (
    single_qubit_fidelity,
    bell_fidelity,
    initial_state,
    initial_state_single,
    initial_state_bell,
    reduced_density_single,
    reduced_density_pair,
    fidelity_from_density_single,
    fidelity_from_density_bell,
    fidelity_series,
    first_arrival_peak,
    peak_fidelity,
)
from .parrondo_service import ParrondoService, classify_static, chain_with
from .disorder_service import DisorderService, apply_disorder
from .export_service import ExportService, read_series

__all__ = [
    'build_couplings', 'build_hamiltonian', 'hamiltonian_for', 'site_reversal',
    'diagonalize', 'decomposition_for', 'propagate_static', 'static_propagator',
    'static_trajectory', 'transition_amplitude', 'one_period_propagator', 'driven_propagate',
    'driven_trajectory', 'effective_couplings', 'effective_spec', 'effective_propagate',
    'magnus_terms', 'magnus_terms_for', 'magnus_propagator',
    'single_qubit_fidelity', 'bell_fidelity', 'initial_state', 'initial_state_single',
    'initial_state_bell', 'reduced_density_single', 'reduced_density_pair',
    'fidelity_from_density_single', 'fidelity_from_density_bell', 'fidelity_series',
    'first_arrival_peak', 'peak_fidelity',
    'ParrondoService', 'classify_static', 'chain_with',
    'DisorderService', 'apply_disorder',
    'ExportService', 'read_series',
]
