"""Command-line entry point.

Every subcommand writes its results under the output directory and logs to
stderr. Exit codes: 0 success, 1 computation failure, 2 usage or config error.
"""
import argparse
import json
import logging
import sys
from typing import List, Optional

from . import Toolkit, create_toolkit
from .exceptions import ChainValidationError, ConfigError, DimensionMismatchError, NoArrivalDetected
from .models import DriveProtocol, grid_values
from .services import (
    classify_static,
    decomposition_for,
    driven_propagate,
    effective_propagate,
    effective_spec,
    fidelity_series,
    first_arrival_peak,
    initial_state,
    propagate_static,
    read_series,
)
from .services.parrondo_service import SEARCH_GRID, SEARCH_MODES
from .utils.config import RunConfig
from .utils.logging import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

CONFIG_FLAGS = RunConfig.KEYS

# raised for bad input; anything else is a computation failure
USAGE_ERRORS = (ChainValidationError, ConfigError, DimensionMismatchError)


def _common_parser() -> argparse.ArgumentParser:
    """Options shared by every subcommand; all default to None so they only override when given."""
    p = argparse.ArgumentParser(add_help=False)
    run = p.add_argument_group('run')
    run.add_argument('--config', help='JSON config file; flags override its values')
    run.add_argument('--dump-config', metavar='PATH', help='Write the merged config to PATH and exit')
    run.add_argument('--output-dir', help='Directory for result files')
    run.add_argument('--format', choices=('csv', 'json'), help='Tabular output format')
    run.add_argument('--jobs', type=int, help='Worker processes (1 = serial, 0 = all cores)')
    run.add_argument('--log-file', help='Also log to <output>/logs/LOG_FILE')
    run.add_argument('-v', '--verbose', action='store_true', help='Debug logging')

    chain = p.add_argument_group('chain and drive')
    chain.add_argument('--scenario', choices=('single', 'bell'))
    chain.add_argument('--theta', type=float, help='Bloch polar angle of the single qubit')
    chain.add_argument('--phi', type=float, help='Bloch azimuth of the single qubit')
    chain.add_argument('--sign', help='Bell sign: + or -')
    chain.add_argument('--n', type=int, help='Chain length N')
    chain.add_argument('--alpha', type=float, help='Outer boundary coupling (first Hamiltonian)')
    chain.add_argument('--beta', type=float, help='Inner boundary coupling (first Hamiltonian)')
    chain.add_argument('--alpha-2', type=float, help='alpha of the second Hamiltonian')
    chain.add_argument('--beta-2', type=float, help='beta of the second Hamiltonian')
    chain.add_argument('--delta-alpha', type=float, help="Relative deviation of Bob's outer bond")
    chain.add_argument('--delta-beta', type=float, help="Relative deviation of Bob's inner bond")
    chain.add_argument('--omega', type=float, help='Driving frequency')
    chain.add_argument('--eta', type=float, help='Fraction of each period under the first Hamiltonian')

    peak = p.add_argument_group('peak detection and grid')
    peak.add_argument('--tau-max', type=float, help='Scan horizon (default 2N)')
    peak.add_argument('--dtau', type=float, help='Sample spacing')
    peak.add_argument('--threshold-fraction', type=float, help="Arrival threshold as a fraction of the series maximum")
    for name in ('omega-min', 'omega-max', 'omega-step', 'eta-min', 'eta-max', 'eta-step'):
        peak.add_argument(f'--{name}', type=float)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog='parrondo-chain',
        description='State transfer through XX spin chains with alternated boundary couplings.')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('scan-static', parents=[common], help='First-peak fidelity over one static coupling')
    p.add_argument('--coupling', choices=('alpha', 'beta'), required=True)
    p.add_argument('--from', dest='start', type=float, required=True)
    p.add_argument('--to', dest='stop', type=float, required=True)
    p.add_argument('--step', type=float, default=0.01)
    p.set_defaults(handler=cmd_scan_static)

    p = sub.add_parser('evolve', parents=[common], help='Fidelity time series')
    p.add_argument('--static', action='store_true', help='Static evolution of the first Hamiltonian')
    p.add_argument('--driven', action='store_true', help='Driven evolution')
    p.add_argument('--effective', action='store_true', help='High-frequency effective evolution')
    p.add_argument('--amplitudes-at', type=float, metavar='TAU', help='Also dump site amplitudes at TAU')
    p.set_defaults(handler=cmd_evolve)

    p = sub.add_parser('sweep', parents=[common], help='Driven fidelity over an (omega, eta) grid')
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser('table', parents=[common], help='Recompute a published table')
    p.add_argument('--id', dest='table_id', type=int, required=True)
    p.add_argument('--search', choices=SEARCH_MODES, default=SEARCH_GRID,
                   help='grid: captioned grid, local: window around the quoted point, quoted: quoted point only')
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser('disorder', parents=[common], help="Robustness against Bob-side deviations")
    p.add_argument('--which', choices=('delta_alpha', 'delta_beta'), default='delta_alpha')
    p.add_argument('--from', dest='start', type=float, default=-0.2)
    p.add_argument('--to', dest='stop', type=float, default=0.2)
    p.add_argument('--step', type=float, default=0.01)
    p.add_argument('--window', type=float, default=0.02, help='|delta| window for the max-drop summary')
    p.add_argument('--series', action='append', default=[], metavar='DA,DB',
                   help='Also write F(tau) for this (delta_alpha, delta_beta) pair; repeatable')
    p.set_defaults(handler=cmd_disorder)

    p = sub.add_parser('peak', parents=[common], help='First-arrival peak of a (tau, fidelity) CSV')
    p.add_argument('--input', required=True)
    p.set_defaults(handler=cmd_peak)

    p = sub.add_parser('scan-omega', parents=[common], help='Driven fidelity against omega, both orders')
    p.add_argument('--from', dest='start', type=float, default=0.5)
    p.add_argument('--to', dest='stop', type=float, default=3.5)
    p.add_argument('--step', type=float, default=0.01)
    p.set_defaults(handler=cmd_scan_omega)
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    overrides = {key: getattr(args, key) for key in CONFIG_FLAGS if getattr(args, key, None) is not None}
    return RunConfig(config_path=args.config, overrides=overrides)


def _tag(value: float) -> str:
    return f'{value:+.4g}'.replace('+', 'p').replace('-', 'm').replace('.', '_')


def cmd_scan_static(args, toolkit: Toolkit) -> int:
    config = toolkit.config
    scenario = config.scenario()
    values = grid_values(args.start, args.stop, args.step, args.coupling)
    n = config.chain_spec().n
    points = toolkit.parrondo.static_scan(scenario, n, args.coupling, values)

    best = max(points, key=lambda p: p.ratio)
    f_0 = toolkit.parrondo.reference_fidelity(n, scenario)
    toolkit.export.write_static_scan(f'static_scan_{args.coupling}', args.coupling, points)
    toolkit.export.write_summary(f'static_scan_{args.coupling}_summary', {
        'n': n,
        'scenario': scenario.to_dict(),
        'coupling': args.coupling,
        'f_0': f_0,
        'best': {args.coupling: best.coupling_value, 'f_peak': best.f_peak, 'ratio': best.ratio,
                 'class': classify_static(best.f_peak, f_0)},
        'winning': sum(1 for p in points if p.is_winning),
        'losing': sum(1 for p in points if not p.is_winning),
    })
    return EXIT_OK


def cmd_evolve(args, toolkit: Toolkit) -> int:
    config = toolkit.config
    scenario = config.scenario()
    peak_config = config.peak_config()
    modes = [m for m in ('static', 'driven', 'effective') if getattr(args, m)] or ['static']
    protocol = config.protocol() if ('driven' in modes or 'effective' in modes) else None

    summary = {'scenario': scenario.to_dict()}
    for mode in modes:
        if mode == 'static':
            evolver = decomposition_for(config.chain_spec())
        elif mode == 'driven':
            evolver = protocol
        else:
            evolver = decomposition_for(effective_spec(protocol))
        series = fidelity_series(evolver, scenario, peak_config)
        toolkit.export.write_series(f'series_{mode}', series)
        try:
            summary[mode] = first_arrival_peak(series, peak_config).to_dict()
        except NoArrivalDetected as e:
            logger.warning(f"No first-arrival peak for {mode} evolution: {e}")
            summary[mode] = None
    if protocol is not None:
        summary['protocol'] = protocol.to_dict()
    else:
        summary['chain'] = config.chain_spec().to_dict()

    if args.amplitudes_at is not None:
        tau = args.amplitudes_at
        for mode in modes:
            state = _evolve_state(mode, config, protocol, scenario, tau)
            toolkit.export.write_amplitudes(f'amplitudes_{mode}_tau{_tag(tau)}', state)

    toolkit.export.write_summary('evolve_summary', summary)
    return EXIT_OK


def _evolve_state(mode: str, config: RunConfig, protocol: Optional[DriveProtocol], scenario, tau: float):
    n = config.chain_spec().n
    state = initial_state(scenario, n)
    if mode == 'static':
        return propagate_static(decomposition_for(config.chain_spec()), state, tau)
    if mode == 'driven':
        return driven_propagate(protocol, state, tau)
    return effective_propagate(protocol, state, tau)


def cmd_sweep(args, toolkit: Toolkit) -> int:
    config = toolkit.config
    scenario = config.scenario()
    protocol = config.protocol()
    grid = config.sweep_grid()
    result = toolkit.parrondo.sweep(protocol, grid, scenario)
    outcome = toolkit.parrondo.evaluate_protocol(protocol.with_drive(result.best_omega, result.best_eta), scenario)

    toolkit.export.write_sweep('sweep_grid', result)
    toolkit.export.write_summary('sweep_summary', {
        'scenario': scenario.to_dict(),
        'spec1': protocol.spec1.to_dict(),
        'spec2': protocol.spec2.to_dict(),
        'grid': grid.to_dict(),
        'best': result.summary(),
        'outcome': outcome.to_dict(),
        'failed_points': len(result.failures),
    })
    return EXIT_OK


def cmd_table(args, toolkit: Toolkit) -> int:
    rows = toolkit.parrondo.reproduce_table(args.table_id, search=args.search)
    toolkit.export.write_table(f'table_{args.table_id}', rows)
    return EXIT_OK


def _parse_pair(text: str):
    try:
        first, second = (float(part) for part in text.split(','))
    except ValueError:
        raise ConfigError(f"Invalid deviation pair {text!r}; expected DA,DB")
    return first, second


def cmd_disorder(args, toolkit: Toolkit) -> int:
    config = toolkit.config
    scenario = config.scenario()
    protocol = config.protocol()
    pairs = [_parse_pair(text) for text in args.series]

    scan = toolkit.disorder.disorder_scan(protocol, scenario, args.which, (args.start, args.stop), args.step)
    toolkit.export.write_disorder_scan(f'disorder_{args.which}', scan)

    for (delta_alpha, delta_beta), series in zip(pairs, toolkit.disorder.disorder_time_series(protocol, scenario, pairs)):
        toolkit.export.write_series(f'series_disorder_da{_tag(delta_alpha)}_db{_tag(delta_beta)}', series)

    toolkit.export.write_summary(f'disorder_{args.which}_summary', {
        'protocol': protocol.to_dict(),
        'scenario': scenario.to_dict(),
        'which': args.which,
        'points': len(scan.delta_values),
        'baseline': scan.baseline,
        'window': args.window,
        'max_drop': scan.max_drop(args.window),
        'failures': {format(delta, 'g'): error for delta, error in scan.failures.items()},
    })
    return EXIT_OK


def cmd_peak(args, toolkit: Toolkit) -> int:
    config = toolkit.config
    series = read_series(args.input)
    peak = first_arrival_peak(series, config.peak_config())
    toolkit.export.write_summary('peak', peak.to_dict())
    sys.stdout.write(json.dumps(peak.to_dict(), sort_keys=True) + '\n')
    return EXIT_OK


def cmd_scan_omega(args, toolkit: Toolkit) -> int:
    config = toolkit.config
    protocol = config.protocol()
    omegas = grid_values(args.start, args.stop, args.step, 'omega')
    if omegas[0] <= 0:
        raise ChainValidationError("omega scan must start above 0")
    forward, reverse = toolkit.parrondo.frequency_scan(
        protocol.spec1, protocol.spec2, protocol.eta, omegas, config.scenario())
    toolkit.export.write_frequency_scan('frequency_scan', forward, reverse)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(logging.DEBUG if args.verbose else logging.INFO)

    try:
        config = load_config(args)
        if args.dump_config:
            config.save(args.dump_config)
            return EXIT_OK
        if config.log_file:
            setup_logging(logging.DEBUG if args.verbose else logging.INFO, config.log_file, config.output_dir)
        toolkit = create_toolkit(config)
        logger.info(f"Running {args.command}")
        return args.handler(args, toolkit)
    except USAGE_ERRORS as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE
    except Exception as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_FAILURE
