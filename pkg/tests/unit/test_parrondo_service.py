import math

import pytest

from parrondo_chain.exceptions import ChainValidationError, NoArrivalDetected, SweepFailedError
from parrondo_chain.models import ChainSpec, DriveProtocol, PeakConfig, SweepGrid
from parrondo_chain.services import ParrondoService, chain_with, classify_static
from parrondo_chain.services.parrondo_service import LOSING, WINNING, peak_task


@pytest.fixture
def mocked_service(mock_worker, reference_repository, mocker):
    service = ParrondoService(PeakConfig(), mock_worker, reference_repository)
    mocker.patch.object(service, 'reference_fidelity', return_value=0.8)
    return service


def test_classify_static():
    assert classify_static(0.9, 0.8) == WINNING
    assert classify_static(0.8, 0.8) == LOSING
    with pytest.raises(ChainValidationError):
        classify_static(0.5, 0.0)


def test_chain_with():
    assert chain_with(10, 'alpha', 0.5) == ChainSpec(10, alpha=0.5)
    assert chain_with(10, 'beta', 0.79, alpha=0.9) == ChainSpec(10, alpha=0.9, beta=0.79)
    with pytest.raises(ChainValidationError):
        chain_with(10, 'gamma', 0.5)


def test_peak_task_reports_failure_instead_of_raising(single):
    f_peak, tau_star, error = peak_task((ChainSpec.uniform(10), single, PeakConfig(tau_max=0.1, dtau=0.01)))
    assert math.isnan(f_peak)
    assert math.isnan(tau_star)
    assert 'no arrival' in error


def test_peak_task_accepts_protocols(single, peak_config, losing_pair_protocol):
    f_peak, tau_star, error = peak_task((losing_pair_protocol, single, peak_config))
    assert error is None
    assert 0.0 < f_peak <= 1.0
    assert tau_star > 0.0


class TestStaticScan:

    def test_ratios_against_reference(self, mocked_service, mock_worker, single):
        mock_worker.map.return_value = [(0.88, 6.0, None), (0.72, 6.5, None)]
        points = mocked_service.static_scan(single, 10, 'alpha', [0.5, 1.5])
        assert [p.coupling_value for p in points] == [0.5, 1.5]
        assert points[0].ratio == pytest.approx(1.1)
        assert points[0].is_winning
        assert not points[1].is_winning
        items = mock_worker.map.call_args[0][1]
        assert [item[0].alpha for item in items] == [0.5, 1.5]

    def test_failed_point_is_fatal(self, mocked_service, mock_worker, single):
        mock_worker.map.return_value = [(0.88, 6.0, None), (math.nan, math.nan, 'no arrival detected')]
        with pytest.raises(NoArrivalDetected, match='alpha=1.5'):
            mocked_service.static_scan(single, 10, 'alpha', [0.5, 1.5])

    def test_empty_range(self, mocked_service, single):
        with pytest.raises(ChainValidationError, match='empty scan range'):
            mocked_service.static_scan(single, 10, 'beta', [])

    def test_non_positive_values(self, mocked_service, single):
        with pytest.raises(ChainValidationError):
            mocked_service.static_scan(single, 10, 'beta', [0.0, 0.5])

    def test_real_scan_classifies_couplings(self, parrondo_service, single):
        points = parrondo_service.static_scan(single, 10, 'alpha', [0.5, 0.73, 1.0, 1.5])
        ratios = {p.coupling_value: p.ratio for p in points}
        assert ratios[1.0] == pytest.approx(1.0)
        assert ratios[0.73] > 1.0
        assert ratios[0.5] < 1.0
        assert ratios[1.5] < 1.0


class TestSweep:

    @pytest.fixture
    def grid(self):
        return SweepGrid(1.0, 1.02, 0.01, 0.4, 0.5, 0.1)

    def test_best_point_and_tie_break(self, mocked_service, mock_worker, grid, single, losing_pair_protocol):
        mock_worker.map.return_value = [
            (0.5, 1.0, None), (0.9, 1.0, None),
            (0.9, 1.0, None), (0.9, 1.0, None),
            (0.1, 1.0, None), (math.nan, math.nan, 'no arrival'),
        ]
        result = mocked_service.sweep(losing_pair_protocol, grid, single)
        assert (result.best_omega, result.best_eta, result.best_f_p) == (1.0, 0.5, 0.9)
        assert len(result.records) == 6
        assert [(r.omega, r.eta) for r in result.failures] == [(1.02, 0.5)]

    def test_template_drive_is_replaced(self, mocked_service, mock_worker, grid, single, losing_pair_protocol):
        mock_worker.map.return_value = [(0.5, 1.0, None)] * 6
        mocked_service.sweep(losing_pair_protocol, grid, single)
        items = mock_worker.map.call_args[0][1]
        assert [(item[0].omega, item[0].eta) for item in items] == grid.points()
        assert all(item[0].spec1 == losing_pair_protocol.spec1 for item in items)

    def test_all_points_failed(self, mocked_service, mock_worker, grid, single, losing_pair_protocol):
        mock_worker.map.return_value = [(math.nan, math.nan, 'no arrival')] * 6
        with pytest.raises(SweepFailedError):
            mocked_service.sweep(losing_pair_protocol, grid, single)

    def test_single_point_matches_driven_peak(self, parrondo_service, single, losing_pair_protocol):
        grid = SweepGrid(1.42, 1.42, 0.01, 0.5, 0.5, 0.01)
        result = parrondo_service.sweep(losing_pair_protocol, grid, single)
        assert result.best_f_p == parrondo_service.driven_peak(losing_pair_protocol, single).f_star


class TestOrderDependence:

    def test_equal_couplings_sweep_once(self, mocked_service, mock_worker):
        mock_worker.map.side_effect = lambda func, items: [(0.7, 5.0, None) for _ in items]
        grid = SweepGrid(1.0, 1.0, 0.01, 0.5, 0.5, 0.01)
        first, second = mocked_service.order_dependence(0.79, 0.79, 10, grid)
        assert first is second
        assert mock_worker.map.call_count == 1

    def test_reversed_order_is_swept(self, mocked_service, mock_worker):
        mock_worker.map.side_effect = lambda func, items: [(0.7, 5.0, None) for _ in items]
        grid = SweepGrid(1.0, 1.0, 0.01, 0.5, 0.5, 0.01)
        mocked_service.order_dependence(0.57, 1.18, 10, grid)
        assert mock_worker.map.call_count == 2
        forward = mock_worker.map.call_args_list[0][0][1][0][0]
        reverse = mock_worker.map.call_args_list[1][0][1][0][0]
        assert (forward.spec1.beta, forward.spec2.beta) == (0.57, 1.18)
        assert (reverse.spec1.beta, reverse.spec2.beta) == (1.18, 0.57)


class TestFrequencyScan:

    def test_both_orders(self, mocked_service, mock_worker, single):
        mock_worker.map.side_effect = lambda func, items: [(item[0].spec1.alpha / 2, 5.0, None) for item in items]
        forward, reverse = mocked_service.frequency_scan(
            ChainSpec(10, alpha=0.5), ChainSpec(10, alpha=1.5), 0.5, [1.0, 1.5], single)
        assert [p.omega for p in forward] == [1.0, 1.5]
        assert [p.f_peak for p in forward] == [0.25, 0.25]
        assert [p.f_peak for p in reverse] == [0.75, 0.75]

    def test_empty_scan(self, mocked_service, single):
        with pytest.raises(ChainValidationError):
            mocked_service.frequency_scan(ChainSpec(10), ChainSpec(10), 0.5, [], single)


class TestReproduceTable:

    def test_unknown_table(self, parrondo_service):
        with pytest.raises(ValueError, match='unknown table'):
            parrondo_service.reproduce_table(7)

    def test_unknown_search_mode(self, parrondo_service):
        with pytest.raises(ValueError):
            parrondo_service.reproduce_table(1, search='everywhere')

    def test_inputs_come_from_the_repository(self, mocked_service, mocker):
        mocker.patch.object(mocked_service.repository, 'get_table', return_value={
            'scenario': 'single', 'coupling': 'alpha', 'fixed': {'beta': 1.0}, 'grid': 'single_qubit',
            'columns': ['n', 'f_0', 'alpha_1', 'f_h1', 'alpha_2', 'f_h2', 'omega', 'eta', 'f_p'],
            'rows': [{'n': 10, 'f_0': 0.804, 'alpha_1': 0.51, 'f_h1': 0.798, 'alpha_2': 1.01,
                      'f_h2': 0.793, 'omega': 1.14, 'eta': 0.42, 'f_p': 0.989}],
        })
        sweep = mocker.patch.object(mocked_service, 'sweep', return_value=mocker.Mock(
            best_omega=1.14, best_eta=0.42, best_f_p=0.95))
        mocker.patch.object(mocked_service, 'static_peak', return_value=mocker.Mock(f_star=0.79))
        mocker.patch.object(mocked_service, 'driven_peak', return_value=mocker.Mock(f_star=0.95))

        rows = mocked_service.reproduce_table(1, search='quoted')
        assert list(rows[0]) == ['n', 'f_0', 'alpha_1', 'f_h1', 'alpha_2', 'f_h2', 'omega', 'eta',
                                 'f_p', 'f_p_quoted', 'is_parrondo', 'published_f_p', 'f_p_diff']
        assert rows[0]['is_parrondo'] is True
        assert rows[0]['f_p_diff'] == pytest.approx(0.95 - 0.989)
        protocol, grid = sweep.call_args[0][:2]
        assert isinstance(protocol, DriveProtocol)
        assert (protocol.spec1.alpha, protocol.spec2.alpha) == (0.51, 1.01)
        assert len(grid) == 1
