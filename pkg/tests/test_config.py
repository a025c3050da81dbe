import json
import math

import pytest

from parrondo_chain.exceptions import ConfigError
from parrondo_chain.models import ChainSpec, Scenario, SweepGrid
from parrondo_chain.utils.config import JOBS_ENV, RunConfig
from parrondo_chain.utils.path import OUTPUT_DIR_ENV


class TestRunConfig:

    @pytest.fixture
    def config_file(self, tmp_path):
        path = tmp_path / 'run.json'
        path.write_text(json.dumps({'n': 12, 'alpha': 0.5, 'scenario': 'bell', 'sign': '-'}), encoding='utf-8')
        return path

    def test_defaults(self):
        config = RunConfig(environ={})
        assert config.get('n') == 10
        assert config.get('scenario') == Scenario.SINGLE
        assert config.get('theta') == pytest.approx(math.pi)
        assert config.get('tau_max') is None
        assert config.output_format == 'csv'
        assert config.jobs == 1

    def test_unknown_get_falls_back_to_default_argument(self):
        assert RunConfig(environ={}).get('nonexistent', 'fallback') == 'fallback'

    def test_init_with_config_file(self, config_file):
        config = RunConfig(config_path=config_file, environ={})
        assert config.get('n') == 12
        assert config.get('alpha') == 0.5
        assert config.get('sign') == -1
        # untouched keys keep their defaults
        assert config.get('beta') == 1.0

    def test_missing_config_file(self, tmp_path):
        with pytest.raises(ConfigError, match='not found'):
            RunConfig(config_path=tmp_path / 'missing.json', environ={})

    def test_invalid_json(self, tmp_path):
        path = tmp_path / 'broken.json'
        path.write_text('{"n": ', encoding='utf-8')
        with pytest.raises(ConfigError, match='Invalid JSON'):
            RunConfig(config_path=path, environ={})

    def test_non_object_json(self, tmp_path):
        path = tmp_path / 'list.json'
        path.write_text('[1, 2]', encoding='utf-8')
        with pytest.raises(ConfigError):
            RunConfig(config_path=path, environ={})

    def test_unknown_key_in_file(self, tmp_path):
        path = tmp_path / 'extra.json'
        path.write_text('{"gamma": 2}', encoding='utf-8')
        with pytest.raises(ConfigError, match='Unknown config key'):
            RunConfig(config_path=path, environ={})

    def test_environment_overrides_file(self, tmp_path):
        path = tmp_path / 'run.json'
        path.write_text(json.dumps({'output_dir': 'from_file', 'jobs': 2}), encoding='utf-8')
        config = RunConfig(config_path=path, environ={OUTPUT_DIR_ENV: 'from_env', JOBS_ENV: '3'})
        assert config.get('output_dir') == 'from_env'
        assert config.jobs == 3

    def test_overrides_win_over_environment(self):
        config = RunConfig(environ={JOBS_ENV: '3'}, overrides={'jobs': 4, 'n': None})
        assert config.jobs == 4
        # None overrides are ignored
        assert config.get('n') == 10

    def test_os_environ_is_read_by_default(self, monkeypatch, tmp_path):
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / 'env_out'))
        assert RunConfig().output_dir == tmp_path / 'env_out'

    @pytest.mark.parametrize('key,value', [
        ('n', 'ten'),
        ('n', 10.5),
        ('n', True),
        ('alpha', 'x'),
        ('scenario', 'triple'),
        ('format', 'xml'),
        ('sign', '0'),
        ('n', None),
    ])
    def test_invalid_values(self, key, value):
        with pytest.raises(ConfigError):
            RunConfig(environ={}).set(key, value)

    def test_numeric_strings_are_coerced(self):
        config = RunConfig(environ={}, overrides={'n': '14', 'omega': '1.5'})
        assert config.get('n') == 14
        assert config.get('omega') == 1.5

    def test_negative_jobs_rejected(self):
        config = RunConfig(environ={}, overrides={'jobs': -1})
        with pytest.raises(ConfigError):
            _ = config.jobs

    def test_save_round_trip(self, tmp_path):
        config = RunConfig(environ={}, overrides={'n': 12, 'scenario': 'bell', 'beta_2': 1.18})
        path = config.save(tmp_path / 'nested' / 'merged.json')
        assert path.read_text(encoding='utf-8').endswith('}\n')
        assert RunConfig(config_path=path, environ={}) == config

    def test_to_dict_lists_every_key(self):
        data = RunConfig(environ={}).to_dict()
        assert set(data) == set(RunConfig.KEYS)


class TestRunConfigBuilders:

    def test_chain_spec(self):
        config = RunConfig(environ={}, overrides={'n': 12, 'alpha': 0.5, 'delta_beta': 0.05})
        assert config.chain_spec() == ChainSpec(12, alpha=0.5, delta_beta=0.05)

    def test_invalid_chain_becomes_config_error(self):
        config = RunConfig(environ={}, overrides={'n': 4})
        with pytest.raises(ConfigError, match='Invalid chain'):
            config.chain_spec()

    def test_second_spec_defaults_to_first(self):
        config = RunConfig(environ={}, overrides={'alpha': 0.5})
        assert config.second_spec() == config.chain_spec()

    def test_second_spec_takes_its_own_couplings(self):
        config = RunConfig(environ={}, overrides={'alpha': 0.5, 'alpha_2': 1.5, 'delta_alpha': 0.01})
        second = config.second_spec()
        assert second.alpha == 1.5
        assert second.delta_alpha == 0.01

    def test_protocol(self):
        config = RunConfig(environ={}, overrides={'alpha': 0.5, 'alpha_2': 1.5, 'omega': 1.42, 'eta': 0.3})
        protocol = config.protocol()
        assert protocol.spec1.alpha == 0.5
        assert protocol.spec2.alpha == 1.5
        assert protocol.omega == 1.42
        assert protocol.eta == 0.3

    def test_protocol_rejects_bad_eta(self):
        config = RunConfig(environ={}, overrides={'eta': 1.5})
        with pytest.raises(ConfigError):
            config.protocol()

    def test_scenario(self):
        assert RunConfig(environ={}).scenario() == Scenario.single()
        bell = RunConfig(environ={}, overrides={'scenario': 'bell', 'sign': '-'}).scenario()
        assert bell.is_bell
        assert int(bell.sign) == -1

    def test_peak_config(self):
        config = RunConfig(environ={}, overrides={'tau_max': 30, 'dtau': 0.02})
        peak = config.peak_config()
        assert peak.tau_max == 30.0
        assert peak.dtau == 0.02

    def test_sweep_grid_defaults_follow_scenario(self):
        assert RunConfig(environ={}).sweep_grid() == SweepGrid.single_qubit_default()
        bell = RunConfig(environ={}, overrides={'scenario': 'bell'})
        assert bell.sweep_grid() == SweepGrid.bell_default()

    def test_sweep_grid_partial_override(self):
        config = RunConfig(environ={}, overrides={'omega_min': 1.0, 'omega_max': 1.2, 'eta_step': 0.1})
        grid = config.sweep_grid()
        assert grid.omega_min == 1.0
        assert grid.omega_max == 1.2
        assert grid.eta_step == 0.1
        assert grid.eta_max == 1.0

    def test_sweep_grid_invalid(self):
        config = RunConfig(environ={}, overrides={'omega_min': 2.0, 'omega_max': 1.0})
        with pytest.raises(ConfigError, match='sweep grid'):
            config.sweep_grid()
