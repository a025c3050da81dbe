import logging

import numpy as np
import pytest
from unittest.mock import MagicMock

from parrondo_chain.models import ChainSpec, DriveProtocol, PeakConfig, Scenario
from parrondo_chain.repositories import ReferenceRepository
from parrondo_chain.services import ParrondoService, decomposition_for
from parrondo_chain.tasks import SweepWorker
from parrondo_chain.utils.config import JOBS_ENV
from parrondo_chain.utils.path import OUTPUT_DIR_ENV


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Keep the caller's environment from leaking into configs."""
    for name in (OUTPUT_DIR_ENV, JOBS_ENV, 'PARRONDO_CHAIN_DEBUG'):
        monkeypatch.delenv(name, raising=False)
    yield


@pytest.fixture(autouse=True)
def reset_root_logger():
    """CLI runs attach handlers to the root logger; drop them after each test."""
    root = logging.getLogger()
    before = list(root.handlers)
    level = root.level
    yield
    for handler in list(root.handlers):
        if handler not in before:
            root.removeHandler(handler)
            handler.close()
    root.setLevel(level)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def peak_config():
    return PeakConfig()


@pytest.fixture
def single():
    return Scenario.single()


@pytest.fixture
def bell():
    return Scenario.bell()


@pytest.fixture
def uniform10():
    return ChainSpec.uniform(10)


@pytest.fixture
def uniform10_decomposition(uniform10):
    return decomposition_for(uniform10)


@pytest.fixture
def losing_pair_protocol():
    """N=10 alpha-pair (0.5, 1.5) with equal sub-periods."""
    return DriveProtocol(ChainSpec(10, alpha=0.5), ChainSpec(10, alpha=1.5), omega=1.42, eta=0.5)


@pytest.fixture
def serial_worker():
    return SweepWorker(1)


@pytest.fixture
def mock_worker():
    """Worker whose map results are set per test."""
    worker = MagicMock(spec=SweepWorker)
    worker.max_concurrent = 1
    return worker


@pytest.fixture
def reference_repository():
    return ReferenceRepository()


@pytest.fixture
def parrondo_service(peak_config, serial_worker, reference_repository):
    return ParrondoService(peak_config, serial_worker, reference_repository)
