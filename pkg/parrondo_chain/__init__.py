import logging
from dataclasses import dataclass
from typing import Optional

from .repositories import ReferenceRepository
from .services import DisorderService, ExportService, ParrondoService
from .tasks import SweepWorker
from .utils.config import RunConfig
from .utils.path import output_dir

__version__ = '0.1.0'

logger = logging.getLogger(__name__)


@dataclass
class Toolkit:
    config: RunConfig
    worker: SweepWorker
    repository: ReferenceRepository
    parrondo: ParrondoService
    disorder: DisorderService
    export: ExportService


def create_toolkit(config: Optional[RunConfig] = None) -> Toolkit:
    """Wire the services for one run from a RunConfig."""
    config = config or RunConfig()
    peak_config = config.peak_config()
    worker = SweepWorker(config.jobs)
    repository = ReferenceRepository()
    toolkit = Toolkit(
        config=config,
        worker=worker,
        repository=repository,
        parrondo=ParrondoService(peak_config, worker, repository),
        disorder=DisorderService(peak_config, worker),
        export=ExportService(output_dir(config.output_dir), config.output_format),
    )
    logger.debug(f"Toolkit ready: jobs={worker.max_concurrent}, output={toolkit.export.output_dir}")
    return toolkit
