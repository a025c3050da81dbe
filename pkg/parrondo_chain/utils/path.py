import os
from pathlib import Path
import logging

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = 'PARRONDO_CHAIN_OUTPUT_DIR'


def package_root() -> Path:
    """Return the installed package directory."""
    return Path(os.path.dirname(os.path.dirname(__file__)))


def data_dir() -> Path:
    """Directory of bundled data files shipped with the package."""
    return package_root() / 'data'


def reference_tables_path() -> Path:
    return data_dir() / 'reference_tables.json'


def output_dir(base=None) -> Path:
    """Return the output directory, creating it if needed.

    An explicit base wins, then PARRONDO_CHAIN_OUTPUT_DIR, then ./output.
    """
    if base is not None:
        path = Path(base)
    elif os.environ.get(OUTPUT_DIR_ENV):
        path = Path(os.environ[OUTPUT_DIR_ENV])
    else:
        path = Path.cwd() / 'output'

    path.mkdir(parents=True, exist_ok=True)
    logger.debug(f"Using output directory: {path}")
    return path


def log_dir(base=None) -> Path:
    """Return the log directory under the output directory."""
    path = output_dir(base) / 'logs'
    path.mkdir(parents=True, exist_ok=True)
    return path
