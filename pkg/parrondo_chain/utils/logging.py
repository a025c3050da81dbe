import logging
import os
import sys
from typing import Optional

from .path import log_dir

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DEBUG_ENV = 'PARRONDO_CHAIN_DEBUG'


def setup_logging(level=logging.INFO, log_file: Optional[str] = None, output_base=None):
    """Configure logging for a CLI run.

    Diagnostics go to stderr; stdout and output files carry data only.
    log_file is a file name placed under <output>/logs/.
    """
    root_logger = logging.getLogger()
    # a second call within one process (tests, repeated main()) must not stack handlers
    for handler in list(root_logger.handlers):
        if getattr(handler, '_parrondo_chain', False):
            root_logger.removeHandler(handler)
            handler.close()

    if os.environ.get(DEBUG_ENV) == '1':
        level = logging.DEBUG
    root_logger.setLevel(level)

    # Console handler
    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(logging.Formatter(LOG_FORMAT))
    console.setLevel(level)
    console._parrondo_chain = True
    root_logger.addHandler(console)

    # File handler when requested
    if log_file:
        log_path = log_dir(output_base) / log_file
        file_handler = logging.FileHandler(log_path, encoding='utf-8')
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        file_handler.setLevel(level)
        file_handler._parrondo_chain = True
        root_logger.addHandler(file_handler)

    # Set third-party loggers to WARNING to reduce noise
    for name in ('numpy', 'scipy', 'matplotlib'):
        logging.getLogger(name).setLevel(logging.WARNING)

    return root_logger
