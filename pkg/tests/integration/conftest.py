import json

import pytest

from parrondo_chain.cli import main


@pytest.fixture
def run_cli(tmp_path):
    """Run the CLI with its output directory under tmp_path; returns (exit code, output dir)."""
    def _run(*args, output='out'):
        output_dir = tmp_path / output
        code = main([*args, '--output-dir', str(output_dir)])
        return code, output_dir
    return _run


@pytest.fixture
def read_json():
    def _read(path):
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    return _read
