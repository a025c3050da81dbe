"""CSV and JSON output files.

Floats are written with six significant digits and rows in a fixed order,
so identical runs produce byte-identical files.
"""
import csv
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np

from ..exceptions import ChainValidationError, ConfigError
from ..models import (
    AmplitudeState,
    DisorderScan,
    FidelitySeries,
    FrequencyScanPoint,
    StaticScanPoint,
    SweepResult,
)

logger = logging.getLogger(__name__)

CSV = 'csv'
JSON = 'json'
FORMATS = (CSV, JSON)


def format_value(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f'{float(value):.6g}'
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        # JSON has no NaN; failed points serialize as null
        return None if math.isnan(value) else value
    if isinstance(value, dict):
        return {str(k): _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return value


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    logger.info(f"Wrote {path}")
    return path


def write_json(path: Path, data: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(_json_value(data), f, indent=2, sort_keys=True)
        f.write('\n')
    logger.info(f"Wrote {path}")
    return path


def read_series(path: Path) -> FidelitySeries:
    """Load a (tau, fidelity) CSV written by write_series or by hand."""
    path = Path(path)
    with open(path, 'r', encoding='utf-8', newline='') as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ['tau', 'fidelity']:
            raise ChainValidationError(f"{path} must start with a 'tau,fidelity' header")
        taus, values = [], []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                taus.append(float(row[0]))
                values.append(float(row[1]))
            except (IndexError, ValueError):
                raise ChainValidationError(f"{path}:{line_no}: expected two numbers, got {row!r}")
    return FidelitySeries(np.array(taus), np.array(values))


class ExportService:
    """Writes run results under one output directory in the chosen tabular format."""

    def __init__(self, output_dir: Path, fmt: str = CSV):
        if fmt not in FORMATS:
            raise ConfigError(f"Invalid output format: {fmt!r}")
        self.output_dir = Path(output_dir)
        self.fmt = fmt

    def path_for(self, stem: str, fmt: str = None) -> Path:
        return self.output_dir / f"{stem}.{fmt or self.fmt}"

    def write_rows(self, stem: str, columns: Sequence[str], rows: List[Sequence[Any]]) -> Path:
        if self.fmt == JSON:
            records = [dict(zip(columns, row)) for row in rows]
            return write_json(self.path_for(stem), {'columns': list(columns), 'rows': records})
        return write_csv(self.path_for(stem), columns, rows)

    def write_summary(self, stem: str, summary: Dict[str, Any]) -> Path:
        return write_json(self.path_for(stem, JSON), summary)

    def write_series(self, stem: str, series: FidelitySeries) -> Path:
        return self.write_rows(stem, ('tau', 'fidelity'), list(zip(series.taus, series.values)))

    def write_static_scan(self, stem: str, coupling: str, points: List[StaticScanPoint]) -> Path:
        rows = [(p.coupling_value, p.f_peak, p.ratio, p.tau_star) for p in points]
        return self.write_rows(stem, (coupling, 'f_peak', 'ratio', 'tau_star'), rows)

    def write_sweep(self, stem: str, result: SweepResult) -> Path:
        rows = [(r.omega, r.eta, r.f_p) for r in result.records]
        return self.write_rows(stem, ('omega', 'eta', 'f_p'), rows)

    def write_frequency_scan(self, stem: str, forward: List[FrequencyScanPoint],
                             reverse: List[FrequencyScanPoint]) -> Path:
        rows = [(a.omega, a.f_peak, b.f_peak) for a, b in zip(forward, reverse)]
        return self.write_rows(stem, ('omega', 'f_peak_first', 'f_peak_second'), rows)

    def write_disorder_scan(self, stem: str, scan: DisorderScan) -> Path:
        rows = list(zip(scan.delta_values, scan.f_peak_values))
        return self.write_rows(stem, ('delta', 'f_peak'), rows)

    def write_amplitudes(self, stem: str, state: AmplitudeState) -> Path:
        rows = [(site, amplitude.real, amplitude.imag) for site, amplitude in enumerate(state.a, start=1)]
        return self.write_rows(stem, ('site', 're', 'im'), rows)

    def write_table(self, stem: str, rows: List[Dict[str, Any]]) -> Path:
        if not rows:
            raise ValueError("Table has no rows")
        columns = list(rows[0])
        return self.write_rows(stem, columns, [[row[c] for c in columns] for row in rows])
