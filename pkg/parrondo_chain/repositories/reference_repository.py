import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..exceptions import ConfigError
from ..utils.path import reference_tables_path

logger = logging.getLogger(__name__)


class ReferenceRepository:
    """Read-only access to the published table values bundled with the package.

    The values are comparison data. Reproduction code takes its inputs (chain
    lengths, coupling pairs, quoted drive points) from here, never its results.
    """

    TABLE_IDS = (1, 2, 3)

    def __init__(self, path: Optional[Path] = None):
        self.path = Path(path) if path is not None else reference_tables_path()
        self._cache: Optional[Dict[str, Any]] = None

    def _load(self) -> Dict[str, Any]:
        if self._cache is None:
            with open(self.path, 'r', encoding='utf-8') as f:
                self._cache = json.load(f)
            logger.debug(f"Reference tables loaded from {self.path}")
        return self._cache

    def table_ids(self) -> List[int]:
        return sorted(int(key) for key in self._load()['tables'])

    def get_table(self, table_id: int) -> Dict[str, Any]:
        """Table metadata and rows; unknown ids raise ConfigError."""
        tables = self._load()['tables']
        key = str(table_id)
        if key not in tables:
            raise ConfigError(f"unknown table: {table_id} (available: {', '.join(sorted(tables))})")
        return tables[key]

    def get_rows(self, table_id: int) -> List[Dict[str, Any]]:
        return list(self.get_table(table_id)['rows'])

    def find_row(self, table_id: int, **match) -> Optional[Dict[str, Any]]:
        """First row whose fields equal every keyword given, or None."""
        for row in self.get_table(table_id)['rows']:
            if all(row.get(key) == value for key, value in match.items()):
                return row
        return None
