"""
Result tables for the benchmark commands, written as CSV or JSON.
"""
import csv
import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Dict, Iterable, List, Optional

from utils.log_setup import setup_project_logging

logger = setup_project_logging()

class ResultFormatError(Exception):
    """Custom exception for unreadable or incomplete result files"""
    pass

@dataclass(frozen=True)
class ResultRow:
    experiment_id: str
    k_total: int
    p: int
    method: str
    shots: int
    mean: float
    stderr: float
    variance: float
    exact: float
    wall_time: float = 0.0

COLUMNS = [f.name for f in fields(ResultRow)]
_TYPES = {f.name: f.type for f in fields(ResultRow)}

def _parse(name: str, value: str):
    kind = _TYPES[name]
    if kind is int or kind == 'int':
        return int(value)
    if kind is float or kind == 'float':
        return float(value)
    return value

class ResultTable:
    """Rows in insertion order plus a free-form metadata record"""

    def __init__(self, rows: Optional[Iterable[ResultRow]] = None, metadata: Optional[Dict] = None):
        self.rows: List[ResultRow] = list(rows or [])
        self.metadata: Dict = dict(metadata or {})

    def add(self, row: ResultRow) -> None:
        self.rows.append(row)

    def __len__(self) -> int:
        return len(self.rows)

    def for_method(self, method: str) -> List[ResultRow]:
        return [r for r in self.rows if r.method == method]

    def without_timing(self) -> 'ResultTable':
        """Copy with every wall_time set to 0, for byte-stable files"""
        rows = [ResultRow(**{**asdict(r), 'wall_time': 0.0}) for r in self.rows]
        return ResultTable(rows, self.metadata)

    def write_csv(self, path: Path) -> None:
        with open(path, 'w', encoding='utf-8', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(COLUMNS)
            for row in self.rows:
                writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in (getattr(row, c) for c in COLUMNS)])

    @classmethod
    def read_csv(cls, path: Path) -> 'ResultTable':
        try:
            with open(path, 'r', encoding='utf-8', newline='') as f:
                reader = csv.reader(f)
                header = next(reader)
                if header != COLUMNS:
                    raise ResultFormatError(f"Unexpected CSV header in {path}: {header}")
                rows = []
                for line_no, values in enumerate(reader, start=2):
                    if len(values) != len(COLUMNS):
                        raise ResultFormatError(f"{path}:{line_no} has {len(values)} columns, expected {len(COLUMNS)}")
                    rows.append(ResultRow(**{c: _parse(c, v) for c, v in zip(COLUMNS, values)}))
        except (OSError, StopIteration, ValueError) as e:
            raise ResultFormatError(f"Could not read results {path}: {e}")
        return cls(rows)

    def to_dict(self) -> Dict:
        return {'columns': COLUMNS, 'rows': [asdict(r) for r in self.rows], 'metadata': self.metadata}

    def write_json(self, path: Path) -> None:
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)

    @classmethod
    def read_json(cls, path: Path) -> 'ResultTable':
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
            rows = [ResultRow(**{c: row[c] for c in COLUMNS}) for row in data['rows']]
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as e:
            raise ResultFormatError(f"Could not read results {path}: {e}")
        return cls(rows, data.get('metadata'))

    def write(self, path: Path, fmt: str = 'csv') -> Path:
        """Write rows in the given format; CSV output gets a .meta.json sidecar for the metadata"""
        path = Path(path)
        if fmt == 'json':
            self.write_json(path)
        elif fmt == 'csv':
            self.write_csv(path)
            with open(path.with_suffix('.meta.json'), 'w', encoding='utf-8') as f:
                json.dump(self.metadata, f, indent=2, sort_keys=True)
        else:
            raise ResultFormatError(f"Unknown output format: {fmt}")
        logger.info(f"Wrote {len(self.rows)} rows to {path}")
        return path

def write_trace(trace: List[float], path: Path) -> None:
    """Optimiser cost trace, one row per step including the starting point"""
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(['step', 'cost'])
        for step, cost in enumerate(trace):
            writer.writerow([step, repr(float(cost))])
