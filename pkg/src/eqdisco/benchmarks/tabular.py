"""Ingestion of the empirical benchmark datasets from CSV files."""

from __future__ import annotations

import hashlib
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..data import Dataset, Provenance
from ..errors import IoError, NonNumericCell, RowCountMismatch, SchemaError


@dataclass(frozen=True)
class TabularSchema:
    """Expected header layout and (when cataloged) expected row counts."""

    var_names: tuple[str, ...]
    output_name: str
    expected_rows: dict[str, int] | None = None  # split -> count


def load_tabular(path: str | Path, schema: TabularSchema, split: str = "train") -> Dataset:
    """Load a comma-separated file, validating the header against the schema.

    A cataloged row-count mismatch is a warning, not an error; provenance
    records the file checksum.
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    checksum = hashlib.sha256(raw).hexdigest()
    lines = raw.decode().splitlines()
    if not lines:
        raise SchemaError(f"{path}: empty file")
    header = [h.strip() for h in lines[0].split(",")]
    expected = list(schema.var_names) + [schema.output_name]
    if header != expected:
        raise SchemaError(f"{path}: header {header} does not match schema {expected}")
    X, y = [], []
    for r, line in enumerate(lines[1:], start=1):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != len(expected):
            raise SchemaError(f"{path}: row {r} has {len(cells)} cells, expected {len(expected)}")
        vals = []
        for col, cell in zip(expected, cells):
            try:
                vals.append(float(cell))
            except ValueError:
                raise NonNumericCell(r, col, cell.strip()) from None
        X.append(vals[:-1])
        y.append(vals[-1])
    if schema.expected_rows and split in schema.expected_rows:
        want = schema.expected_rows[split]
        if len(y) != want:
            warnings.warn(
                f"{path}: split {split!r} has {len(y)} rows, catalog expects {want}",
                RowCountMismatch,
            )
    prov = Provenance(kind="file", path=str(path), checksum=checksum)
    return Dataset(schema.var_names, np.array(X, dtype=np.float64), np.array(y),
                   output_name=schema.output_name, split=split, provenance=prov)
