"""Observation datasets: named input columns plus one target column.

CSV on-disk format: header row is the input variable names followed by the
target name; a sidecar ``<stem>.meta.json`` carries provenance (seed, ranges,
checksum, ground-truth text where known).
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .errors import IoError, NonNumericCell, SchemaError

SPLITS = ("train", "test_id", "test_ood")


@dataclass(frozen=True)
class Provenance:
    """Where a dataset came from: a seeded generator or a file on disk."""

    kind: str  # "synthetic" | "file"
    seed: int | None = None
    ranges: dict[str, Any] | None = None
    path: str | None = None
    checksum: str | None = None
    extra: dict[str, Any] | None = None

    def to_dict(self) -> dict[str, Any]:
        return {k: v for k, v in self.__dict__.items() if v is not None}


class Dataset:
    """Immutable table of real-valued observations for one split."""

    def __init__(
        self,
        var_names,
        X,
        y,
        output_name: str = "y",
        split: str = "train",
        provenance: Provenance | None = None,
    ):
        self.var_names = tuple(var_names)
        self.X = np.asarray(X, dtype=np.float64).reshape(-1, len(self.var_names))
        self.y = np.asarray(y, dtype=np.float64).reshape(-1)
        if self.X.shape[0] != self.y.shape[0]:
            raise SchemaError(
                f"input rows ({self.X.shape[0]}) and target rows ({self.y.shape[0]}) differ"
            )
        if split not in SPLITS:
            raise SchemaError(f"unknown split tag {split!r}")
        self.output_name = output_name
        self.split = split
        self.provenance = provenance
        self.X.setflags(write=False)
        self.y.setflags(write=False)

    def __len__(self) -> int:
        return self.X.shape[0]

    @property
    def columns(self) -> dict[str, np.ndarray]:
        return {name: self.X[:, i] for i, name in enumerate(self.var_names)}

    def column(self, name: str) -> np.ndarray:
        if name not in self.var_names:
            raise SchemaError(f"no input column named {name!r}")
        return self.X[:, self.var_names.index(name)]

    def to_csv_bytes(self) -> bytes:
        """Deterministic CSV serialization (repr-precision floats)."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(self.var_names) + [self.output_name])
        for i in range(len(self)):
            writer.writerow([repr(float(v)) for v in self.X[i]] + [repr(float(self.y[i]))])
        return buf.getvalue().encode()

    def save(self, path: str | Path) -> str:
        """Write CSV + sidecar metadata; returns the sha256 of the CSV bytes."""
        path = Path(path)
        data = self.to_csv_bytes()
        checksum = hashlib.sha256(data).hexdigest()
        try:
            path.write_bytes(data)
            meta = {
                "var_names": list(self.var_names),
                "output_name": self.output_name,
                "split": self.split,
                "rows": len(self),
                "checksum": checksum,
                "provenance": self.provenance.to_dict() if self.provenance else None,
            }
            sidecar_path(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
        except OSError as exc:
            raise IoError(f"cannot write dataset to {path}: {exc}") from exc
        return checksum


def sidecar_path(csv_path: str | Path) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_suffix(".meta.json")


def file_checksum(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def load_csv(path: str | Path, split: str = "train") -> Dataset:
    """Read a dataset CSV; the last column is the target."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise IoError(f"cannot read dataset {path}: {exc}") from exc
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or len(rows[0]) < 2:
        raise SchemaError(f"{path}: need a header with at least one input and one target column")
    header = rows[0]
    var_names, output_name = header[:-1], header[-1]
    X, y = [], []
    for r, row in enumerate(rows[1:], start=1):
        if not row:
            continue
        if len(row) != len(header):
            raise SchemaError(f"{path}: row {r} has {len(row)} cells, expected {len(header)}")
        vals = []
        for c, cell in zip(header, row):
            try:
                vals.append(float(cell))
            except ValueError:
                raise NonNumericCell(r, c, cell) from None
        X.append(vals[:-1])
        y.append(vals[-1])
    prov = Provenance(kind="file", path=str(path), checksum=hashlib.sha256(text.encode()).hexdigest())
    return Dataset(var_names, np.array(X), np.array(y), output_name=output_name, split=split,
                   provenance=prov)


@dataclass
class DatasetSplits:
    """Bundle of the splits produced by one generator invocation."""

    train: Dataset
    test_id: Dataset | None = None
    test_ood: Dataset | None = None

    def items(self):
        for name in SPLITS:
            ds = getattr(self, name)
            if ds is not None:
                yield name, ds
