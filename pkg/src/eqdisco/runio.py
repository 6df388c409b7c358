"""Run artifacts: iteration log records, manifests, and checkpoints.

Logs are append-only JSONL, one record per iteration, so a partial run is
still analyzable. Checkpoints embed a sha256 of their canonical payload;
floats travel through JSON via repr and round-trip bit-exactly. Timestamps
live only in the manifest, never in log records or checkpoints.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .errors import CorruptCheckpoint, IoError, MissingLog, VersionMismatch

CHECKPOINT_VERSION = 1


@dataclass
class IterationRecord:
    """Snapshot of one iteration: all agents, the generation best, the incumbent."""

    iteration: int
    agents: list[tuple[int, str, float]]  # (agent_id, expr_text, score)
    generation_best: tuple[int, float]    # (agent_id, score)
    archive_best_expr: str
    archive_best_score: float
    archive_best_params: list[float]
    ck_analysis_digest: str
    wall_ms: float = 0.0

    def to_json(self) -> str:
        d = asdict(self)
        d["agents"] = [list(t) for t in self.agents]
        d["generation_best"] = list(self.generation_best)
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "IterationRecord":
        d = json.loads(line)
        return cls(
            iteration=d["iteration"],
            agents=[(a[0], a[1], a[2]) for a in d["agents"]],
            generation_best=(d["generation_best"][0], d["generation_best"][1]),
            archive_best_expr=d["archive_best_expr"],
            archive_best_score=d["archive_best_score"],
            archive_best_params=[float(p) for p in d["archive_best_params"]],
            ck_analysis_digest=d["ck_analysis_digest"],
            wall_ms=d.get("wall_ms", 0.0),
        )


class RunLog:
    """Append-only JSONL iteration log."""

    def __init__(self, path: str | Path):
        self.path = Path(path)

    def append(self, record: IterationRecord) -> None:
        try:
            with open(self.path, "a") as fh:
                fh.write(record.to_json() + "\n")
        except OSError as exc:
            raise IoError(f"cannot append to run log {self.path}: {exc}") from exc

    def read_all(self) -> list[IterationRecord]:
        if not self.path.exists():
            raise MissingLog(f"no iteration log at {self.path}")
        records = []
        for line in self.path.read_text().splitlines():
            if line.strip():
                records.append(IterationRecord.from_json(line))
        return records


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_text(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def write_manifest(path: str | Path, manifest: dict) -> None:
    _atomic_write(Path(path), json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def read_manifest(path: str | Path) -> dict:
    path = Path(path)
    try:
        return json.loads(path.read_text())
    except OSError as exc:
        raise IoError(f"cannot read manifest {path}: {exc}") from exc


def _payload_digest(payload: dict) -> str:
    import hashlib

    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def write_checkpoint(path: str | Path, payload: dict) -> None:
    """Atomically persist a checkpoint with an integrity checksum."""
    doc = {
        "version": CHECKPOINT_VERSION,
        "payload": payload,
        "sha256": _payload_digest(payload),
    }
    _atomic_write(Path(path), json.dumps(doc, sort_keys=True) + "\n")


def read_checkpoint(path: str | Path) -> dict:
    """Load and verify a checkpoint; returns the payload."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise IoError(f"cannot read checkpoint {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CorruptCheckpoint(f"{path}: not valid JSON ({exc})") from exc
    if doc.get("version") != CHECKPOINT_VERSION:
        raise VersionMismatch(
            f"checkpoint version {doc.get('version')!r}, expected {CHECKPOINT_VERSION}"
        )
    payload = doc.get("payload")
    if payload is None or _payload_digest(payload) != doc.get("sha256"):
        raise CorruptCheckpoint(f"{path}: payload does not match its checksum")
    return payload
