"""Durable storage: append-only command logs, snapshots, and a blob store.

Each group persists as an append-only JSONL command log plus periodic
state snapshots.  The log is the source of truth; snapshots only shortcut
replay.  Recovery semantics:

* a torn final line (crash mid-append) is dropped with a warning and the
  state recovers to the last complete command;
* damage anywhere before the final line refuses to load
  (:class:`~delphinet.errors.CorruptLogError`) rather than replaying a
  partial history;
* an unreadable snapshot falls back to full replay with a warning.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .. import workflow as wf
from ..errors import CorruptLogError, UnknownEntityError

_GENESIS = "genesis"
_COMMAND = "command"


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write via a temp file + rename so readers never see a partial file."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8") as handle:
        handle.write(text)
        handle.flush()
        os.fsync(handle.fileno())
    os.replace(tmp, path)


def atomic_write_json(path: str | Path, doc: Any) -> None:
    atomic_write_text(path, canonical_json(doc))


class BlobStore:
    """Content-addressed file storage (attachments, exports)."""

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, blob_id: str) -> Path:
        return self.root / blob_id[:2] / blob_id

    def put(self, data: bytes) -> str:
        blob_id = hashlib.sha256(data).hexdigest()
        path = self._path(blob_id)
        if not path.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_name(path.name + ".tmp")
            tmp.write_bytes(data)
            os.replace(tmp, path)
        return blob_id

    def exists(self, blob_id: str) -> bool:
        return self._path(blob_id).is_file()

    def get(self, blob_id: str) -> bytes:
        path = self._path(blob_id)
        if not path.is_file():
            raise UnknownEntityError(f"no blob {blob_id!r}")
        return path.read_bytes()


class EventLog:
    """Append-only JSONL file of sequenced records."""

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)

    def append(self, record: Mapping[str, Any]) -> None:
        line = canonical_json(record) + "\n"
        with open(self.path, "a", encoding="utf-8") as handle:
            handle.write(line)
            handle.flush()
            os.fsync(handle.fileno())

    def read(self) -> tuple[list[dict], list[str]]:
        """Return ``(records, warnings)``; see the module docstring for the
        recovery rules."""
        if not self.path.exists():
            return [], []
        raw = self.path.read_text(encoding="utf-8")
        lines = raw.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        records: list[dict] = []
        warnings: list[str] = []
        for index, line in enumerate(lines):
            last = index == len(lines) - 1
            try:
                record = json.loads(line)
                if not isinstance(record, dict):
                    raise ValueError("record is not an object")
            except ValueError as exc:
                if last:
                    warnings.append(
                        f"dropped torn final record at line {index + 1} of "
                        f"{self.path.name}: {exc}"
                    )
                    break
                raise CorruptLogError(
                    f"unreadable record at line {index + 1} of {self.path}: {exc}"
                ) from exc
            if record.get("seq") != index:
                raise CorruptLogError(
                    f"sequence gap at line {index + 1} of {self.path}: "
                    f"expected seq {index}, found {record.get('seq')!r}"
                )
            records.append(record)
        return records, warnings


@dataclass
class LoadedGroup:
    state: wf.GroupState
    applied: int
    warnings: list[str] = field(default_factory=list)


class GroupStore:
    """One group's durable history: genesis record + command records."""

    def __init__(self, directory: str | Path, snapshot_interval: int = 50) -> None:
        self.directory = Path(directory)
        self.snapshot_interval = max(1, snapshot_interval)
        self.log = EventLog(self.directory / "log.jsonl")
        self.snapshot_path = self.directory / "snapshot.json"

    @property
    def exists(self) -> bool:
        return self.log.path.exists()

    def create(self, state: wf.GroupState) -> None:
        if self.exists:
            raise CorruptLogError(f"group log already exists at {self.log.path}")
        self.directory.mkdir(parents=True, exist_ok=True)
        self.log.append({"seq": 0, "kind": _GENESIS, "state": wf.state_to_json(state)})

    def append_command(self, command: wf.Command, state_after: wf.GroupState, applied: int) -> int:
        """Record one applied command; ``applied`` counts log records so far
        (including genesis).  Returns the new record count."""
        self.log.append(
            {"seq": applied, "kind": _COMMAND, "command": wf.command_to_json(command)}
        )
        applied += 1
        if applied % self.snapshot_interval == 0:
            self.write_snapshot(state_after, applied)
        return applied

    def write_snapshot(self, state: wf.GroupState, applied: int) -> None:
        atomic_write_json(
            self.snapshot_path, {"applied": applied, "state": wf.state_to_json(state)}
        )

    def _read_snapshot(self, warnings: list[str]) -> tuple[wf.GroupState, int] | None:
        if not self.snapshot_path.exists():
            return None
        try:
            doc = json.loads(self.snapshot_path.read_text(encoding="utf-8"))
            state = wf.state_from_json(doc["state"])
            applied = int(doc["applied"])
        except Exception as exc:  # snapshot is an optimization, never trusted
            warnings.append(f"ignoring unreadable snapshot {self.snapshot_path.name}: {exc}")
            return None
        if applied < 1:
            warnings.append(f"ignoring snapshot with applied={applied}")
            return None
        return state, applied

    def load(self) -> LoadedGroup:
        records, warnings = self.log.read()
        if not records:
            raise CorruptLogError(f"group log at {self.log.path} has no complete records")
        if records[0].get("kind") != _GENESIS:
            raise CorruptLogError(f"group log at {self.log.path} does not start with genesis")

        state: wf.GroupState | None = None
        start = 1
        snapshot = self._read_snapshot(warnings)
        if snapshot is not None:
            snap_state, applied = snapshot
            if applied <= len(records):
                state, start = snap_state, applied
            else:
                warnings.append(
                    "snapshot is ahead of the recovered log; replaying from genesis"
                )
        if state is None:
            try:
                state = wf.state_from_json(records[0]["state"])
            except Exception as exc:
                raise CorruptLogError(f"corrupt genesis record: {exc}") from exc

        for record in records[start:]:
            if record.get("kind") != _COMMAND:
                raise CorruptLogError(f"unexpected record kind {record.get('kind')!r}")
            try:
                command = wf.command_from_json(record["command"])
                state, _ = wf.apply(state, command)
            except Exception as exc:
                raise CorruptLogError(
                    f"record seq {record.get('seq')} does not replay: {exc}"
                ) from exc
        return LoadedGroup(state=state, applied=len(records), warnings=warnings)


class DocumentStore:
    """A small named-document table stored as one atomic JSON file."""

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)

    def load(self) -> dict[str, dict]:
        if not self.path.exists():
            return {}
        doc = json.loads(self.path.read_text(encoding="utf-8"))
        if not isinstance(doc, dict):
            raise CorruptLogError(f"{self.path} does not contain an object")
        return doc

    def save(self, docs: Mapping[str, dict]) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        atomic_write_json(self.path, dict(docs))
