"""The live service state: users, sessions, problems, and group handles.

Every group mutation goes through :meth:`ServiceRegistry.execute`, which
serializes commands per group under a lock, appends to the durable log
before acknowledging, and forwards notification events to the configured
notifier.  Group state objects are immutable, so reads never lock.
"""

from __future__ import annotations

import json
import re
import threading
import time
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

from .. import workflow as wf
from ..errors import NameCollisionError, OutOfRangeError, UnknownEntityError
from ..scenarios import EvaluationCache
from .auth import SessionManager, UserStore
from .config import ServiceConfig
from .persistence import BlobStore, DocumentStore, GroupStore, canonical_json

_ID_PATTERN = re.compile(r"^[A-Za-z0-9][A-Za-z0-9_-]{0,63}$")


def require_id(kind: str, value: str) -> str:
    if not _ID_PATTERN.match(value or ""):
        raise OutOfRangeError(
            f"{kind} id must match [A-Za-z0-9][A-Za-z0-9_-]{{0,63}}, got {value!r}"
        )
    return value


class LogNotifier:
    """Notification sink that appends JSONL records (stands in for email)."""

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        self._lock = threading.Lock()

    def send(self, user: str, reason: str, payload: Mapping[str, Any]) -> None:
        record = {"user": user, "reason": reason, **dict(payload)}
        with self._lock, open(self.path, "a", encoding="utf-8") as handle:
            handle.write(canonical_json(record) + "\n")

    def sent(self) -> list[dict]:
        if not self.path.exists():
            return []
        return [
            json.loads(line)
            for line in self.path.read_text(encoding="utf-8").splitlines()
            if line
        ]


class GroupHandle:
    """One group's in-memory head: current state plus its durable store."""

    def __init__(self, group_id: str, store: GroupStore) -> None:
        self.group_id = group_id
        self.store = store
        self.lock = threading.RLock()
        self.cache = EvaluationCache()
        self.state: wf.GroupState | None = None
        self.applied = 0
        self.warnings: list[str] = []


def problem_from_doc(doc: Mapping[str, Any]) -> wf.Problem:
    try:
        mode = wf.DelphiMode(doc.get("delphi_mode", "realtime"))
    except ValueError as exc:
        raise OutOfRangeError(
            f"delphi_mode must be one of realtime/classic/variant, got "
            f"{doc.get('delphi_mode')!r}"
        ) from exc
    return wf.Problem(
        id=doc["id"],
        title=doc.get("title", ""),
        statement=doc.get("statement", ""),
        questions=tuple(doc.get("questions") or ()),
        delphi_mode=mode,
        starts_at=doc.get("starts_at"),
        ends_at=doc.get("ends_at"),
    )


def membership_from_doc(doc: Mapping[str, Any]) -> wf.Membership:
    try:
        role = wf.Role(doc.get("role", ""))
    except ValueError as exc:
        raise OutOfRangeError(
            f"role must be one of analyst/facilitator/observer, got {doc.get('role')!r}"
        ) from exc
    return wf.Membership(
        user=doc.get("user", ""), role=role, pseudonym=doc.get("pseudonym", "")
    )


class ServiceRegistry:
    def __init__(
        self,
        config: ServiceConfig,
        clock: Callable[[], float] = time.time,
        notifier: Any | None = None,
    ) -> None:
        self.config = config
        self.clock = clock
        self.data_dir = config.resolved_data_dir()
        self.data_dir.mkdir(parents=True, exist_ok=True)
        (self.data_dir / "groups").mkdir(exist_ok=True)

        self.users = UserStore(self.data_dir / "users.json")
        self.users.ensure(
            config.bootstrap_admin, config.bootstrap_password, is_admin=True
        )
        self.sessions = SessionManager(config.session_ttl_seconds, clock)
        self.blobs = BlobStore(self.data_dir / "blobs")
        self.notifier = (
            notifier
            if notifier is not None
            else LogNotifier(self.data_dir / "notifications.jsonl")
        )

        self._problem_store = DocumentStore(self.data_dir / "problems.json")
        self._problems: dict[str, dict] = self._problem_store.load()
        self._handles: dict[str, GroupHandle] = {}
        self._handles_lock = threading.Lock()

    # -- problems -------------------------------------------------------------

    def create_problem(self, doc: Mapping[str, Any]) -> dict:
        doc = dict(doc)
        require_id("problem", doc.get("id", ""))
        problem_from_doc(doc)  # validates mode and shape
        if doc["id"] in self._problems:
            raise NameCollisionError(f"problem {doc['id']!r} already exists")
        starts, ends = doc.get("starts_at"), doc.get("ends_at")
        if starts is not None and ends is not None and ends < starts:
            raise OutOfRangeError("ends_at must not precede starts_at")
        self._problems[doc["id"]] = doc
        self._problem_store.save(self._problems)
        return doc

    def list_problems(self) -> list[dict]:
        return [self._problems[pid] for pid in sorted(self._problems)]

    def get_problem(self, problem_id: str) -> dict:
        doc = self._problems.get(problem_id)
        if doc is None:
            raise UnknownEntityError(f"no problem {problem_id!r}")
        return doc

    # -- groups ---------------------------------------------------------------

    def _group_dir(self, group_id: str) -> Path:
        return self.data_dir / "groups" / group_id

    def list_group_ids(self) -> list[str]:
        with self._handles_lock:
            loaded = set(self._handles)
        on_disk = {
            p.name for p in (self.data_dir / "groups").iterdir() if p.is_dir()
        }
        return sorted(loaded | on_disk)

    def create_group(
        self, group_id: str, problem_id: str, members: Sequence[Mapping[str, Any]]
    ) -> wf.GroupState:
        require_id("group", group_id)
        problem = problem_from_doc(self.get_problem(problem_id))
        for doc in members:
            user = doc.get("user", "")
            if user not in self.users:
                raise UnknownEntityError(f"no user {user!r} to enrol")
        state = wf.new_group(problem, [membership_from_doc(d) for d in members])

        with self._handles_lock:
            if group_id in self._handles or self._group_dir(group_id).exists():
                raise NameCollisionError(f"group {group_id!r} already exists")
            store = GroupStore(
                self._group_dir(group_id), self.config.snapshot_interval
            )
            store.create(state)
            handle = GroupHandle(group_id, store)
            handle.state = state
            handle.applied = 1
            self._handles[group_id] = handle
        return state

    def handle(self, group_id: str) -> GroupHandle:
        with self._handles_lock:
            handle = self._handles.get(group_id)
            if handle is None:
                store = GroupStore(
                    self._group_dir(group_id), self.config.snapshot_interval
                )
                if not store.exists:
                    raise UnknownEntityError(f"no group {group_id!r}")
                handle = GroupHandle(group_id, store)
                self._handles[group_id] = handle
        with handle.lock:
            if handle.state is None:
                loaded = handle.store.load()
                handle.state = loaded.state
                handle.applied = loaded.applied
                handle.warnings = loaded.warnings
        return handle

    def state(self, group_id: str) -> wf.GroupState:
        state = self.handle(group_id).state
        assert state is not None
        return state

    def execute(
        self, group_id: str, command: wf.Command
    ) -> tuple[wf.GroupState, tuple[dict, ...]]:
        """Apply one command under the group lock; durable before returning."""
        handle = self.handle(group_id)
        with handle.lock:
            assert handle.state is not None
            new_state, events = wf.apply(handle.state, command)
            handle.applied = handle.store.append_command(
                command, new_state, handle.applied
            )
            handle.state = new_state
        for event in events:
            if event.get("kind") == "notify":
                payload = {k: v for k, v in event.items() if k not in ("kind", "user", "reason")}
                self.notifier.send(event["user"], event["reason"], payload)
        return new_state, events

    def snapshot_all(self) -> None:
        """Force snapshots for every loaded group (used at shutdown)."""
        with self._handles_lock:
            handles = list(self._handles.values())
        for handle in handles:
            with handle.lock:
                if handle.state is not None:
                    handle.store.write_snapshot(handle.state, handle.applied)

    # -- membership helpers -----------------------------------------------------

    def member_or_none(self, state: wf.GroupState, user: str) -> wf.Membership | None:
        return next((m for m in state.members if m.user == user), None)

    def require_member(self, state: wf.GroupState, user: str) -> wf.Membership:
        membership = self.member_or_none(state, user)
        if membership is None:
            raise UnknownEntityError(f"user {user!r} is not a member of this group")
        return membership

    def user_for_pseudonym(self, state: wf.GroupState, pseudonym: str) -> str:
        for membership in state.members:
            if membership.pseudonym == pseudonym:
                return membership.user
        raise UnknownEntityError(f"no member with pseudonym {pseudonym!r}")

    def export_dir(self, group_id: str) -> Path:
        return self._group_dir(group_id) / "export"
