"""User accounts and bearer-token sessions.

Passwords are stored as salted PBKDF2-SHA256 digests; session tokens are
128-bit random values with a configurable time-to-live.
"""

from __future__ import annotations

import hashlib
import hmac
import secrets
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from ..errors import NameCollisionError, OutOfRangeError, UnknownEntityError
from .persistence import DocumentStore

_PBKDF2_ITERATIONS = 60_000


def _digest(password: str, salt: bytes) -> bytes:
    return hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, _PBKDF2_ITERATIONS)


@dataclass(frozen=True)
class UserRecord:
    username: str
    is_admin: bool


class UserStore:
    """Usernames with salted password hashes, persisted as one JSON file."""

    def __init__(self, path: str | Path) -> None:
        self._store = DocumentStore(path)
        self._users: dict[str, dict] = self._store.load()

    def __contains__(self, username: str) -> bool:
        return username in self._users

    def usernames(self) -> list[str]:
        return sorted(self._users)

    def record(self, username: str) -> UserRecord:
        doc = self._users.get(username)
        if doc is None:
            raise UnknownEntityError(f"no user {username!r}")
        return UserRecord(username=username, is_admin=bool(doc.get("is_admin")))

    def create(self, username: str, password: str, *, is_admin: bool = False) -> UserRecord:
        username = username.strip()
        if not username:
            raise OutOfRangeError("username must not be empty")
        if username in self._users:
            raise NameCollisionError(f"user {username!r} already exists")
        if len(password) < 4:
            raise OutOfRangeError("password must be at least 4 characters")
        salt = secrets.token_bytes(16)
        self._users[username] = {
            "salt": salt.hex(),
            "hash": _digest(password, salt).hex(),
            "is_admin": is_admin,
        }
        self._store.save(self._users)
        return UserRecord(username=username, is_admin=is_admin)

    def ensure(self, username: str, password: str, *, is_admin: bool = False) -> None:
        """Create the account if absent (used for the bootstrap admin)."""
        if username and password and username not in self._users:
            self.create(username, password, is_admin=is_admin)

    def authenticate(self, username: str, password: str) -> UserRecord | None:
        doc = self._users.get(username)
        if doc is None:
            return None
        expected = bytes.fromhex(doc["hash"])
        if not hmac.compare_digest(_digest(password, bytes.fromhex(doc["salt"])), expected):
            return None
        return UserRecord(username=username, is_admin=bool(doc.get("is_admin")))


@dataclass
class Session:
    token: str
    username: str
    expires_at: float


class SessionManager:
    """In-memory bearer sessions: 128-bit tokens, expiry enforced on use."""

    def __init__(self, ttl_seconds: int, clock: Callable[[], float] = time.time) -> None:
        self.ttl_seconds = ttl_seconds
        self.clock = clock
        self._sessions: dict[str, Session] = {}

    def issue(self, username: str) -> Session:
        token = secrets.token_hex(16)
        session = Session(
            token=token, username=username, expires_at=self.clock() + self.ttl_seconds
        )
        self._sessions[token] = session
        return session

    def resolve(self, token: str) -> str | None:
        session = self._sessions.get(token)
        if session is None:
            return None
        if self.clock() >= session.expires_at:
            del self._sessions[token]
            return None
        return session.username

    def revoke(self, token: str) -> None:
        self._sessions.pop(token, None)
