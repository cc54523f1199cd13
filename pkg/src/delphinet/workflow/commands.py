"""Commands accepted by the group workflow engine.

Commands are plain frozen dataclasses so that the engine stays a pure
function of ``(state, command)`` and so that a command log can be
serialized, replayed, and audited deterministically.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from ..errors import NetworkFormatError


@dataclass(frozen=True)
class Command:
    """Base class for all workflow commands."""


@dataclass(frozen=True)
class AddMember(Command):
    """Add a member to the group (setup/admin operation)."""

    user: str
    role: str
    pseudonym: str = ""


@dataclass(frozen=True)
class ReplaceFacilitator(Command):
    """Atomically hand the facilitator role to an existing analyst."""

    new_facilitator: str


@dataclass(frozen=True)
class EditWork(Command):
    """Save a (possibly partial) draft of the actor's work for a step."""

    user: str
    step: int
    content: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class ShareWork(Command):
    """Irrevocably share the actor's current draft version for a step."""

    user: str
    step: int


@dataclass(frozen=True)
class GoToStep(Command):
    """Navigate to a step; moving past the frontier is gate-checked."""

    user: str
    step: int


@dataclass(frozen=True)
class ReleaseStep(Command):
    """Facilitator releases a step for advancement (Classic/Variant)."""

    user: str
    step: int


@dataclass(frozen=True)
class EditGroupSolution(Command):
    """Facilitator edits the group solution draft for a step."""

    user: str
    step: int
    content: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class PublishGroupSolution(Command):
    """Facilitator publishes the current group solution draft for a step."""

    user: str
    step: int


@dataclass(frozen=True)
class AdoptElements(Command):
    """Copy selected elements from a visible peer artifact into a target.

    ``target`` is ``"own"`` (the actor's draft) or ``"group"`` (the group
    solution; facilitator only).  ``selection`` is a step-specific list of
    element identifiers (e.g. variable ids for steps 2-4).
    """

    user: str
    source_owner: str
    step: int
    selection: Sequence[str] = ()
    target: str = "own"


@dataclass(frozen=True)
class PostForum(Command):
    """Post to the per-step discussion forum."""

    user: str
    step: int
    body: str
    thread: str = ""
    attachments: Sequence[str] = ()


@dataclass(frozen=True)
class SendMessage(Command):
    """Send a direct message; analysts may only write to the facilitator."""

    sender: str
    recipients: Sequence[str]
    body: str
    email_nudge: bool = False


@dataclass(frozen=True)
class RateReport(Command):
    """Rate a shared final report on the 1..10 scale (revisable)."""

    user: str
    report_id: str
    score: int


@dataclass(frozen=True)
class SubmitFinal(Command):
    """Submit the group's final report.

    ``method`` is ``"facilitator_choice"`` (requires ``report_id``) or
    ``"highest_rated"`` (automatic selection from rated shared reports).
    """

    user: str
    method: str
    report_id: str = ""
    timestamp: float = 0.0


@dataclass(frozen=True)
class FreezeProblem(Command):
    """Freeze the problem at its deadline; starts the grace window."""

    timestamp: float


_COMMAND_TYPES: dict[str, type] = {
    cls.__name__: cls
    for cls in (
        AddMember,
        ReplaceFacilitator,
        EditWork,
        ShareWork,
        GoToStep,
        ReleaseStep,
        EditGroupSolution,
        PublishGroupSolution,
        AdoptElements,
        PostForum,
        SendMessage,
        RateReport,
        SubmitFinal,
        FreezeProblem,
    )
}


def command_to_json(command: Command) -> dict:
    """Encode a command for the append-only log."""
    payload = dataclasses.asdict(command)
    for key, value in payload.items():
        if isinstance(value, tuple):
            payload[key] = list(value)
    return {"type": type(command).__name__, "args": payload}


def command_from_json(doc: Mapping[str, Any]) -> Command:
    """Decode a logged command; unknown types raise ``NetworkFormatError``."""
    try:
        name = doc["type"]
        args = dict(doc["args"])
    except (KeyError, TypeError) as exc:
        raise NetworkFormatError(f"malformed command record: {exc}") from exc
    cls = _COMMAND_TYPES.get(name)
    if cls is None:
        raise NetworkFormatError(f"unknown command type {name!r}")
    for fld in dataclasses.fields(cls):
        if fld.name in args and isinstance(args[fld.name], list):
            args[fld.name] = tuple(args[fld.name])
    try:
        return cls(**args)
    except TypeError as exc:
        raise NetworkFormatError(f"bad arguments for {name}: {exc}") from exc
