"""Request bodies accepted by the HTTP API (responses are plain JSON)."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field


class _Body(BaseModel):
    model_config = ConfigDict(extra="forbid")


class LoginRequest(_Body):
    username: str
    password: str


class UserCreate(_Body):
    username: str
    password: str
    is_admin: bool = False


class ProblemCreate(_Body):
    id: str
    title: str
    statement: str
    questions: list[str] = Field(default_factory=list)
    delphi_mode: str = "realtime"
    starts_at: Optional[float] = None
    ends_at: Optional[float] = None


class MemberSpec(_Body):
    user: str
    role: str
    pseudonym: str = ""


class GroupCreate(_Body):
    id: str
    problem_id: str
    members: list[MemberSpec]


class MemberAdd(_Body):
    user: str
    role: str
    pseudonym: str = ""


class ReplaceFacilitatorRequest(_Body):
    new_facilitator: str


class FreezeRequest(_Body):
    timestamp: Optional[float] = None


class WorkPut(_Body):
    content: dict[str, Any]


class AdvanceRequest(_Body):
    step: int


class AdoptRequest(_Body):
    source: str  # pseudonym of the peer, or "group" for the group solution
    step: int
    selection: list[str]
    target: str = "own"


class ScenarioCreate(_Body):
    name: str
    evidence: dict[str, str] = Field(default_factory=dict)
    outputs: list[str] = Field(default_factory=list)
    description: Optional[str] = None


class ForumPostCreate(_Body):
    body: str
    thread: str = ""
    attachments: list[str] = Field(default_factory=list)


class MessageSend(_Body):
    recipients: list[str]  # pseudonyms
    body: str
    email_nudge: bool = False


class RatingPost(_Body):
    score: int


class SubmitRequest(_Body):
    method: str
    report_id: str = ""  # pseudonym of the author, or "group"


class AutofillRequest(_Body):
    report: dict[str, Any]
    scenario_id: str
    network_hash: Optional[str] = None


class BlobUpload(_Body):
    content_base64: str
