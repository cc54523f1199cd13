"""Pure state machine for the six-step group elicitation workflow.

The whole group state is an immutable value; :func:`apply` maps
``(state, command)`` to ``(new state, events)`` without side effects.
That keeps replay deterministic, makes snapshots trivial, and lets the
gate-safety tests explore the reachable state space cheaply through
structural sharing.
"""

from __future__ import annotations

import hashlib
import json
import statistics
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Mapping, Sequence

from ..errors import (
    AlreadySubmittedError,
    EmptyContentError,
    FacilitatorSingularityError,
    FrozenProblemError,
    GateClosedError,
    IncompatibleSelectionError,
    NameCollisionError,
    NoRatedReportsError,
    OutOfRangeError,
    RoleError,
    UnknownEntityError,
)
from . import payloads
from .commands import (
    AddMember,
    AdoptElements,
    Command,
    EditGroupSolution,
    EditWork,
    FreezeProblem,
    GoToStep,
    PostForum,
    PublishGroupSolution,
    RateReport,
    ReleaseStep,
    ReplaceFacilitator,
    SendMessage,
    ShareWork,
    SubmitFinal,
)

STEP_COUNT = payloads.STEP_COUNT

#: Report identifier for the group's published step-6 solution.
GROUP_REPORT_ID = "group"

#: Seconds after a freeze during which final submission is still accepted.
SUBMISSION_GRACE_SECONDS = 24 * 3600

# Stable reason codes carried by GateClosedError, rendered by clients.
REASON_VIEWER_NOT_SHARED = "viewer_not_shared"
REASON_OWNER_NOT_SHARED = "owner_not_shared"
REASON_CLASSIC_MODE = "classic_mode"
REASON_NOT_PUBLISHED = "not_published"
REASON_NOT_RELEASED = "not_released"
REASON_NOT_SHARED = "not_shared"
REASON_NOT_REACHED = "not_reached"


class Role(str, Enum):
    ANALYST = "analyst"
    FACILITATOR = "facilitator"
    OBSERVER = "observer"


class DelphiMode(str, Enum):
    """How peer visibility and step advancement are synchronized.

    REAL_TIME: sharing step s gates both peer visibility and advancement.
    CLASSIC: analysts never see peer work or forums, only the published
        group solution; advancement waits for a facilitator release.
    VARIANT: peer visibility as in REAL_TIME, advancement as in CLASSIC.
    """

    REAL_TIME = "realtime"
    CLASSIC = "classic"
    VARIANT = "variant"


class _Hidden:
    """Sentinel returned when a rating summary is withheld, not an error."""

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return "Hidden"

    def __bool__(self) -> bool:
        return False


HIDDEN = _Hidden()


@dataclass(frozen=True)
class Problem:
    id: str
    title: str
    statement: str
    questions: tuple[str, ...] = ()
    delphi_mode: DelphiMode = DelphiMode.REAL_TIME
    starts_at: float | None = None
    ends_at: float | None = None


@dataclass(frozen=True)
class Membership:
    user: str
    role: Role
    pseudonym: str


@dataclass(frozen=True)
class SharedVersion:
    """Immutable snapshot taken when a version is shared or published."""

    version: int
    content: str
    seq: int


@dataclass(frozen=True)
class WorkItem:
    owner: str
    step: int
    version: int = 0
    content: str = "{}"
    shared: tuple[SharedVersion, ...] = ()

    @property
    def is_shared(self) -> bool:
        """True when the current version has been shared."""
        return bool(self.shared) and self.shared[-1].version == self.version

    @property
    def ever_shared(self) -> bool:
        return bool(self.shared)

    @property
    def status(self) -> str:
        return "shared" if self.is_shared else "private"


@dataclass(frozen=True)
class GroupStep:
    step: int
    version: int = 0
    content: str = "{}"
    published: tuple[SharedVersion, ...] = ()


@dataclass(frozen=True)
class Nav:
    current: int = 1
    max_reached: int = 1


@dataclass(frozen=True)
class ForumPost:
    id: str
    step: int
    author: str
    body: str
    thread: str
    attachments: tuple[str, ...] = ()
    seq: int = 0


@dataclass(frozen=True)
class DirectMessage:
    id: str
    sender: str
    recipients: tuple[str, ...]
    body: str
    email_nudge: bool = False
    seq: int = 0


@dataclass(frozen=True)
class FinalSubmission:
    report_id: str
    method: str
    content: str
    content_hash: str
    seq: int


@dataclass(frozen=True)
class GroupState:
    """Complete, immutable state of one group working one problem."""

    problem: Problem
    members: tuple[Membership, ...]
    work: Mapping[tuple[str, int], WorkItem] = field(default_factory=dict)
    group_solution: Mapping[int, GroupStep] = field(default_factory=dict)
    nav: Mapping[str, Nav] = field(default_factory=dict)
    released: frozenset[int] = frozenset()
    forums: Mapping[int, tuple[ForumPost, ...]] = field(default_factory=dict)
    messages: tuple[DirectMessage, ...] = ()
    ratings: Mapping[tuple[str, str], int] = field(default_factory=dict)
    submission: FinalSubmission | None = None
    frozen_at: float | None = None
    seq: int = 0

    @property
    def mode(self) -> DelphiMode:
        return self.problem.delphi_mode


# ---------------------------------------------------------------------------
# Construction


def _default_pseudonym(role: Role, index: int) -> str:
    if role is Role.FACILITATOR:
        return "Facilitator"
    if role is Role.OBSERVER:
        return f"Observer {index}"
    return f"Panelist {index}"


def new_group(problem: Problem, members: Sequence[Membership]) -> GroupState:
    """Validate memberships and build the initial state.

    Blank pseudonyms are assigned deterministically from the member order.
    """
    if not problem.statement.strip():
        raise EmptyContentError("problem statement must be non-empty")
    if (
        problem.starts_at is not None
        and problem.ends_at is not None
        and problem.ends_at < problem.starts_at
    ):
        raise IncompatibleSelectionError("problem deadlines must be ordered")

    resolved: list[Membership] = []
    counters = {Role.ANALYST: 0, Role.OBSERVER: 0, Role.FACILITATOR: 0}
    for member in members:
        role = Role(member.role)
        counters[role] += 1
        pseudonym = member.pseudonym or _default_pseudonym(role, counters[role])
        resolved.append(Membership(member.user, role, pseudonym))

    facilitators = [m for m in resolved if m.role is Role.FACILITATOR]
    if len(facilitators) != 1:
        raise FacilitatorSingularityError(
            f"a group requires exactly one facilitator, got {len(facilitators)}"
        )
    users = [m.user for m in resolved]
    if len(set(users)) != len(users):
        raise NameCollisionError("duplicate user in group membership")
    pseudonyms = [m.pseudonym for m in resolved]
    if len(set(pseudonyms)) != len(pseudonyms):
        raise NameCollisionError("pseudonyms must be unique within a group")

    return GroupState(problem=problem, members=tuple(resolved))


# ---------------------------------------------------------------------------
# Lookup helpers


def member(state: GroupState, user: str) -> Membership:
    for m in state.members:
        if m.user == user:
            return m
    raise UnknownEntityError(f"user {user!r} is not a member of this group")


def facilitator(state: GroupState) -> Membership:
    for m in state.members:
        if m.role is Role.FACILITATOR:
            return m
    raise FacilitatorSingularityError("group has no facilitator")


def pseudonym_of(state: GroupState, user: str) -> str:
    return member(state, user).pseudonym


def _work_item(state: GroupState, user: str, step: int) -> WorkItem | None:
    return state.work.get((user, step))


def has_shared(state: GroupState, user: str, step: int) -> bool:
    item = _work_item(state, user, step)
    return item is not None and item.ever_shared


def _check_step(step: int) -> None:
    if not 1 <= step <= STEP_COUNT:
        raise UnknownEntityError(f"step must be 1..{STEP_COUNT}, got {step}")


def _require_active(state: GroupState) -> None:
    if state.frozen_at is not None:
        raise FrozenProblemError("problem is frozen; work is read-only")


# ---------------------------------------------------------------------------
# Visibility predicates and views
#
# The central safety property: an analyst never obtains a view of a peer's
# step-s work item, the step-s group solution, or the step-s forum without
# having shared their own step-s work first.  Sharing is irrevocable, so
# "has shared now" is equivalent to "shared before the view".


def can_view_work(state: GroupState, viewer: str, owner: str, step: int) -> bool:
    """Pure predicate form of :func:`view_work` (False instead of raise)."""
    viewer_member = member(state, viewer)
    member(state, owner)
    _check_step(step)
    if viewer == owner:
        return True
    item = _work_item(state, owner, step)
    if item is None or not item.ever_shared:
        return False
    if viewer_member.role in (Role.FACILITATOR, Role.OBSERVER):
        return True
    if state.mode is DelphiMode.CLASSIC:
        return False
    return has_shared(state, viewer, step)


def view_work(state: GroupState, viewer: str, owner: str, step: int) -> dict:
    """Return the visible form of an analyst's step work, or raise.

    Owners see their current draft; everyone else sees the latest shared
    version.  The viewer's own gate is checked before the owner's share
    status so a closed gate never leaks whether the peer has shared.
    """
    viewer_member = member(state, viewer)
    owner_member = member(state, owner)
    _check_step(step)
    if viewer == owner:
        item = _work_item(state, owner, step) or WorkItem(owner=owner, step=step)
        return {
            "owner_pseudonym": owner_member.pseudonym,
            "step": step,
            "version": item.version,
            "status": item.status,
            "content": payloads.decode_payload(item.content),
        }
    if viewer_member.role is Role.ANALYST:
        if state.mode is DelphiMode.CLASSIC:
            raise GateClosedError(
                "peer work is never visible in classic mode",
                reason=REASON_CLASSIC_MODE,
            )
        if not has_shared(state, viewer, step):
            raise GateClosedError(
                f"share your own step {step} work before viewing others'",
                reason=REASON_VIEWER_NOT_SHARED,
            )
    item = _work_item(state, owner, step)
    if item is None or not item.ever_shared:
        raise GateClosedError(
            f"{owner_member.pseudonym} has not shared step {step} work",
            reason=REASON_OWNER_NOT_SHARED,
        )
    latest = item.shared[-1]
    return {
        "owner_pseudonym": owner_member.pseudonym,
        "step": step,
        "version": latest.version,
        "status": "shared",
        "content": payloads.decode_payload(latest.content),
    }


def can_view_group_solution(state: GroupState, viewer: str, step: int) -> bool:
    viewer_member = member(state, viewer)
    _check_step(step)
    if viewer_member.role is Role.FACILITATOR:
        return True
    group_step = state.group_solution.get(step)
    published = group_step is not None and bool(group_step.published)
    if viewer_member.role is Role.OBSERVER:
        return published
    return published and has_shared(state, viewer, step)


def view_group_solution(state: GroupState, viewer: str, step: int) -> dict:
    """Facilitator sees the live draft; others the latest published version."""
    viewer_member = member(state, viewer)
    _check_step(step)
    group_step = state.group_solution.get(step) or GroupStep(step=step)
    if viewer_member.role is Role.FACILITATOR:
        return {
            "step": step,
            "version": group_step.version,
            "published_versions": [p.version for p in group_step.published],
            "content": payloads.decode_payload(group_step.content),
        }
    if viewer_member.role is Role.ANALYST and not has_shared(state, viewer, step):
        raise GateClosedError(
            f"share your own step {step} work before viewing the group solution",
            reason=REASON_VIEWER_NOT_SHARED,
        )
    if not group_step.published:
        raise GateClosedError(
            f"no group solution has been published for step {step}",
            reason=REASON_NOT_PUBLISHED,
        )
    latest = group_step.published[-1]
    return {
        "step": step,
        "version": latest.version,
        "published_versions": [p.version for p in group_step.published],
        "content": payloads.decode_payload(latest.content),
    }


def can_view_forum(state: GroupState, viewer: str, step: int) -> bool:
    viewer_member = member(state, viewer)
    _check_step(step)
    if viewer_member.role in (Role.FACILITATOR, Role.OBSERVER):
        return True
    if state.mode is DelphiMode.CLASSIC:
        return False
    return has_shared(state, viewer, step)


def _check_forum_gate(state: GroupState, viewer: str, step: int) -> Membership:
    viewer_member = member(state, viewer)
    _check_step(step)
    if viewer_member.role in (Role.FACILITATOR, Role.OBSERVER):
        return viewer_member
    if state.mode is DelphiMode.CLASSIC:
        raise GateClosedError(
            "forums are closed to analysts in classic mode",
            reason=REASON_CLASSIC_MODE,
        )
    if not has_shared(state, viewer, step):
        raise GateClosedError(
            f"share your own step {step} work before entering its forum",
            reason=REASON_VIEWER_NOT_SHARED,
        )
    return viewer_member


def view_forum(state: GroupState, viewer: str, step: int) -> tuple[dict, ...]:
    """Return the step forum as pseudonymous post records."""
    _check_forum_gate(state, viewer, step)
    posts = state.forums.get(step, ())
    return tuple(
        {
            "id": post.id,
            "step": post.step,
            "author_pseudonym": pseudonym_of(state, post.author),
            "body": post.body,
            "thread": post.thread,
            "attachments": list(post.attachments),
            "seq": post.seq,
        }
        for post in posts
    )


def view_messages(state: GroupState, user: str) -> tuple[dict, ...]:
    """Messages involving ``user``; recipients never see the fan-out set."""
    viewer_member = member(state, user)
    visible = []
    for message in state.messages:
        if message.sender == user:
            visible.append(
                {
                    "id": message.id,
                    "from_pseudonym": viewer_member.pseudonym,
                    "to_pseudonyms": [
                        pseudonym_of(state, r) for r in message.recipients
                    ],
                    "body": message.body,
                    "email_nudge": message.email_nudge,
                    "seq": message.seq,
                }
            )
        elif user in message.recipients:
            visible.append(
                {
                    "id": message.id,
                    "from_pseudonym": pseudonym_of(state, message.sender),
                    "to_pseudonyms": [viewer_member.pseudonym],
                    "body": message.body,
                    "email_nudge": message.email_nudge,
                    "seq": message.seq,
                }
            )
    return tuple(visible)


def shared_report_owners(state: GroupState) -> tuple[str, ...]:
    """Analysts with at least one shared step-6 report, in share order."""
    owners = [
        (item.shared[0].seq, user)
        for (user, step), item in state.work.items()
        if step == STEP_COUNT and item.ever_shared
    ]
    return tuple(user for _, user in sorted(owners))


def ratable_report_ids(state: GroupState) -> tuple[str, ...]:
    ids = list(shared_report_owners(state))
    group_step = state.group_solution.get(STEP_COUNT)
    if group_step is not None and group_step.published:
        ids.append(GROUP_REPORT_ID)
    return tuple(ids)


def rating_summary(state: GroupState, requester: str, report_id: str):
    """Return ``(average, count)`` or :data:`HIDDEN`.

    Analysts see the aggregate only after rating the report themselves;
    the facilitator and observers see aggregates directly.  Individual
    scores are never exposed through any view.
    """
    requester_member = member(state, requester)
    if report_id not in ratable_report_ids(state):
        raise UnknownEntityError(f"no shared report with id {report_id!r}")
    if requester_member.role is Role.ANALYST and (
        (requester, report_id) not in state.ratings
    ):
        return HIDDEN
    scores = [
        score for (rater, rid), score in state.ratings.items() if rid == report_id
    ]
    if not scores:
        return (None, 0)
    return (round(statistics.mean(scores), 1), len(scores))


# ---------------------------------------------------------------------------
# Command application


def apply(state: GroupState, command: Command) -> tuple[GroupState, tuple[dict, ...]]:
    """Apply one command, returning the new state and emitted events."""
    handler = _HANDLERS.get(type(command))
    if handler is None:
        raise UnknownEntityError(f"unsupported command {type(command).__name__}")
    return handler(state, command)


def _apply_add_member(state: GroupState, cmd: AddMember):
    role = Role(cmd.role)
    if any(m.user == cmd.user for m in state.members):
        raise NameCollisionError(f"user {cmd.user!r} is already a member")
    if role is Role.FACILITATOR and any(
        m.role is Role.FACILITATOR for m in state.members
    ):
        raise FacilitatorSingularityError("group already has a facilitator")
    counters = {r: sum(1 for m in state.members if m.role is r) for r in Role}
    pseudonym = cmd.pseudonym or _default_pseudonym(role, counters[role] + 1)
    if any(m.pseudonym == pseudonym for m in state.members):
        raise NameCollisionError(f"pseudonym {pseudonym!r} already in use")
    new_member = Membership(cmd.user, role, pseudonym)
    seq = state.seq + 1
    new_state = replace(state, members=state.members + (new_member,), seq=seq)
    return new_state, (
        {"kind": "member_added", "user": cmd.user, "role": role.value, "seq": seq},
    )


def _apply_replace_facilitator(state: GroupState, cmd: ReplaceFacilitator):
    target = member(state, cmd.new_facilitator)
    if target.role is Role.FACILITATOR:
        raise IncompatibleSelectionError(
            f"{cmd.new_facilitator!r} is already the facilitator"
        )
    old = facilitator(state)
    members = tuple(
        replace(m, role=Role.FACILITATOR)
        if m.user == target.user
        else (replace(m, role=Role.OBSERVER) if m.user == old.user else m)
        for m in state.members
    )
    seq = state.seq + 1
    new_state = replace(state, members=members, seq=seq)
    return new_state, (
        {
            "kind": "facilitator_replaced",
            "old": old.user,
            "new": target.user,
            "seq": seq,
        },
    )


def _edit_bounds(state: GroupState, user: str, step: int) -> None:
    nav = state.nav.get(user, Nav())
    if step > nav.max_reached:
        raise GateClosedError(
            f"step {step} has not been reached yet",
            reason=REASON_NOT_REACHED,
        )


def _apply_edit_work(state: GroupState, cmd: EditWork):
    _require_active(state)
    actor = member(state, cmd.user)
    if actor.role is not Role.ANALYST:
        raise RoleError("only analysts have step work of their own")
    _check_step(cmd.step)
    _edit_bounds(state, cmd.user, cmd.step)
    payloads.validate_payload(cmd.step, cmd.content)
    encoded = payloads.canonical_payload(dict(cmd.content))
    item = _work_item(state, cmd.user, cmd.step) or WorkItem(
        owner=cmd.user, step=cmd.step
    )
    item = replace(item, version=item.version + 1, content=encoded)
    seq = state.seq + 1
    work = dict(state.work)
    work[(cmd.user, cmd.step)] = item
    new_state = replace(state, work=work, seq=seq)
    return new_state, (
        {
            "kind": "work_edited",
            "user": cmd.user,
            "step": cmd.step,
            "version": item.version,
            "seq": seq,
        },
    )


def _apply_share_work(state: GroupState, cmd: ShareWork):
    _require_active(state)
    actor = member(state, cmd.user)
    if actor.role is not Role.ANALYST:
        raise RoleError("only analysts share step work")
    _check_step(cmd.step)
    item = _work_item(state, cmd.user, cmd.step)
    if item is None:
        raise EmptyContentError(f"no step {cmd.step} work to share")
    payload = payloads.decode_payload(item.content)
    payloads.require_shareable(cmd.step, payload)
    if item.is_shared:
        return state, ()
    seq = state.seq + 1
    shared = item.shared + (
        SharedVersion(version=item.version, content=item.content, seq=seq),
    )
    work = dict(state.work)
    work[(cmd.user, cmd.step)] = replace(item, shared=shared)
    new_state = replace(state, work=work, seq=seq)
    return new_state, (
        {
            "kind": "work_shared",
            "user": cmd.user,
            "step": cmd.step,
            "version": item.version,
            "seq": seq,
        },
    )


def _apply_go_to_step(state: GroupState, cmd: GoToStep):
    _require_active(state)
    actor = member(state, cmd.user)
    _check_step(cmd.step)
    nav = state.nav.get(cmd.user, Nav())
    if actor.role in (Role.FACILITATOR, Role.OBSERVER):
        new_nav = Nav(current=cmd.step, max_reached=max(nav.max_reached, cmd.step))
    elif cmd.step <= nav.max_reached:
        new_nav = replace(nav, current=cmd.step)
    elif cmd.step == nav.max_reached + 1:
        frontier = nav.max_reached
        if state.mode is DelphiMode.REAL_TIME:
            if not has_shared(state, cmd.user, frontier):
                raise GateClosedError(
                    f"share step {frontier} before advancing to step {cmd.step}",
                    reason=REASON_NOT_SHARED,
                )
        else:
            if cmd.step not in state.released:
                raise GateClosedError(
                    f"step {cmd.step} has not been released by the facilitator",
                    reason=REASON_NOT_RELEASED,
                )
        new_nav = Nav(current=cmd.step, max_reached=cmd.step)
    else:
        raise GateClosedError(
            f"cannot skip ahead to step {cmd.step} from step {nav.max_reached}",
            reason=REASON_NOT_REACHED,
        )
    seq = state.seq + 1
    nav_map = dict(state.nav)
    nav_map[cmd.user] = new_nav
    new_state = replace(state, nav=nav_map, seq=seq)
    return new_state, (
        {"kind": "navigated", "user": cmd.user, "step": cmd.step, "seq": seq},
    )


def _apply_release_step(state: GroupState, cmd: ReleaseStep):
    _require_active(state)
    actor = member(state, cmd.user)
    if actor.role is not Role.FACILITATOR:
        raise RoleError("only the facilitator releases steps")
    _check_step(cmd.step)
    if cmd.step in state.released:
        return state, ()
    seq = state.seq + 1
    new_state = replace(state, released=state.released | {cmd.step}, seq=seq)
    return new_state, ({"kind": "step_released", "step": cmd.step, "seq": seq},)


def _apply_edit_group_solution(state: GroupState, cmd: EditGroupSolution):
    _require_active(state)
    actor = member(state, cmd.user)
    if actor.role is not Role.FACILITATOR:
        raise RoleError("only the facilitator edits the group solution")
    _check_step(cmd.step)
    payloads.validate_payload(cmd.step, cmd.content)
    encoded = payloads.canonical_payload(dict(cmd.content))
    group_step = state.group_solution.get(cmd.step) or GroupStep(step=cmd.step)
    group_step = replace(group_step, version=group_step.version + 1, content=encoded)
    seq = state.seq + 1
    group_solution = dict(state.group_solution)
    group_solution[cmd.step] = group_step
    new_state = replace(state, group_solution=group_solution, seq=seq)
    return new_state, (
        {
            "kind": "group_solution_edited",
            "step": cmd.step,
            "version": group_step.version,
            "seq": seq,
        },
    )


def _apply_publish_group_solution(state: GroupState, cmd: PublishGroupSolution):
    _require_active(state)
    actor = member(state, cmd.user)
    if actor.role is not Role.FACILITATOR:
        raise RoleError("only the facilitator publishes the group solution")
    _check_step(cmd.step)
    group_step = state.group_solution.get(cmd.step)
    if group_step is None or group_step.version == 0:
        raise EmptyContentError(
            f"no group solution draft for step {cmd.step} to publish"
        )
    payload = payloads.decode_payload(group_step.content)
    payloads.require_shareable(cmd.step, payload)
    if group_step.published and group_step.published[-1].version == group_step.version:
        return state, ()
    seq = state.seq + 1
    published = group_step.published + (
        SharedVersion(version=group_step.version, content=group_step.content, seq=seq),
    )
    group_solution = dict(state.group_solution)
    group_solution[cmd.step] = replace(group_step, published=published)
    new_state = replace(state, group_solution=group_solution, seq=seq)
    return new_state, (
        {
            "kind": "group_solution_published",
            "step": cmd.step,
            "version": group_step.version,
            "seq": seq,
        },
    )


def _apply_adopt(state: GroupState, cmd: AdoptElements):
    # Adoption reads through the same gate as viewing and then rewrites the
    # target draft; the heavy lifting lives in the adoption module.
    from . import adoption

    _require_active(state)
    actor = member(state, cmd.user)
    _check_step(cmd.step)
    if cmd.target not in ("own", "group"):
        raise IncompatibleSelectionError(
            f"adoption target must be 'own' or 'group', got {cmd.target!r}"
        )
    if cmd.target == "group" and actor.role is not Role.FACILITATOR:
        raise RoleError("only the facilitator edits the group solution")
    if cmd.target == "own" and actor.role is not Role.ANALYST:
        raise RoleError("only analysts have step work of their own")

    source_view = view_work(state, cmd.user, cmd.source_owner, cmd.step)
    source_payload = source_view["content"]
    provenance = f"{source_view['owner_pseudonym']} v{source_view['version']}"

    if cmd.target == "own":
        _edit_bounds(state, cmd.user, cmd.step)
        item = _work_item(state, cmd.user, cmd.step) or WorkItem(
            owner=cmd.user, step=cmd.step
        )
        target_payload = payloads.decode_payload(item.content)
    else:
        group_step = state.group_solution.get(cmd.step) or GroupStep(step=cmd.step)
        target_payload = payloads.decode_payload(group_step.content)

    merged = adoption.adopt(
        cmd.step, source_payload, target_payload, tuple(cmd.selection), provenance
    )
    payloads.validate_payload(cmd.step, merged)
    encoded = payloads.canonical_payload(merged)
    seq = state.seq + 1
    if cmd.target == "own":
        work = dict(state.work)
        work[(cmd.user, cmd.step)] = replace(
            item, version=item.version + 1, content=encoded
        )
        new_state = replace(state, work=work, seq=seq)
    else:
        group_solution = dict(state.group_solution)
        group_solution[cmd.step] = replace(
            group_step, version=group_step.version + 1, content=encoded
        )
        new_state = replace(state, group_solution=group_solution, seq=seq)
    return new_state, (
        {
            "kind": "elements_adopted",
            "user": cmd.user,
            "source": cmd.source_owner,
            "step": cmd.step,
            "target": cmd.target,
            "count": len(tuple(cmd.selection)),
            "seq": seq,
        },
    )


def _apply_post_forum(state: GroupState, cmd: PostForum):
    _require_active(state)
    actor = member(state, cmd.user)
    if actor.role is Role.OBSERVER:
        raise RoleError("observers may read forums but not post")
    _check_forum_gate(state, cmd.user, cmd.step)
    if not cmd.body.strip():
        raise EmptyContentError("forum posts must have a body")
    posts = state.forums.get(cmd.step, ())
    thread = cmd.thread
    if thread:
        if not any(p.thread == thread for p in posts):
            raise UnknownEntityError(
                f"thread {thread!r} does not exist in the step {cmd.step} forum"
            )
    seq = state.seq + 1
    post_id = f"p{seq}"
    post = ForumPost(
        id=post_id,
        step=cmd.step,
        author=cmd.user,
        body=cmd.body,
        thread=thread or post_id,
        attachments=tuple(cmd.attachments),
        seq=seq,
    )
    forums = dict(state.forums)
    forums[cmd.step] = posts + (post,)
    new_state = replace(state, forums=forums, seq=seq)
    return new_state, (
        {"kind": "forum_posted", "step": cmd.step, "post": post_id, "seq": seq},
    )


def _apply_send_message(state: GroupState, cmd: SendMessage):
    _require_active(state)
    sender = member(state, cmd.sender)
    recipients = tuple(dict.fromkeys(cmd.recipients))
    if not recipients:
        raise EmptyContentError("a message needs at least one recipient")
    if not cmd.body.strip():
        raise EmptyContentError("messages must have a body")
    if cmd.sender in recipients:
        raise IncompatibleSelectionError("cannot message yourself")
    for recipient in recipients:
        member(state, recipient)
    fac = facilitator(state)
    if sender.role is not Role.FACILITATOR:
        if recipients != (fac.user,):
            raise RoleError(
                "analysts and observers may only message the facilitator"
            )
    seq = state.seq + 1
    message = DirectMessage(
        id=f"m{seq}",
        sender=cmd.sender,
        recipients=recipients,
        body=cmd.body,
        email_nudge=bool(cmd.email_nudge),
        seq=seq,
    )
    events: list[dict] = [
        {"kind": "message_sent", "message": message.id, "seq": seq}
    ]
    if message.email_nudge:
        for recipient in recipients:
            events.append(
                {
                    "kind": "notify",
                    "user": recipient,
                    "reason": "direct_message",
                    "message": message.id,
                    "seq": seq,
                }
            )
    new_state = replace(state, messages=state.messages + (message,), seq=seq)
    return new_state, tuple(events)


def _apply_rate_report(state: GroupState, cmd: RateReport):
    _require_active(state)
    if state.submission is not None:
        raise FrozenProblemError("ratings are frozen after final submission")
    actor = member(state, cmd.user)
    if actor.role is not Role.ANALYST:
        raise RoleError("only analysts rate reports")
    if isinstance(cmd.score, bool) or not isinstance(cmd.score, int):
        raise OutOfRangeError("rating scores are integers from 1 to 10")
    if not 1 <= cmd.score <= 10:
        raise OutOfRangeError(f"rating score must be in 1..10, got {cmd.score}")
    if cmd.report_id not in ratable_report_ids(state):
        raise UnknownEntityError(
            f"report {cmd.report_id!r} has not been shared for rating"
        )
    seq = state.seq + 1
    ratings = dict(state.ratings)
    ratings[(cmd.user, cmd.report_id)] = cmd.score
    new_state = replace(state, ratings=ratings, seq=seq)
    return new_state, (
        {"kind": "report_rated", "report": cmd.report_id, "seq": seq},
    )


def _report_share_seq(state: GroupState, report_id: str) -> int:
    if report_id == GROUP_REPORT_ID:
        group_step = state.group_solution.get(STEP_COUNT)
        return group_step.published[0].seq
    item = _work_item(state, report_id, STEP_COUNT)
    return item.shared[0].seq


def _report_content(state: GroupState, report_id: str) -> str:
    if report_id == GROUP_REPORT_ID:
        group_step = state.group_solution.get(STEP_COUNT)
        return group_step.published[-1].content
    item = _work_item(state, report_id, STEP_COUNT)
    return item.shared[-1].content


def select_highest_rated(state: GroupState) -> str:
    """Pick the rated shared report with the highest mean score.

    Ties break toward the report shared earliest.  Raises
    :class:`NoRatedReportsError` when nothing has been rated.
    """
    candidates = []
    for report_id in ratable_report_ids(state):
        scores = [
            score
            for (_, rid), score in state.ratings.items()
            if rid == report_id
        ]
        if scores:
            candidates.append(
                (
                    -statistics.mean(scores),
                    _report_share_seq(state, report_id),
                    report_id,
                )
            )
    if not candidates:
        raise NoRatedReportsError("no shared report has been rated yet")
    candidates.sort()
    return candidates[0][2]


def _apply_submit_final(state: GroupState, cmd: SubmitFinal):
    if state.submission is not None:
        raise AlreadySubmittedError("a final report has already been submitted")
    if state.frozen_at is not None and cmd.timestamp > (
        state.frozen_at + SUBMISSION_GRACE_SECONDS
    ):
        raise FrozenProblemError(
            "the post-freeze submission grace period has ended"
        )
    actor = member(state, cmd.user)
    if cmd.method == "facilitator_choice":
        if actor.role is not Role.FACILITATOR:
            raise RoleError("only the facilitator selects a report directly")
        if not cmd.report_id:
            raise IncompatibleSelectionError(
                "facilitator_choice requires a report id"
            )
        if cmd.report_id not in ratable_report_ids(state):
            raise UnknownEntityError(
                f"report {cmd.report_id!r} has not been shared"
            )
        selected = cmd.report_id
    elif cmd.method == "highest_rated":
        if actor.role is Role.OBSERVER:
            raise RoleError("observers cannot submit the final report")
        selected = select_highest_rated(state)
    else:
        raise IncompatibleSelectionError(
            f"unknown submission method {cmd.method!r}"
        )
    content = _report_content(state, selected)
    digest = hashlib.sha256(content.encode("utf-8")).hexdigest()
    seq = state.seq + 1
    submission = FinalSubmission(
        report_id=selected,
        method=cmd.method,
        content=content,
        content_hash=digest,
        seq=seq,
    )
    new_state = replace(state, submission=submission, seq=seq)
    return new_state, (
        {
            "kind": "final_submitted",
            "report": selected,
            "method": cmd.method,
            "seq": seq,
        },
    )


def _apply_freeze(state: GroupState, cmd: FreezeProblem):
    if state.frozen_at is not None:
        return state, ()
    seq = state.seq + 1
    new_state = replace(state, frozen_at=cmd.timestamp, seq=seq)
    return new_state, ({"kind": "problem_frozen", "at": cmd.timestamp, "seq": seq},)


_HANDLERS = {
    AddMember: _apply_add_member,
    ReplaceFacilitator: _apply_replace_facilitator,
    EditWork: _apply_edit_work,
    ShareWork: _apply_share_work,
    GoToStep: _apply_go_to_step,
    ReleaseStep: _apply_release_step,
    EditGroupSolution: _apply_edit_group_solution,
    PublishGroupSolution: _apply_publish_group_solution,
    AdoptElements: _apply_adopt,
    PostForum: _apply_post_forum,
    SendMessage: _apply_send_message,
    RateReport: _apply_rate_report,
    SubmitFinal: _apply_submit_final,
    FreezeProblem: _apply_freeze,
}


# ---------------------------------------------------------------------------
# Snapshots


def state_to_json(state: GroupState) -> dict:
    """Encode the full state for snapshot persistence."""
    return {
        "problem": {
            "id": state.problem.id,
            "title": state.problem.title,
            "statement": state.problem.statement,
            "questions": list(state.problem.questions),
            "delphiMode": state.problem.delphi_mode.value,
            "startsAt": state.problem.starts_at,
            "endsAt": state.problem.ends_at,
        },
        "members": [
            {"user": m.user, "role": m.role.value, "pseudonym": m.pseudonym}
            for m in state.members
        ],
        "work": [
            {
                "owner": item.owner,
                "step": item.step,
                "version": item.version,
                "content": item.content,
                "shared": [
                    {"version": s.version, "content": s.content, "seq": s.seq}
                    for s in item.shared
                ],
            }
            for (_, _), item in sorted(state.work.items())
        ],
        "groupSolution": [
            {
                "step": gs.step,
                "version": gs.version,
                "content": gs.content,
                "published": [
                    {"version": p.version, "content": p.content, "seq": p.seq}
                    for p in gs.published
                ],
            }
            for _, gs in sorted(state.group_solution.items())
        ],
        "nav": {
            user: {"current": nav.current, "maxReached": nav.max_reached}
            for user, nav in sorted(state.nav.items())
        },
        "released": sorted(state.released),
        "forums": [
            {
                "id": post.id,
                "step": post.step,
                "author": post.author,
                "body": post.body,
                "thread": post.thread,
                "attachments": list(post.attachments),
                "seq": post.seq,
            }
            for step in sorted(state.forums)
            for post in state.forums[step]
        ],
        "messages": [
            {
                "id": m.id,
                "sender": m.sender,
                "recipients": list(m.recipients),
                "body": m.body,
                "emailNudge": m.email_nudge,
                "seq": m.seq,
            }
            for m in state.messages
        ],
        "ratings": [
            {"rater": rater, "report": report, "score": score}
            for (rater, report), score in sorted(state.ratings.items())
        ],
        "submission": None
        if state.submission is None
        else {
            "report": state.submission.report_id,
            "method": state.submission.method,
            "content": state.submission.content,
            "contentHash": state.submission.content_hash,
            "seq": state.submission.seq,
        },
        "frozenAt": state.frozen_at,
        "seq": state.seq,
    }


def state_from_json(doc: Mapping[str, Any]) -> GroupState:
    problem = Problem(
        id=doc["problem"]["id"],
        title=doc["problem"]["title"],
        statement=doc["problem"]["statement"],
        questions=tuple(doc["problem"]["questions"]),
        delphi_mode=DelphiMode(doc["problem"]["delphiMode"]),
        starts_at=doc["problem"]["startsAt"],
        ends_at=doc["problem"]["endsAt"],
    )
    members = tuple(
        Membership(m["user"], Role(m["role"]), m["pseudonym"])
        for m in doc["members"]
    )
    work = {
        (entry["owner"], entry["step"]): WorkItem(
            owner=entry["owner"],
            step=entry["step"],
            version=entry["version"],
            content=entry["content"],
            shared=tuple(
                SharedVersion(s["version"], s["content"], s["seq"])
                for s in entry["shared"]
            ),
        )
        for entry in doc["work"]
    }
    group_solution = {
        entry["step"]: GroupStep(
            step=entry["step"],
            version=entry["version"],
            content=entry["content"],
            published=tuple(
                SharedVersion(p["version"], p["content"], p["seq"])
                for p in entry["published"]
            ),
        )
        for entry in doc["groupSolution"]
    }
    nav = {
        user: Nav(current=entry["current"], max_reached=entry["maxReached"])
        for user, entry in doc["nav"].items()
    }
    forums: dict[int, tuple[ForumPost, ...]] = {}
    for entry in doc["forums"]:
        post = ForumPost(
            id=entry["id"],
            step=entry["step"],
            author=entry["author"],
            body=entry["body"],
            thread=entry["thread"],
            attachments=tuple(entry["attachments"]),
            seq=entry["seq"],
        )
        forums[post.step] = forums.get(post.step, ()) + (post,)
    messages = tuple(
        DirectMessage(
            id=entry["id"],
            sender=entry["sender"],
            recipients=tuple(entry["recipients"]),
            body=entry["body"],
            email_nudge=entry["emailNudge"],
            seq=entry["seq"],
        )
        for entry in doc["messages"]
    )
    ratings = {
        (entry["rater"], entry["report"]): entry["score"]
        for entry in doc["ratings"]
    }
    submission = None
    if doc["submission"] is not None:
        submission = FinalSubmission(
            report_id=doc["submission"]["report"],
            method=doc["submission"]["method"],
            content=doc["submission"]["content"],
            content_hash=doc["submission"]["contentHash"],
            seq=doc["submission"]["seq"],
        )
    return GroupState(
        problem=problem,
        members=members,
        work=work,
        group_solution=group_solution,
        nav=nav,
        released=frozenset(doc["released"]),
        forums=forums,
        messages=messages,
        ratings=ratings,
        submission=submission,
        frozen_at=doc["frozenAt"],
        seq=doc["seq"],
    )


def state_hash(state: GroupState) -> str:
    """Deterministic digest of the full state (for replay testing)."""
    canonical = json.dumps(
        state_to_json(state), sort_keys=True, separators=(",", ":")
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
