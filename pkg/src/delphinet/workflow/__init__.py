"""Six-step, role-based, share-gated group workflow with Delphi variants."""

from __future__ import annotations

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
    command_from_json,
    command_to_json,
)
from .state import (
    GROUP_REPORT_ID,
    HIDDEN,
    REASON_CLASSIC_MODE,
    REASON_NOT_PUBLISHED,
    REASON_NOT_REACHED,
    REASON_NOT_RELEASED,
    REASON_NOT_SHARED,
    REASON_OWNER_NOT_SHARED,
    REASON_VIEWER_NOT_SHARED,
    STEP_COUNT,
    SUBMISSION_GRACE_SECONDS,
    DelphiMode,
    GroupState,
    Membership,
    Nav,
    Problem,
    Role,
    WorkItem,
    apply,
    can_view_group_solution,
    can_view_forum,
    can_view_work,
    new_group,
    ratable_report_ids,
    rating_summary,
    select_highest_rated,
    shared_report_owners,
    state_from_json,
    state_hash,
    state_to_json,
    view_forum,
    view_group_solution,
    view_messages,
    view_work,
)

__all__ = [
    "AddMember",
    "AdoptElements",
    "Command",
    "DelphiMode",
    "EditGroupSolution",
    "EditWork",
    "FreezeProblem",
    "GROUP_REPORT_ID",
    "GoToStep",
    "GroupState",
    "HIDDEN",
    "Membership",
    "Nav",
    "PostForum",
    "Problem",
    "PublishGroupSolution",
    "REASON_CLASSIC_MODE",
    "REASON_NOT_PUBLISHED",
    "REASON_NOT_REACHED",
    "REASON_NOT_RELEASED",
    "REASON_NOT_SHARED",
    "REASON_OWNER_NOT_SHARED",
    "REASON_VIEWER_NOT_SHARED",
    "RateReport",
    "ReleaseStep",
    "ReplaceFacilitator",
    "Role",
    "STEP_COUNT",
    "SUBMISSION_GRACE_SECONDS",
    "SendMessage",
    "ShareWork",
    "SubmitFinal",
    "WorkItem",
    "apply",
    "can_view_forum",
    "can_view_group_solution",
    "can_view_work",
    "command_from_json",
    "command_to_json",
    "new_group",
    "ratable_report_ids",
    "rating_summary",
    "select_highest_rated",
    "shared_report_owners",
    "state_from_json",
    "state_hash",
    "state_to_json",
    "view_forum",
    "view_group_solution",
    "view_messages",
    "view_work",
]
