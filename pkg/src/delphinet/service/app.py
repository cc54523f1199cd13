"""The HTTP API.

Every route enforces authorization server-side by delegating to the
workflow engine's predicates and command handlers; the HTTP layer only
translates identities (session -> user, pseudonym -> user) and maps domain
errors onto status codes:

* 401 — missing/expired session
* 403 — role violations, closed Delphi gates, frozen problems
* 404 — unknown resources (groups, scenarios, pseudonyms, blobs)
* 409 — version conflicts, duplicate names, repeated submission
* 422 — validation failures (including impossible evidence)

Error bodies carry a machine-readable ``reason`` (the domain error code),
e.g. ``{"error": {"reason": "DELPHI_GATE", "gate": "viewer_not_shared"}}``.
"""

from __future__ import annotations

import base64
import binascii
import json
import time
from typing import Any, Callable

from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .. import errors, reporting
from .. import workflow as wf
from ..workflow import GROUP_REPORT_ID, HIDDEN
from .auth import UserRecord
from .config import ServiceConfig, load_config
from .exploration import (
    Exploration,
    detail_doc,
    evaluation_doc,
    summary_doc,
)
from .registry import ServiceRegistry, membership_from_doc, require_id
from . import schemas

_STATUS_BY_TYPE: dict[type, int] = {
    errors.RoleError: 403,
    errors.GateClosedError: 403,
    errors.FrozenProblemError: 403,
    errors.VersionMismatchError: 409,
    errors.NameCollisionError: 409,
    errors.AlreadySubmittedError: 409,
    errors.StaleExplanationError: 409,
    errors.UnknownEntityError: 404,
    errors.CorruptLogError: 500,
}


def status_for(exc: errors.DelphinetError) -> int:
    for cls in type(exc).__mro__:
        if cls in _STATUS_BY_TYPE:
            return _STATUS_BY_TYPE[cls]
    return 422


def error_body(exc: errors.DelphinetError) -> dict:
    body: dict[str, Any] = {"reason": exc.code, "message": exc.message}
    if isinstance(exc, errors.GateClosedError):
        body["gate"] = exc.reason
    elif exc.context:
        body["context"] = {
            key: value
            for key, value in exc.context.items()
            if isinstance(value, (str, int, float, bool, list, type(None)))
        }
    return {"error": body}


class Unauthenticated(Exception):
    pass


def create_app(
    config: ServiceConfig | None = None,
    *,
    registry: ServiceRegistry | None = None,
    clock: Callable[[], float] = time.time,
) -> FastAPI:
    if registry is None:
        registry = ServiceRegistry(config or load_config(), clock=clock)
    app = FastAPI(title="delphinet", docs_url=None, redoc_url=None)
    app.state.registry = registry
    reg = registry

    # -- error translation ----------------------------------------------------

    @app.exception_handler(errors.DelphinetError)
    async def _domain_error(request: Request, exc: errors.DelphinetError):
        return JSONResponse(status_code=status_for(exc), content=error_body(exc))

    @app.exception_handler(Unauthenticated)
    async def _auth_error(request: Request, exc: Unauthenticated):
        return JSONResponse(
            status_code=401,
            content={"error": {"reason": "UNAUTHENTICATED", "message": str(exc) or "login required"}},
            headers={"WWW-Authenticate": "Bearer"},
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={
                "error": {
                    "reason": "VALIDATION",
                    "message": "request body failed validation",
                    "context": {"detail": json.loads(json.dumps(exc.errors(), default=str))},
                }
            },
        )

    # -- identity helpers -------------------------------------------------------

    def current_user(request: Request) -> UserRecord:
        header = request.headers.get("authorization", "")
        scheme, _, token = header.partition(" ")
        if scheme.lower() != "bearer" or not token.strip():
            raise Unauthenticated("missing bearer token")
        username = reg.sessions.resolve(token.strip())
        if username is None:
            raise Unauthenticated("invalid or expired session")
        return reg.users.record(username)

    def admin_user(request: Request) -> UserRecord:
        user = current_user(request)
        if not user.is_admin:
            raise errors.RoleError("administrator access required")
        return user

    def member_context(request: Request, group_id: str) -> tuple[wf.GroupState, str]:
        user = current_user(request)
        state = reg.state(group_id)
        reg.require_member(state, user.username)
        return state, user.username

    def resolve_report_id(state: wf.GroupState, external: str) -> str:
        if external == GROUP_REPORT_ID:
            return GROUP_REPORT_ID
        return reg.user_for_pseudonym(state, external)

    def external_report_id(state: wf.GroupState, internal: str) -> str:
        if internal == GROUP_REPORT_ID:
            return GROUP_REPORT_ID
        return next(m.pseudonym for m in state.members if m.user == internal)

    def guard_pseudonym(pseudonym: str) -> None:
        if pseudonym.strip().lower() == GROUP_REPORT_ID:
            raise errors.OutOfRangeError(
                f'pseudonym {pseudonym!r} is reserved for the group report'
            )

    # -- health and sessions ------------------------------------------------------

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/api/login")
    def login(body: schemas.LoginRequest) -> dict:
        record = reg.users.authenticate(body.username, body.password)
        if record is None:
            raise Unauthenticated("unknown user or wrong password")
        session = reg.sessions.issue(record.username)
        return {
            "token": session.token,
            "user": record.username,
            "is_admin": record.is_admin,
            "expires_at": session.expires_at,
        }

    @app.post("/api/logout")
    def logout(request: Request) -> dict:
        header = request.headers.get("authorization", "")
        _, _, token = header.partition(" ")
        reg.sessions.revoke(token.strip())
        return {"ok": True}

    @app.get("/api/me")
    def me(request: Request) -> dict:
        user = current_user(request)
        return {"user": user.username, "is_admin": user.is_admin}

    # -- admin: users ------------------------------------------------------------

    @app.post("/api/admin/users", status_code=201)
    def create_user(request: Request, body: schemas.UserCreate) -> dict:
        admin_user(request)
        record = reg.users.create(body.username, body.password, is_admin=body.is_admin)
        return {"username": record.username, "is_admin": record.is_admin}

    @app.get("/api/admin/users")
    def list_users(request: Request) -> dict:
        admin_user(request)
        return {
            "users": [
                {"username": name, "is_admin": reg.users.record(name).is_admin}
                for name in reg.users.usernames()
            ]
        }

    @app.get("/api/admin/notifications")
    def list_notifications(request: Request) -> dict:
        admin_user(request)
        sent = getattr(reg.notifier, "sent", None)
        return {"notifications": sent() if callable(sent) else []}

    # -- problems ------------------------------------------------------------------

    @app.post("/api/problems", status_code=201)
    def create_problem(request: Request, body: schemas.ProblemCreate) -> dict:
        admin_user(request)
        return reg.create_problem(body.model_dump())

    @app.get("/api/problems")
    def list_problems(request: Request) -> dict:
        current_user(request)
        return {"problems": reg.list_problems()}

    @app.get("/api/problems/{problem_id}")
    def get_problem(request: Request, problem_id: str) -> dict:
        current_user(request)
        return reg.get_problem(problem_id)

    # -- groups ---------------------------------------------------------------------

    @app.post("/api/groups", status_code=201)
    def create_group(request: Request, body: schemas.GroupCreate) -> dict:
        admin_user(request)
        for member in body.members:
            if member.pseudonym:
                guard_pseudonym(member.pseudonym)
        state = reg.create_group(
            body.id, body.problem_id, [m.model_dump() for m in body.members]
        )
        return {
            "id": body.id,
            "problem_id": body.problem_id,
            "members": [
                {"pseudonym": m.pseudonym, "role": m.role.value} for m in state.members
            ],
        }

    @app.get("/api/groups")
    def list_groups(request: Request) -> dict:
        user = current_user(request)
        rows = []
        for group_id in reg.list_group_ids():
            state = reg.state(group_id)
            membership = reg.member_or_none(state, user.username)
            if membership is None and not user.is_admin:
                continue
            rows.append(
                {
                    "id": group_id,
                    "problem_id": state.problem.id,
                    "mode": state.mode.value,
                    "role": membership.role.value if membership else None,
                    "pseudonym": membership.pseudonym if membership else None,
                }
            )
        return {"groups": rows}

    @app.get("/api/groups/{group_id}")
    def group_summary(request: Request, group_id: str) -> dict:
        user = current_user(request)
        state = reg.state(group_id)
        membership = reg.member_or_none(state, user.username)
        if membership is None and not user.is_admin:
            raise errors.UnknownEntityError(
                f"user {user.username!r} is not a member of this group"
            )
        nav = state.nav.get(user.username, wf.Nav())
        problem = state.problem
        steps = {}
        for step in range(1, wf.STEP_COUNT + 1):
            own = state.work.get((user.username, step))
            group_step = state.group_solution.get(step)
            steps[str(step)] = {
                "own_status": own.status if own else "private",
                "own_version": own.version if own else 0,
                "shared_peers": [
                    next(m.pseudonym for m in state.members if m.user == owner)
                    for owner in sorted(
                        o
                        for (o, s), item in state.work.items()
                        if s == step and item.ever_shared and o != user.username
                    )
                ],
                "group_solution_published": bool(group_step and group_step.published),
                "released": step in state.released,
            }
        return {
            "id": group_id,
            "problem": {
                "id": problem.id,
                "title": problem.title,
                "statement": problem.statement,
                "questions": list(problem.questions),
                "delphi_mode": problem.delphi_mode.value,
                "starts_at": problem.starts_at,
                "ends_at": problem.ends_at,
            },
            "mode": state.mode.value,
            "you": (
                {
                    "user": user.username,
                    "role": membership.role.value,
                    "pseudonym": membership.pseudonym,
                }
                if membership
                else None
            ),
            "members": [
                {"pseudonym": m.pseudonym, "role": m.role.value} for m in state.members
            ],
            "nav": {"current": nav.current, "max_reached": nav.max_reached},
            "frozen_at": state.frozen_at,
            "submitted": state.submission is not None,
            "steps": steps,
        }

    @app.post("/api/groups/{group_id}/members", status_code=201)
    def add_member(request: Request, group_id: str, body: schemas.MemberAdd) -> dict:
        admin_user(request)
        if body.user not in reg.users:
            raise errors.UnknownEntityError(f"no user {body.user!r} to enrol")
        if body.pseudonym:
            guard_pseudonym(body.pseudonym)
        membership_from_doc(body.model_dump())  # validates the role name
        state, _ = reg.execute(
            group_id,
            wf.AddMember(user=body.user, role=body.role, pseudonym=body.pseudonym),
        )
        added = next(m for m in state.members if m.user == body.user)
        return {"pseudonym": added.pseudonym, "role": added.role.value}

    @app.post("/api/groups/{group_id}/admin/replace-facilitator")
    def replace_facilitator(
        request: Request, group_id: str, body: schemas.ReplaceFacilitatorRequest
    ) -> dict:
        admin_user(request)
        state, _ = reg.execute(
            group_id, wf.ReplaceFacilitator(new_facilitator=body.new_facilitator)
        )
        return {
            "facilitator_pseudonym": next(
                m.pseudonym for m in state.members if m.role is wf.Role.FACILITATOR
            )
        }

    @app.post("/api/groups/{group_id}/admin/freeze")
    def freeze_group(request: Request, group_id: str, body: schemas.FreezeRequest) -> dict:
        admin_user(request)
        timestamp = body.timestamp if body.timestamp is not None else clock()
        state, _ = reg.execute(group_id, wf.FreezeProblem(timestamp=timestamp))
        return {"frozen_at": state.frozen_at}

    # -- step work -----------------------------------------------------------------

    @app.get("/api/groups/{group_id}/steps/{step}/work")
    def get_work(
        request: Request,
        group_id: str,
        step: int,
        owner: str | None = Query(default=None),
    ) -> dict:
        state, user = member_context(request, group_id)
        owner_user = user if owner is None else reg.user_for_pseudonym(state, owner)
        return wf.view_work(state, user, owner_user, step)

    @app.put("/api/groups/{group_id}/steps/{step}/work")
    def put_work(
        request: Request, group_id: str, step: int, body: schemas.WorkPut
    ) -> dict:
        state, user = member_context(request, group_id)
        new_state, _ = reg.execute(
            group_id, wf.EditWork(user=user, step=step, content=body.content)
        )
        item = new_state.work[(user, step)]
        return {"step": step, "version": item.version, "status": item.status}

    @app.post("/api/groups/{group_id}/steps/{step}/share")
    def share_work(request: Request, group_id: str, step: int) -> dict:
        state, user = member_context(request, group_id)
        new_state, _ = reg.execute(group_id, wf.ShareWork(user=user, step=step))
        item = new_state.work[(user, step)]
        return {"step": step, "version": item.version, "status": item.status}

    @app.get("/api/groups/{group_id}/steps/{step}/peers")
    def step_peers(request: Request, group_id: str, step: int) -> dict:
        """Roster metadata for one step: who has shared (names only, no
        content — content access stays behind :func:`view_work`)."""
        state, user = member_context(request, group_id)
        if not 1 <= step <= wf.STEP_COUNT:
            raise errors.UnknownEntityError(f"step must be 1..{wf.STEP_COUNT}")
        peers = []
        for membership in state.members:
            if membership.user == user:
                continue
            item = state.work.get((membership.user, step))
            peers.append(
                {
                    "pseudonym": membership.pseudonym,
                    "role": membership.role.value,
                    "has_shared": bool(item and item.ever_shared),
                    "viewable": wf.can_view_work(state, user, membership.user, step),
                }
            )
        return {"step": step, "peers": peers}

    # -- group solution ---------------------------------------------------------------

    @app.get("/api/groups/{group_id}/steps/{step}/group-solution")
    def get_group_solution(request: Request, group_id: str, step: int) -> dict:
        state, user = member_context(request, group_id)
        return wf.view_group_solution(state, user, step)

    @app.put("/api/groups/{group_id}/steps/{step}/group-solution")
    def put_group_solution(
        request: Request, group_id: str, step: int, body: schemas.WorkPut
    ) -> dict:
        state, user = member_context(request, group_id)
        new_state, _ = reg.execute(
            group_id, wf.EditGroupSolution(user=user, step=step, content=body.content)
        )
        group_step = new_state.group_solution[step]
        return {"step": step, "version": group_step.version}

    @app.post("/api/groups/{group_id}/steps/{step}/group-solution/publish")
    def publish_group_solution(request: Request, group_id: str, step: int) -> dict:
        state, user = member_context(request, group_id)
        new_state, _ = reg.execute(
            group_id, wf.PublishGroupSolution(user=user, step=step)
        )
        group_step = new_state.group_solution[step]
        return {
            "step": step,
            "version": group_step.version,
            "published_versions": [p.version for p in group_step.published],
        }

    # -- navigation ----------------------------------------------------------------------

    @app.post("/api/groups/{group_id}/advance")
    def advance(request: Request, group_id: str, body: schemas.AdvanceRequest) -> dict:
        state, user = member_context(request, group_id)
        new_state, _ = reg.execute(group_id, wf.GoToStep(user=user, step=body.step))
        nav = new_state.nav[user]
        return {"current": nav.current, "max_reached": nav.max_reached}

    @app.post("/api/groups/{group_id}/steps/{step}/release")
    def release_step(request: Request, group_id: str, step: int) -> dict:
        state, user = member_context(request, group_id)
        new_state, _ = reg.execute(group_id, wf.ReleaseStep(user=user, step=step))
        return {"released": sorted(new_state.released)}

    # -- adoption ---------------------------------------------------------------------------

    @app.post("/api/groups/{group_id}/adopt")
    def adopt(request: Request, group_id: str, body: schemas.AdoptRequest) -> dict:
        state, user = member_context(request, group_id)
        source_user = reg.user_for_pseudonym(state, body.source)
        new_state, _ = reg.execute(
            group_id,
            wf.AdoptElements(
                user=user,
                source_owner=source_user,
                step=body.step,
                selection=tuple(body.selection),
                target=body.target,
            ),
        )
        if body.target == "group":
            version = new_state.group_solution[body.step].version
        else:
            version = new_state.work[(user, body.step)].version
        return {"step": body.step, "target": body.target, "version": version}

    # -- scenarios ------------------------------------------------------------------------------

    @app.get("/api/groups/{group_id}/scenarios")
    def list_scenarios(request: Request, group_id: str) -> dict:
        state, user = member_context(request, group_id)
        exploration = Exploration(state, user)
        return {
            "scenarios": exploration.list(),
            "network_version": exploration.work_version,
            "signature": exploration.signature,
        }

    @app.post("/api/groups/{group_id}/scenarios", status_code=201)
    def create_scenario(
        request: Request, group_id: str, body: schemas.ScenarioCreate
    ) -> dict:
        state, user = member_context(request, group_id)
        exploration = Exploration(state, user)
        command, doc = exploration.build_create_command(
            body.name, body.evidence, body.outputs, body.description
        )
        reg.execute(group_id, command)
        return {"scenario": doc}

    @app.post("/api/groups/{group_id}/scenarios/{scenario_id}/evaluate")
    def evaluate(request: Request, group_id: str, scenario_id: str) -> dict:
        state, user = member_context(request, group_id)
        exploration = Exploration(state, user)
        handle = reg.handle(group_id)
        scenario, result = exploration.evaluate(
            scenario_id, handle.cache, reg.config.max_table_cells
        )
        return evaluation_doc(exploration.net, scenario, result)

    @app.get("/api/groups/{group_id}/scenarios/{scenario_id}/explanation")
    def explanation(
        request: Request,
        group_id: str,
        scenario_id: str,
        level: str = Query(default="summary"),
    ) -> dict:
        state, user = member_context(request, group_id)
        if level not in ("summary", "detail"):
            raise errors.OutOfRangeError(
                f"level must be 'summary' or 'detail', got {level!r}"
            )
        exploration = Exploration(state, user)
        if level == "summary":
            handle = reg.handle(group_id)
            scenario, result = exploration.evaluate(
                scenario_id, handle.cache, reg.config.max_table_cells
            )
            return {
                "level": "summary",
                "scenario": {"id": scenario.id, "name": scenario.name},
                "summary": summary_doc(result.summary),
            }
        scenario, exp = exploration.explanation_detail(
            scenario_id, reg.config.max_table_cells
        )
        doc = detail_doc(exploration.net, exp)
        doc.update(
            {"level": "detail", "scenario": {"id": scenario.id, "name": scenario.name}}
        )
        return doc

    # -- forums --------------------------------------------------------------------------------------

    @app.get("/api/groups/{group_id}/steps/{step}/forum")
    def get_forum(request: Request, group_id: str, step: int) -> dict:
        state, user = member_context(request, group_id)
        return {"step": step, "posts": list(wf.view_forum(state, user, step))}

    @app.post("/api/groups/{group_id}/steps/{step}/forum", status_code=201)
    def post_forum(
        request: Request, group_id: str, step: int, body: schemas.ForumPostCreate
    ) -> dict:
        state, user = member_context(request, group_id)
        for blob_id in body.attachments:
            if not reg.blobs.exists(blob_id):
                raise errors.UnknownEntityError(f"no blob {blob_id!r} to attach")
        new_state, events = reg.execute(
            group_id,
            wf.PostForum(
                user=user,
                step=step,
                body=body.body,
                thread=body.thread,
                attachments=tuple(body.attachments),
            ),
        )
        post_id = next(e["post"] for e in events if e.get("kind") == "forum_posted")
        return {"id": post_id, "step": step}

    # -- blobs ------------------------------------------------------------------------------------------

    @app.post("/api/groups/{group_id}/blobs", status_code=201)
    def upload_blob(request: Request, group_id: str, body: schemas.BlobUpload) -> dict:
        member_context(request, group_id)
        try:
            data = base64.b64decode(body.content_base64, validate=True)
        except (binascii.Error, ValueError) as exc:
            raise errors.OutOfRangeError(
                "content_base64 is not valid base64"
            ) from exc
        blob_id = reg.blobs.put(data)
        return {"id": blob_id, "bytes": len(data)}

    @app.get("/api/blobs/{blob_id}")
    def get_blob(request: Request, blob_id: str) -> Response:
        current_user(request)
        data = reg.blobs.get(blob_id)
        return Response(content=data, media_type="application/octet-stream")

    # -- messages -----------------------------------------------------------------------------------------

    @app.get("/api/groups/{group_id}/messages")
    def get_messages(request: Request, group_id: str) -> dict:
        state, user = member_context(request, group_id)
        return {"messages": list(wf.view_messages(state, user))}

    @app.post("/api/groups/{group_id}/messages", status_code=201)
    def send_message(
        request: Request, group_id: str, body: schemas.MessageSend
    ) -> dict:
        state, user = member_context(request, group_id)
        recipients = tuple(
            reg.user_for_pseudonym(state, pseudonym) for pseudonym in body.recipients
        )
        new_state, events = reg.execute(
            group_id,
            wf.SendMessage(
                sender=user,
                recipients=recipients,
                body=body.body,
                email_nudge=body.email_nudge,
            ),
        )
        message_id = next(
            e["message"] for e in events if e.get("kind") == "message_sent"
        )
        return {"id": message_id}

    # -- final reports and ratings ------------------------------------------------------------------------

    @app.get("/api/groups/{group_id}/reports")
    def list_reports(request: Request, group_id: str) -> dict:
        state, user = member_context(request, group_id)
        rows = []
        for internal in wf.ratable_report_ids(state):
            summary = wf.rating_summary(state, user, internal)
            own = state.ratings.get((user, internal))
            rows.append(
                {
                    "id": external_report_id(state, internal),
                    "is_group": internal == GROUP_REPORT_ID,
                    "your_score": own,
                    "summary": (
                        "hidden"
                        if summary is HIDDEN
                        else {"average": summary[0], "count": summary[1]}
                    ),
                }
            )
        return {"reports": rows}

    @app.post("/api/groups/{group_id}/reports/{report_id}/rating")
    def rate_report(
        request: Request, group_id: str, report_id: str, body: schemas.RatingPost
    ) -> dict:
        state, user = member_context(request, group_id)
        internal = resolve_report_id(state, report_id)
        new_state, _ = reg.execute(
            group_id, wf.RateReport(user=user, report_id=internal, score=body.score)
        )
        summary = wf.rating_summary(new_state, user, internal)
        return {
            "id": report_id,
            "your_score": body.score,
            "summary": (
                "hidden"
                if summary is HIDDEN
                else {"average": summary[0], "count": summary[1]}
            ),
        }

    @app.get("/api/groups/{group_id}/reports/{report_id}/rating")
    def get_rating(request: Request, group_id: str, report_id: str) -> dict:
        state, user = member_context(request, group_id)
        internal = resolve_report_id(state, report_id)
        summary = wf.rating_summary(state, user, internal)
        return {
            "id": report_id,
            "your_score": state.ratings.get((user, internal)),
            "summary": (
                "hidden"
                if summary is HIDDEN
                else {"average": summary[0], "count": summary[1]}
            ),
        }

    @app.post("/api/groups/{group_id}/reports/autofill")
    def autofill_report(
        request: Request, group_id: str, body: schemas.AutofillRequest
    ) -> dict:
        """Fill the machine-generated blocks of a report draft from the
        detail explanation of one of the caller's scenarios.  Stateless:
        the caller persists the result via the step-6 work route."""
        state, user = member_context(request, group_id)
        exploration = Exploration(state, user)
        scenario, exp = exploration.explanation_detail(
            body.scenario_id, reg.config.max_table_cells
        )
        doc = detail_doc(exploration.net, exp)
        filled = reporting.autofill_from_explanation(
            body.report,
            exp,
            detail_network_hash=body.network_hash or doc["network_hash"],
            current_network_hash=doc["network_hash"],
        )
        return {"report": filled, "network_hash": doc["network_hash"]}

    # -- submission and export ------------------------------------------------------------------------------

    def _step5_doc_for_owner(state: wf.GroupState, internal: str) -> dict:
        if internal == GROUP_REPORT_ID:
            group_step = state.group_solution.get(5)
            if group_step is None:
                return {}
            encoded = (
                group_step.published[-1].content
                if group_step.published
                else group_step.content
            )
        else:
            item = state.work.get((internal, 5))
            if item is None:
                return {}
            encoded = item.shared[-1].content if item.shared else item.content
        return json.loads(encoded)

    def _write_export(group_id: str, state: wf.GroupState) -> dict:
        submission = state.submission
        assert submission is not None
        payload = json.loads(submission.content)
        step5 = _step5_doc_for_owner(state, submission.report_id)
        return reporting.build_export_bundle(
            reg.export_dir(group_id),
            payload.get("report") or {},
            step5.get("network"),
            step5.get("scenarios") or [],
        )

    @app.post("/api/groups/{group_id}/submit", status_code=201)
    def submit(request: Request, group_id: str, body: schemas.SubmitRequest) -> dict:
        state, user = member_context(request, group_id)
        internal = ""
        if body.report_id:
            internal = resolve_report_id(state, body.report_id)
        new_state, _ = reg.execute(
            group_id,
            wf.SubmitFinal(
                user=user,
                method=body.method,
                report_id=internal,
                timestamp=clock(),
            ),
        )
        submission = new_state.submission
        assert submission is not None
        manifest = _write_export(group_id, new_state)
        return {
            "report_id": external_report_id(new_state, submission.report_id),
            "method": submission.method,
            "content_hash": submission.content_hash,
            "files": sorted(manifest["files"]),
        }

    @app.get("/api/groups/{group_id}/submission")
    def submission_info(request: Request, group_id: str) -> dict:
        user = current_user(request)
        state = reg.state(group_id)
        if reg.member_or_none(state, user.username) is None and not user.is_admin:
            raise errors.UnknownEntityError(
                f"user {user.username!r} is not a member of this group"
            )
        if state.submission is None:
            return {"submitted": False}
        manifest_path = reg.export_dir(group_id) / "manifest.json"
        files = []
        if manifest_path.exists():
            files = sorted(json.loads(manifest_path.read_text())["files"])
        return {
            "submitted": True,
            "report_id": external_report_id(state, state.submission.report_id),
            "method": state.submission.method,
            "content_hash": state.submission.content_hash,
            "files": files,
        }

    @app.get("/api/groups/{group_id}/export/{filename}")
    def export_file(request: Request, group_id: str, filename: str) -> Response:
        user = current_user(request)
        state = reg.state(group_id)
        if reg.member_or_none(state, user.username) is None and not user.is_admin:
            raise errors.UnknownEntityError(
                f"user {user.username!r} is not a member of this group"
            )
        path = reg.export_dir(group_id) / filename
        if "/" in filename or "\\" in filename or not path.is_file():
            raise errors.UnknownEntityError(f"no export file {filename!r}")
        media = "text/html" if filename.endswith(".html") else "application/json"
        return Response(content=path.read_bytes(), media_type=media)

    return app
