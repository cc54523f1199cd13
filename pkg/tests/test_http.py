"""HTTP API integration tests.

Covers the authorization matrix (role x gate state per route family),
error-envelope contracts, the full six-step workflow over the wire, and
durability across process restarts (same data directory, fresh app).
"""

from __future__ import annotations

import base64
import json
import warnings

import pytest

warnings.filterwarnings("ignore", category=DeprecationWarning)

from fastapi.testclient import TestClient

import delphinet.workflow as wf
from delphinet import reporting
from delphinet.bn import jsonio
from delphinet.service import ServiceConfig, ServiceRegistry, create_app

from support import collider_net

PW = "pw12345"


class FakeClock:
    def __init__(self, now: float = 1_000_000.0) -> None:
        self.now = now

    def __call__(self) -> float:
        return self.now


def network_doc() -> dict:
    return jsonio.network_to_json(collider_net())


def step_content(step: int) -> dict:
    """A small, valid, shareable payload for each workflow step."""
    if step == 1:
        return {"hypotheses": [{"text": "H1"}], "evidence": [{"text": "E1"}], "notes": ""}
    if step == 2:
        return {"variables": [{"name": "A"}, {"name": "B"}, {"name": "C"}]}
    if step in (3, 4):
        return {"network": network_doc()}
    if step == 5:
        return {"network": network_doc(), "scenarios": []}
    report = reporting.instantiate_template(questions=("Q?",), title="Findings")
    report["sections"][0]["body"] = "What we concluded."
    return {"report": report}


class Service:
    """One service instance over a data directory, plus login helpers."""

    def __init__(self, data_dir, clock=None, config=None):
        self.clock = clock or FakeClock()
        self.config = config or ServiceConfig(
            data_dir=str(data_dir), bootstrap_password="admin-pw", session_ttl_seconds=3600
        )
        self.registry = ServiceRegistry(self.config, clock=self.clock)
        self.app = create_app(registry=self.registry, clock=self.clock)
        self.client = TestClient(self.app)
        self._headers: dict[str, dict] = {}

    def login(self, username: str, password: str = PW) -> dict:
        response = self.client.post(
            "/api/login", json={"username": username, "password": password}
        )
        assert response.status_code == 200, response.text
        return {"Authorization": f"Bearer {response.json()['token']}"}

    def headers(self, username: str) -> dict:
        if username not in self._headers:
            password = "admin-pw" if username == "admin" else PW
            self._headers[username] = self.login(username, password)
        return self._headers[username]

    # -- request helpers (raise on unexpected status in callers) -----------

    def get(self, user, path, **kw):
        return self.client.get(path, headers=self.headers(user), **kw)

    def post(self, user, path, body=None, **kw):
        return self.client.post(path, json=body, headers=self.headers(user), **kw)

    def put(self, user, path, body=None, **kw):
        return self.client.put(path, json=body, headers=self.headers(user), **kw)

    # -- scenario-building helpers -----------------------------------------

    def seed_users(self, *names):
        for name in names:
            response = self.post(
                "admin", "/api/admin/users", {"username": name, "password": PW}
            )
            assert response.status_code == 201, response.text

    def seed_problem(self, problem_id="p1", mode="realtime"):
        response = self.post(
            "admin",
            "/api/problems",
            {
                "id": problem_id,
                "title": "Inquiry",
                "statement": "What happened?",
                "questions": ["Q?"],
                "delphi_mode": mode,
            },
        )
        assert response.status_code == 201, response.text

    def seed_group(self, group_id="g1", problem_id="p1", members=None):
        members = members or [
            {"user": "fac", "role": "facilitator"},
            {"user": "alice", "role": "analyst"},
            {"user": "bob", "role": "analyst"},
            {"user": "olive", "role": "observer"},
        ]
        response = self.post(
            "admin",
            "/api/groups",
            {"id": group_id, "problem_id": problem_id, "members": members},
        )
        assert response.status_code == 201, response.text

    def share_step(self, user, step, group_id="g1"):
        put = self.put(
            f"{user}",
            f"/api/groups/{group_id}/steps/{step}/work",
            {"content": step_content(step)},
        )
        assert put.status_code == 200, put.text
        share = self.post(user, f"/api/groups/{group_id}/steps/{step}/share")
        assert share.status_code == 200, share.text

    def drive_to_step(self, user, target, group_id="g1"):
        for step in range(1, target):
            self.share_step(user, step, group_id)
            response = self.post(
                user, f"/api/groups/{group_id}/advance", {"step": step + 1}
            )
            assert response.status_code == 200, response.text


@pytest.fixture
def svc(tmp_path):
    service = Service(tmp_path / "data")
    service.seed_users("fac", "alice", "bob", "carol", "olive")
    service.seed_problem()
    service.seed_group()
    return service


def reason_of(response) -> str:
    return response.json()["error"]["reason"]


def gate_of(response) -> str:
    return response.json()["error"]["gate"]


# ---------------------------------------------------------------------------
# Sessions and authentication


class TestAuthentication:
    def test_health_is_public(self, svc):
        assert svc.client.get("/api/health").json() == {"status": "ok"}

    def test_missing_token_is_401(self, svc):
        for path in ("/api/me", "/api/problems", "/api/groups/g1", "/api/groups"):
            response = svc.client.get(path)
            assert response.status_code == 401
            assert reason_of(response) == "UNAUTHENTICATED"

    def test_garbage_token_is_401(self, svc):
        response = svc.client.get(
            "/api/me", headers={"Authorization": "Bearer deadbeef"}
        )
        assert response.status_code == 401

    def test_wrong_scheme_is_401(self, svc):
        token = svc.headers("alice")["Authorization"].split()[1]
        response = svc.client.get("/api/me", headers={"Authorization": f"Basic {token}"})
        assert response.status_code == 401

    def test_bad_password_is_401(self, svc):
        response = svc.client.post(
            "/api/login", json={"username": "alice", "password": "nope"}
        )
        assert response.status_code == 401

    def test_expired_session_is_401(self, svc):
        headers = svc.login("alice")
        svc.clock.now += svc.config.session_ttl_seconds + 1
        response = svc.client.get("/api/me", headers=headers)
        assert response.status_code == 401

    def test_logout_revokes(self, svc):
        headers = svc.login("alice")
        assert svc.client.get("/api/me", headers=headers).status_code == 200
        svc.client.post("/api/logout", headers=headers)
        assert svc.client.get("/api/me", headers=headers).status_code == 401

    def test_me_reports_identity(self, svc):
        assert svc.get("alice", "/api/me").json() == {
            "user": "alice",
            "is_admin": False,
        }


# ---------------------------------------------------------------------------
# Admin routes


class TestAdmin:
    def test_non_admin_cannot_reach_admin_routes(self, svc):
        attempts = [
            svc.post("alice", "/api/admin/users", {"username": "x", "password": PW}),
            svc.get("alice", "/api/admin/users"),
            svc.get("alice", "/api/admin/notifications"),
            svc.post("alice", "/api/problems", {"id": "px", "title": "", "statement": ""}),
            svc.post("alice", "/api/groups", {"id": "gx", "problem_id": "p1", "members": []}),
            svc.post("alice", "/api/groups/g1/members", {"user": "carol", "role": "analyst"}),
            svc.post("alice", "/api/groups/g1/admin/replace-facilitator", {"new_facilitator": "alice"}),
            svc.post("alice", "/api/groups/g1/admin/freeze", {}),
        ]
        for response in attempts:
            assert response.status_code == 403, response.text
            assert reason_of(response) == "ROLE"

    def test_duplicate_user_is_409(self, svc):
        response = svc.post(
            "admin", "/api/admin/users", {"username": "alice", "password": PW}
        )
        assert response.status_code == 409
        assert reason_of(response) == "NAME_COLLISION"

    def test_group_with_two_facilitators_is_422(self, svc):
        response = svc.post(
            "admin",
            "/api/groups",
            {
                "id": "g2",
                "problem_id": "p1",
                "members": [
                    {"user": "fac", "role": "facilitator", "pseudonym": "F1"},
                    {"user": "alice", "role": "facilitator", "pseudonym": "F2"},
                ],
            },
        )
        assert response.status_code == 422
        assert reason_of(response) == "FACILITATOR_SINGULARITY"

    def test_group_with_unknown_problem_is_404(self, svc):
        response = svc.post(
            "admin",
            "/api/groups",
            {"id": "g2", "problem_id": "ghost", "members": []},
        )
        assert response.status_code == 404

    def test_group_with_unknown_user_is_404(self, svc):
        response = svc.post(
            "admin",
            "/api/groups",
            {
                "id": "g2",
                "problem_id": "p1",
                "members": [{"user": "stranger", "role": "facilitator"}],
            },
        )
        assert response.status_code == 404

    def test_bad_role_is_422(self, svc):
        response = svc.post(
            "admin",
            "/api/groups",
            {
                "id": "g2",
                "problem_id": "p1",
                "members": [{"user": "fac", "role": "wizard"}],
            },
        )
        assert response.status_code == 422

    def test_reserved_pseudonym_rejected(self, svc):
        response = svc.post(
            "admin",
            "/api/groups",
            {
                "id": "g2",
                "problem_id": "p1",
                "members": [{"user": "fac", "role": "facilitator", "pseudonym": "group"}],
            },
        )
        assert response.status_code == 422

    def test_add_member_and_replace_facilitator(self, svc):
        response = svc.post(
            "admin", "/api/groups/g1/members", {"user": "carol", "role": "analyst"}
        )
        assert response.status_code == 201
        assert response.json()["pseudonym"] == "Panelist 3"

        response = svc.post(
            "admin",
            "/api/groups/g1/admin/replace-facilitator",
            {"new_facilitator": "carol"},
        )
        assert response.status_code == 200
        assert response.json()["facilitator_pseudonym"] == "Panelist 3"

    def test_malformed_body_is_422_validation(self, svc):
        response = svc.post("admin", "/api/admin/users", {"username": "x"})
        assert response.status_code == 422
        assert reason_of(response) == "VALIDATION"

    def test_unknown_body_field_rejected(self, svc):
        response = svc.post(
            "admin",
            "/api/admin/users",
            {"username": "x", "password": PW, "shoe_size": 44},
        )
        assert response.status_code == 422


# ---------------------------------------------------------------------------
# Work routes and the Delphi gate over HTTP


class TestWorkGates:
    def test_peer_view_requires_own_share(self, svc):
        svc.share_step("alice", 1)
        response = svc.get(
            "bob", "/api/groups/g1/steps/1/work", params={"owner": "Panelist 1"}
        )
        assert response.status_code == 403
        assert reason_of(response) == "DELPHI_GATE"
        assert gate_of(response) == "viewer_not_shared"

        svc.share_step("bob", 1)
        response = svc.get(
            "bob", "/api/groups/g1/steps/1/work", params={"owner": "Panelist 1"}
        )
        assert response.status_code == 200
        assert response.json()["content"] == step_content(1)
        assert response.json()["owner_pseudonym"] == "Panelist 1"

    def test_gate_error_does_not_leak_peer_status(self, svc):
        # Same closed-gate answer whether or not the peer shared.
        response = svc.get(
            "bob", "/api/groups/g1/steps/1/work", params={"owner": "Panelist 1"}
        )
        before = (response.status_code, response.json()["error"]["gate"])
        svc.share_step("alice", 1)
        response = svc.get(
            "bob", "/api/groups/g1/steps/1/work", params={"owner": "Panelist 1"}
        )
        after = (response.status_code, response.json()["error"]["gate"])
        assert before == after == (403, "viewer_not_shared")

    def test_shared_snapshot_immutable_over_http(self, svc):
        svc.share_step("alice", 1)
        svc.share_step("bob", 1)
        edited = {"hypotheses": [{"text": "changed"}], "evidence": [], "notes": ""}
        svc.put("alice", "/api/groups/g1/steps/1/work", {"content": edited})

        peer = svc.get(
            "bob", "/api/groups/g1/steps/1/work", params={"owner": "Panelist 1"}
        ).json()
        own = svc.get("alice", "/api/groups/g1/steps/1/work").json()
        assert peer["content"] == step_content(1)  # frozen shared version
        assert own["content"] == edited
        assert own["status"] == "private"

    def test_owner_not_shared_gate(self, svc):
        svc.share_step("bob", 1)
        response = svc.get(
            "bob", "/api/groups/g1/steps/1/work", params={"owner": "Panelist 1"}
        )
        assert response.status_code == 403
        assert gate_of(response) == "owner_not_shared"

    def test_facilitator_and_observer_see_shared_only(self, svc):
        svc.share_step("alice", 1)
        for viewer in ("fac", "olive"):
            ok = svc.get(
                viewer, "/api/groups/g1/steps/1/work", params={"owner": "Panelist 1"}
            )
            assert ok.status_code == 200
            blocked = svc.get(
                viewer, "/api/groups/g1/steps/1/work", params={"owner": "Panelist 2"}
            )
            assert blocked.status_code == 403
            assert gate_of(blocked) == "owner_not_shared"

    def test_unknown_pseudonym_404(self, svc):
        response = svc.get(
            "alice", "/api/groups/g1/steps/1/work", params={"owner": "Nobody"}
        )
        assert response.status_code == 404

    def test_step_out_of_range_404(self, svc):
        for path in ("/api/groups/g1/steps/7/work", "/api/groups/g1/steps/0/peers"):
            response = svc.get("alice", path)
            assert response.status_code == 404

    def test_non_member_gets_404(self, svc):
        response = svc.get("carol", "/api/groups/g1/steps/1/work")
        assert response.status_code == 404
        assert reason_of(response) == "UNKNOWN_ENTITY"

    def test_observer_and_facilitator_cannot_edit_work(self, svc):
        for user in ("fac", "olive"):
            response = svc.put(
                user, "/api/groups/g1/steps/1/work", {"content": step_content(1)}
            )
            assert response.status_code == 403
            assert reason_of(response) == "ROLE"

    def test_share_empty_work_is_422(self, svc):
        response = svc.post("alice", "/api/groups/g1/steps/1/share")
        assert response.status_code == 422
        assert reason_of(response) == "EMPTY_CONTENT"

    def test_advance_requires_share_in_realtime(self, svc):
        response = svc.post("alice", "/api/groups/g1/advance", {"step": 2})
        assert response.status_code == 403
        assert gate_of(response) == "not_shared"
        svc.share_step("alice", 1)
        response = svc.post("alice", "/api/groups/g1/advance", {"step": 2})
        assert response.status_code == 200
        assert response.json() == {"current": 2, "max_reached": 2}

    def test_edit_beyond_frontier_gated(self, svc):
        response = svc.put(
            "alice", "/api/groups/g1/steps/3/work", {"content": step_content(3)}
        )
        assert response.status_code == 403
        assert gate_of(response) == "not_reached"

    def test_peers_listing_metadata(self, svc):
        svc.share_step("alice", 1)
        peers = svc.get("bob", "/api/groups/g1/steps/1/peers").json()["peers"]
        by_name = {p["pseudonym"]: p for p in peers}
        assert by_name["Panelist 1"]["has_shared"] is True
        assert by_name["Panelist 1"]["viewable"] is False  # bob hasn't shared
        assert by_name["Facilitator"]["has_shared"] is False
        svc.share_step("bob", 1)
        peers = svc.get("bob", "/api/groups/g1/steps/1/peers").json()["peers"]
        assert {p["pseudonym"]: p["viewable"] for p in peers}["Panelist 1"] is True


class TestClassicMode:
    @pytest.fixture
    def classic(self, tmp_path):
        service = Service(tmp_path / "data")
        service.seed_users("fac", "alice", "bob")
        service.seed_problem("pc", mode="classic")
        service.seed_group(
            "gc",
            "pc",
            [
                {"user": "fac", "role": "facilitator"},
                {"user": "alice", "role": "analyst"},
                {"user": "bob", "role": "analyst"},
            ],
        )
        return service

    def test_peer_work_never_visible(self, classic):
        classic.share_step("alice", 1, "gc")
        classic.share_step("bob", 1, "gc")
        response = classic.get(
            "bob", "/api/groups/gc/steps/1/work", params={"owner": "Panelist 1"}
        )
        assert response.status_code == 403
        assert gate_of(response) == "classic_mode"

    def test_forum_closed_to_analysts(self, classic):
        classic.share_step("alice", 1, "gc")
        response = classic.get("alice", "/api/groups/gc/steps/1/forum")
        assert response.status_code == 403
        assert gate_of(response) == "classic_mode"
        assert classic.get("fac", "/api/groups/gc/steps/1/forum").status_code == 200

    def test_advance_requires_release(self, classic):
        classic.share_step("alice", 1, "gc")
        response = classic.post("alice", "/api/groups/gc/advance", {"step": 2})
        assert response.status_code == 403
        assert gate_of(response) == "not_released"

        release = classic.post("fac", "/api/groups/gc/steps/2/release")
        assert release.status_code == 200
        assert release.json()["released"] == [2]
        response = classic.post("alice", "/api/groups/gc/advance", {"step": 2})
        assert response.status_code == 200

    def test_release_is_facilitator_only(self, classic):
        response = classic.post("alice", "/api/groups/gc/steps/2/release")
        assert response.status_code == 403
        assert reason_of(response) == "ROLE"


class TestGroupSolution:
    def test_lifecycle_and_gates(self, svc):
        content = {"hypotheses": [{"text": "agreed"}], "evidence": [], "notes": ""}
        response = svc.put(
            "alice", "/api/groups/g1/steps/1/group-solution", {"content": content}
        )
        assert response.status_code == 403 and reason_of(response) == "ROLE"

        assert (
            svc.put(
                "fac", "/api/groups/g1/steps/1/group-solution", {"content": content}
            ).status_code
            == 200
        )

        # analyst blocked before sharing; observer blocked before publishing
        response = svc.get("alice", "/api/groups/g1/steps/1/group-solution")
        assert response.status_code == 403 and gate_of(response) == "viewer_not_shared"
        response = svc.get("olive", "/api/groups/g1/steps/1/group-solution")
        assert response.status_code == 403 and gate_of(response) == "not_published"

        svc.share_step("alice", 1)
        response = svc.get("alice", "/api/groups/g1/steps/1/group-solution")
        assert response.status_code == 403 and gate_of(response) == "not_published"

        publish = svc.post("fac", "/api/groups/g1/steps/1/group-solution/publish")
        assert publish.status_code == 200
        assert publish.json()["published_versions"] == [1]

        for viewer in ("alice", "olive", "fac"):
            response = svc.get(viewer, "/api/groups/g1/steps/1/group-solution")
            assert response.status_code == 200
            assert response.json()["content"] == content

    def test_publish_empty_draft_is_422(self, svc):
        response = svc.post("fac", "/api/groups/g1/steps/1/group-solution/publish")
        assert response.status_code == 422


class TestAdoption:
    def reach_step2(self, svc, *users):
        for user in users:
            svc.share_step(user, 1)
            assert (
                svc.post(user, "/api/groups/g1/advance", {"step": 2}).status_code
                == 200
            )

    def test_adopt_respects_gate_then_merges(self, svc):
        self.reach_step2(svc, "alice", "bob")
        svc.share_step("alice", 2)

        body = {"source": "Panelist 1", "step": 2, "selection": ["*"], "target": "own"}
        blocked = svc.post("bob", "/api/groups/g1/adopt", body)
        assert blocked.status_code == 403
        assert gate_of(blocked) == "viewer_not_shared"

        svc.share_step("bob", 2)
        adopted = svc.post("bob", "/api/groups/g1/adopt", body)
        assert adopted.status_code == 200
        assert adopted.json() == {"step": 2, "target": "own", "version": 2}

        work = svc.get("bob", "/api/groups/g1/steps/2/work").json()["content"]
        assert work["variables"] == step_content(2)["variables"]
        assert work["adopted_from"] == "Panelist 1 v1"

    def test_adopt_selection_required(self, svc):
        self.reach_step2(svc, "alice", "bob")
        svc.share_step("alice", 2)
        svc.share_step("bob", 2)
        response = svc.post(
            "bob",
            "/api/groups/g1/adopt",
            {"source": "Panelist 1", "step": 2, "selection": [], "target": "own"},
        )
        assert response.status_code == 422
        assert reason_of(response) == "INCOMPATIBLE_SELECTION"

    def test_analyst_cannot_adopt_into_group_solution(self, svc):
        self.reach_step2(svc, "alice", "bob")
        svc.share_step("alice", 2)
        svc.share_step("bob", 2)
        response = svc.post(
            "bob",
            "/api/groups/g1/adopt",
            {"source": "Panelist 1", "step": 2, "selection": ["*"], "target": "group"},
        )
        assert response.status_code == 403
        assert reason_of(response) == "ROLE"

    def test_facilitator_adopts_into_group_solution(self, svc):
        self.reach_step2(svc, "alice")
        svc.share_step("alice", 2)
        response = svc.post(
            "fac",
            "/api/groups/g1/adopt",
            {"source": "Panelist 1", "step": 2, "selection": ["*"], "target": "group"},
        )
        assert response.status_code == 200
        assert response.json()["target"] == "group"
        draft = svc.get("fac", "/api/groups/g1/steps/2/group-solution").json()
        assert draft["content"]["variables"] == step_content(2)["variables"]


# ---------------------------------------------------------------------------
# Forums, blobs, messages


class TestForums:
    def test_post_requires_share_and_renders_pseudonyms(self, svc):
        response = svc.post(
            "alice", "/api/groups/g1/steps/1/forum", {"body": "hello"}
        )
        assert response.status_code == 403
        assert gate_of(response) == "viewer_not_shared"

        svc.share_step("alice", 1)
        created = svc.post("alice", "/api/groups/g1/steps/1/forum", {"body": "hello"})
        assert created.status_code == 201

        posts = svc.get("fac", "/api/groups/g1/steps/1/forum").json()["posts"]
        assert posts[0]["author_pseudonym"] == "Panelist 1"
        assert "alice" not in json.dumps(posts)

    def test_observer_reads_but_cannot_post(self, svc):
        svc.share_step("alice", 1)
        svc.post("alice", "/api/groups/g1/steps/1/forum", {"body": "hello"})
        assert svc.get("olive", "/api/groups/g1/steps/1/forum").status_code == 200
        response = svc.post("olive", "/api/groups/g1/steps/1/forum", {"body": "hi"})
        assert response.status_code == 403 and reason_of(response) == "ROLE"

    def test_attachment_round_trip(self, svc):
        svc.share_step("alice", 1)
        data = base64.b64encode(b"exhibit A").decode()
        upload = svc.post(
            "alice", "/api/groups/g1/blobs", {"content_base64": data}
        )
        assert upload.status_code == 201
        blob_id = upload.json()["id"]

        created = svc.post(
            "alice",
            "/api/groups/g1/steps/1/forum",
            {"body": "see attachment", "attachments": [blob_id]},
        )
        assert created.status_code == 201
        posts = svc.get("fac", "/api/groups/g1/steps/1/forum").json()["posts"]
        assert posts[-1]["attachments"] == [blob_id]

        fetched = svc.get("fac", f"/api/blobs/{blob_id}")
        assert fetched.status_code == 200
        assert fetched.content == b"exhibit A"

    def test_unknown_attachment_404(self, svc):
        svc.share_step("alice", 1)
        response = svc.post(
            "alice",
            "/api/groups/g1/steps/1/forum",
            {"body": "x", "attachments": ["ab" * 32]},
        )
        assert response.status_code == 404

    def test_bad_base64_is_422(self, svc):
        response = svc.post(
            "alice", "/api/groups/g1/blobs", {"content_base64": "!!not-base64!!"}
        )
        assert response.status_code == 422


class TestMessages:
    def test_analyst_may_only_message_facilitator(self, svc):
        response = svc.post(
            "alice",
            "/api/groups/g1/messages",
            {"recipients": ["Panelist 2"], "body": "psst"},
        )
        assert response.status_code == 403
        assert reason_of(response) == "ROLE"

        ok = svc.post(
            "alice",
            "/api/groups/g1/messages",
            {"recipients": ["Facilitator"], "body": "question"},
        )
        assert ok.status_code == 201

    def test_fanout_hidden_from_recipients(self, svc):
        svc.post(
            "fac",
            "/api/groups/g1/messages",
            {"recipients": ["Panelist 1", "Panelist 2"], "body": "everyone"},
        )
        alice_view = svc.get("alice", "/api/groups/g1/messages").json()["messages"]
        assert alice_view[0]["to_pseudonyms"] == ["Panelist 1"]
        fac_view = svc.get("fac", "/api/groups/g1/messages").json()["messages"]
        assert fac_view[0]["to_pseudonyms"] == ["Panelist 1", "Panelist 2"]
        olive_view = svc.get("olive", "/api/groups/g1/messages").json()["messages"]
        assert olive_view == []

    def test_email_nudge_reaches_notification_log(self, svc):
        svc.post(
            "fac",
            "/api/groups/g1/messages",
            {"recipients": ["Panelist 1"], "body": "deadline!", "email_nudge": True},
        )
        notes = svc.get("admin", "/api/admin/notifications").json()["notifications"]
        assert len(notes) == 1
        assert notes[0]["user"] == "alice"
        assert notes[0]["reason"] == "direct_message"


# ---------------------------------------------------------------------------
# Scenarios over HTTP


class TestScenarios:
    def setup_explorer(self, svc, user="alice"):
        svc.drive_to_step(user, 5)
        response = svc.put(
            user,
            "/api/groups/g1/steps/5/work",
            {"content": {"network": network_doc(), "scenarios": []}},
        )
        assert response.status_code == 200

    def test_create_list_evaluate(self, svc):
        self.setup_explorer(svc)
        created = svc.post(
            "alice",
            "/api/groups/g1/scenarios",
            {"name": "C observed", "evidence": {"c": "True"}, "outputs": ["a", "b"]},
        )
        assert created.status_code == 201
        sid = created.json()["scenario"]["id"]
        assert sid == "s1"

        listing = svc.get("alice", "/api/groups/g1/scenarios").json()
        assert [s["id"] for s in listing["scenarios"]] == ["s0", "s1"]
        assert listing["scenarios"][0]["is_base"]

        result = svc.post("alice", f"/api/groups/g1/scenarios/{sid}/evaluate")
        assert result.status_code == 200
        body = result.json()
        assert {p["variable"] for p in body["posteriors"]} == {"a", "b"}
        for posterior in body["posteriors"]:
            assert abs(sum(posterior["distribution"].values()) - 1.0) < 1e-9
        assert body["summary"]["text"]
        assert body["from_cache"] is False
        again = svc.post("alice", f"/api/groups/g1/scenarios/{sid}/evaluate")
        assert again.json()["from_cache"] is True

    def test_duplicate_name_409(self, svc):
        self.setup_explorer(svc)
        body = {"name": "Twice", "evidence": {}}
        assert svc.post("alice", "/api/groups/g1/scenarios", body).status_code == 201
        response = svc.post("alice", "/api/groups/g1/scenarios", body)
        assert response.status_code == 409
        assert reason_of(response) == "NAME_COLLISION"

    def test_unknown_scenario_404(self, svc):
        self.setup_explorer(svc)
        assert (
            svc.post("alice", "/api/groups/g1/scenarios/s9/evaluate").status_code
            == 404
        )

    def test_unknown_evidence_422(self, svc):
        self.setup_explorer(svc)
        response = svc.post(
            "alice",
            "/api/groups/g1/scenarios",
            {"name": "Bad", "evidence": {"zz": "True"}},
        )
        assert response.status_code == 422
        assert reason_of(response) == "UNKNOWN_VARIABLE"

    def test_impossible_evidence_422(self, svc):
        svc.drive_to_step("alice", 5)
        doc = network_doc()
        for cpt in doc["cpts"]:
            if cpt["child"] == "a":
                cpt["rows"][0]["cells"] = {"True": 0.0, "False": 1.0}
        response = svc.put(
            "alice",
            "/api/groups/g1/steps/5/work",
            {"content": {"network": doc, "scenarios": []}},
        )
        assert response.status_code == 200, response.text
        created = svc.post(
            "alice",
            "/api/groups/g1/scenarios",
            {"name": "Impossible", "evidence": {"a": "True"}},
        )
        sid = created.json()["scenario"]["id"]
        response = svc.post("alice", f"/api/groups/g1/scenarios/{sid}/evaluate")
        assert response.status_code == 422
        assert reason_of(response) == "IMPOSSIBLE_EVIDENCE"

    def test_structural_edit_invalidates_409(self, svc):
        self.setup_explorer(svc)
        sid = svc.post(
            "alice", "/api/groups/g1/scenarios", {"name": "S", "evidence": {"c": "True"}}
        ).json()["scenario"]["id"]

        doc = network_doc()
        doc["arrows"] = [a for a in doc["arrows"] if a["from"] != "b"]
        doc["cpts"] = [
            c
            if c["child"] != "c"
            else {
                "child": "c",
                "parents": ["a"],
                "rows": [
                    {"combo": ["True"], "cells": {"True": 0.9, "False": 0.1}},
                    {"combo": ["False"], "cells": {"True": 0.1, "False": 0.9}},
                ],
            }
            for c in doc["cpts"]
        ]
        content = svc.get("alice", "/api/groups/g1/steps/5/work").json()["content"]
        content["network"] = doc
        assert (
            svc.put(
                "alice", "/api/groups/g1/steps/5/work", {"content": content}
            ).status_code
            == 200
        )

        response = svc.post("alice", f"/api/groups/g1/scenarios/{sid}/evaluate")
        assert response.status_code == 409
        assert reason_of(response) == "VERSION_CONFLICT"
        flags = {
            s["id"]: s["invalidated"]
            for s in svc.get("alice", "/api/groups/g1/scenarios").json()["scenarios"]
        }
        assert flags == {"s0": False, sid: True}

    def test_explanation_levels(self, svc):
        self.setup_explorer(svc)
        sid = svc.post(
            "alice", "/api/groups/g1/scenarios", {"name": "S", "evidence": {"c": "True"}}
        ).json()["scenario"]["id"]

        summary = svc.get(
            "alice",
            f"/api/groups/g1/scenarios/{sid}/explanation",
            params={"level": "summary"},
        )
        assert summary.status_code == 200
        assert summary.json()["summary"]["statements"]

        detail = svc.get(
            "alice",
            f"/api/groups/g1/scenarios/{sid}/explanation",
            params={"level": "detail"},
        )
        assert detail.status_code == 200
        body = detail.json()
        assert [s["id"] for s in body["sections"]] == list(
            reporting.ALIGNED_SECTION_IDS
        )
        assert len(body["network_hash"]) == 64

        bad = svc.get(
            "alice",
            f"/api/groups/g1/scenarios/{sid}/explanation",
            params={"level": "everything"},
        )
        assert bad.status_code == 422

    def test_analyst_without_network_gets_422(self, svc):
        response = svc.get("alice", "/api/groups/g1/scenarios")
        assert response.status_code == 422
        assert reason_of(response) == "EMPTY_CONTENT"

    def test_facilitator_explores_group_solution(self, svc):
        response = svc.put(
            "fac",
            "/api/groups/g1/steps/5/group-solution",
            {"content": {"network": network_doc(), "scenarios": []}},
        )
        assert response.status_code == 200
        created = svc.post(
            "fac", "/api/groups/g1/scenarios", {"name": "G", "evidence": {"c": "True"}}
        )
        assert created.status_code == 201
        result = svc.post("fac", "/api/groups/g1/scenarios/s1/evaluate")
        assert result.status_code == 200

        # The scenario landed in the group-solution draft, on the log.
        draft = svc.get("fac", "/api/groups/g1/steps/5/group-solution").json()
        assert draft["content"]["scenarios"][0]["name"] == "G"

    def test_observer_reads_published_exploration_only(self, svc):
        response = svc.get("olive", "/api/groups/g1/scenarios")
        assert response.status_code == 403  # nothing published yet
        svc.put(
            "fac",
            "/api/groups/g1/steps/5/group-solution",
            {"content": {"network": network_doc(), "scenarios": []}},
        )
        svc.post("fac", "/api/groups/g1/scenarios", {"name": "G", "evidence": {}})
        svc.post("fac", "/api/groups/g1/steps/5/group-solution/publish")

        listing = svc.get("olive", "/api/groups/g1/scenarios")
        assert listing.status_code == 200
        assert [s["name"] for s in listing.json()["scenarios"]] == ["Base", "G"]
        assert (
            svc.post("olive", "/api/groups/g1/scenarios/s1/evaluate").status_code
            == 200
        )
        denied = svc.post(
            "olive", "/api/groups/g1/scenarios", {"name": "Mine", "evidence": {}}
        )
        assert denied.status_code == 403
        assert reason_of(denied) == "ROLE"

    def test_resource_limit_422(self, tmp_path):
        service = Service(
            tmp_path / "data",
            config=ServiceConfig(
                data_dir=str(tmp_path / "data"),
                bootstrap_password="admin-pw",
                max_table_cells=5,
            ),
        )
        service.seed_users("fac", "alice")
        service.seed_problem()
        service.seed_group(
            members=[
                {"user": "fac", "role": "facilitator"},
                {"user": "alice", "role": "analyst"},
            ]
        )
        service.drive_to_step("alice", 5)
        service.put(
            "alice",
            "/api/groups/g1/steps/5/work",
            {"content": {"network": network_doc(), "scenarios": []}},
        )
        response = service.post("alice", "/api/groups/g1/scenarios/s0/evaluate")
        assert response.status_code == 422
        assert reason_of(response) == "RESOURCE_LIMIT"


# ---------------------------------------------------------------------------
# Reports, ratings, submission, export


def drive_group_to_reports(svc):
    for user in ("alice", "bob"):
        svc.drive_to_step(user, 6)
        svc.share_step(user, 6)


class TestReportsAndSubmission:
    def test_rating_flow(self, svc):
        drive_group_to_reports(svc)
        listing = svc.get("alice", "/api/groups/g1/reports").json()["reports"]
        assert [r["id"] for r in listing] == ["Panelist 1", "Panelist 2"]
        assert all(r["summary"] == "hidden" for r in listing)

        rated = svc.post(
            "alice", "/api/groups/g1/reports/Panelist 2/rating", {"score": 8}
        )
        assert rated.status_code == 200
        assert rated.json()["summary"] == {"average": 8.0, "count": 1}

        view = svc.get("alice", "/api/groups/g1/reports/Panelist 2/rating").json()
        assert view["your_score"] == 8
        unrated = svc.get("alice", "/api/groups/g1/reports/Panelist 1/rating").json()
        assert unrated["summary"] == "hidden"

        fac_view = svc.get("fac", "/api/groups/g1/reports/Panelist 2/rating").json()
        assert fac_view["summary"] == {"average": 8.0, "count": 1}

    def test_rating_validation(self, svc):
        drive_group_to_reports(svc)
        response = svc.post(
            "alice", "/api/groups/g1/reports/Panelist 2/rating", {"score": 11}
        )
        assert response.status_code == 422
        response = svc.post(
            "fac", "/api/groups/g1/reports/Panelist 2/rating", {"score": 5}
        )
        assert response.status_code == 403 and reason_of(response) == "ROLE"
        response = svc.post(
            "alice", "/api/groups/g1/reports/Nobody/rating", {"score": 5}
        )
        assert response.status_code == 404

    def test_submission_and_export(self, svc):
        drive_group_to_reports(svc)
        svc.post("alice", "/api/groups/g1/reports/Panelist 2/rating", {"score": 9})
        svc.post("bob", "/api/groups/g1/reports/Panelist 1/rating", {"score": 7})

        denied = svc.post(
            "alice",
            "/api/groups/g1/submit",
            {"method": "facilitator_choice", "report_id": "Panelist 1"},
        )
        assert denied.status_code == 403 and reason_of(denied) == "ROLE"

        submitted = svc.post(
            "fac", "/api/groups/g1/submit", {"method": "highest_rated"}
        )
        assert submitted.status_code == 201
        body = submitted.json()
        assert body["report_id"] == "Panelist 2"  # 9 beats 7
        assert len(body["content_hash"]) == 64
        assert body["files"] == ["network.json", "report.html", "scenarios.json"]

        info = svc.get("bob", "/api/groups/g1/submission").json()
        assert info["submitted"] is True
        assert info["report_id"] == "Panelist 2"

        html = svc.get("alice", "/api/groups/g1/export/report.html")
        assert html.status_code == 200
        assert "machine-generated" in html.text or "<html" in html.text

        manifest = json.loads(
            svc.get("alice", "/api/groups/g1/export/manifest.json").content
        )
        assert set(manifest["files"]) == {
            "report.html",
            "network.json",
            "scenarios.json",
        }

        again = svc.post(
            "fac",
            "/api/groups/g1/submit",
            {"method": "facilitator_choice", "report_id": "Panelist 1"},
        )
        assert again.status_code == 409
        assert reason_of(again) == "ALREADY_SUBMITTED"

        frozen = svc.post(
            "bob", "/api/groups/g1/reports/Panelist 1/rating", {"score": 2}
        )
        assert frozen.status_code == 403
        assert reason_of(frozen) == "DEADLINE"

    def test_submission_requires_rated_reports(self, svc):
        drive_group_to_reports(svc)
        response = svc.post("fac", "/api/groups/g1/submit", {"method": "highest_rated"})
        assert response.status_code == 422
        assert reason_of(response) == "NO_RATED_REPORTS"

    def test_freeze_blocks_work_but_allows_submit_in_grace(self, svc):
        drive_group_to_reports(svc)
        svc.post("alice", "/api/groups/g1/reports/Panelist 2/rating", {"score": 9})

        svc.post("admin", "/api/groups/g1/admin/freeze", {})
        response = svc.put(
            "alice", "/api/groups/g1/steps/6/work", {"content": step_content(6)}
        )
        assert response.status_code == 403
        assert reason_of(response) == "DEADLINE"
        # Views still work after the freeze.
        assert svc.get("alice", "/api/groups/g1/steps/6/work").status_code == 200

        svc.clock.now += 3600  # one hour into the 24h grace window
        submitted = svc.post(
            "fac", "/api/groups/g1/submit", {"method": "highest_rated"}
        )
        assert submitted.status_code == 201

    def test_freeze_grace_expires(self, svc):
        drive_group_to_reports(svc)
        svc.post("alice", "/api/groups/g1/reports/Panelist 2/rating", {"score": 9})
        svc.post("admin", "/api/groups/g1/admin/freeze", {})
        svc.clock.now += wf.SUBMISSION_GRACE_SECONDS + 1
        response = svc.post("fac", "/api/groups/g1/submit", {"method": "highest_rated"})
        assert response.status_code == 403
        assert reason_of(response) == "DEADLINE"

    def test_report_autofill_route(self, svc):
        svc.drive_to_step("alice", 6)
        svc.put(
            "alice",
            "/api/groups/g1/steps/5/work",
            {"content": {"network": network_doc(), "scenarios": []}},
        )
        sid = svc.post(
            "alice", "/api/groups/g1/scenarios", {"name": "S", "evidence": {"c": "True"}}
        ).json()["scenario"]["id"]

        draft = reporting.instantiate_template(questions=("Q?",))
        draft["sections"][0]["body"] = "my own words"
        response = svc.post(
            "alice",
            "/api/groups/g1/reports/autofill",
            {"report": draft, "scenario_id": sid},
        )
        assert response.status_code == 200
        filled = response.json()["report"]
        impact = next(s for s in filled["sections"] if s["id"] == "impact")
        assert filled["sections"][0]["body"] == "my own words"
        assert impact["generated"]

        stale = svc.post(
            "alice",
            "/api/groups/g1/reports/autofill",
            {"report": draft, "scenario_id": sid, "network_hash": "0" * 64},
        )
        assert stale.status_code == 409
        assert reason_of(stale) == "STALE_EXPLANATION"


# ---------------------------------------------------------------------------
# Durability across restarts


class TestDurability:
    def build_history(self, svc):
        svc.share_step("alice", 1)
        svc.share_step("bob", 1)
        svc.post("alice", "/api/groups/g1/advance", {"step": 2})
        svc.post("alice", "/api/groups/g1/steps/1/forum", {"body": "hello"})
        svc.post(
            "fac",
            "/api/groups/g1/messages",
            {"recipients": ["Panelist 1"], "body": "hi", "email_nudge": True},
        )
        data = base64.b64encode(b"attachment").decode()
        blob_id = svc.post("alice", "/api/groups/g1/blobs", {"content_base64": data}).json()["id"]
        svc.post(
            "alice",
            "/api/groups/g1/steps/1/forum",
            {"body": "with file", "attachments": [blob_id]},
        )
        return blob_id

    def test_restart_preserves_state_hash(self, svc, tmp_path):
        blob_id = self.build_history(svc)
        live_hash = wf.state_hash(svc.registry.state("g1"))

        reborn = Service(tmp_path / "data", clock=svc.clock, config=svc.config)
        assert wf.state_hash(reborn.registry.state("g1")) == live_hash

        posts = reborn.get("fac", "/api/groups/g1/steps/1/forum").json()["posts"]
        assert [p["body"] for p in posts] == ["hello", "with file"]
        assert reborn.get("fac", f"/api/blobs/{blob_id}").content == b"attachment"

        # the same commands keep working after the restart
        assert (
            reborn.post("bob", "/api/groups/g1/advance", {"step": 2}).status_code
            == 200
        )

    def test_torn_tail_recovers_with_warning(self, svc, tmp_path):
        self.build_history(svc)
        hash_before_tear = wf.state_hash(svc.registry.state("g1"))
        log_path = tmp_path / "data" / "groups" / "g1" / "log.jsonl"
        with open(log_path, "a") as handle:
            handle.write('{"seq": 99, "kind": "command", "command": {"ty')

        reborn = Service(tmp_path / "data", clock=svc.clock, config=svc.config)
        handle_ = reborn.registry.handle("g1")
        assert wf.state_hash(handle_.state) == hash_before_tear
        assert any("torn" in w for w in handle_.warnings)

    def test_mid_log_corruption_is_500(self, svc, tmp_path):
        self.build_history(svc)
        log_path = tmp_path / "data" / "groups" / "g1" / "log.jsonl"
        lines = log_path.read_text().splitlines(keepends=True)
        lines[2] = "###\n"
        log_path.write_text("".join(lines))
        (log_path.parent / "snapshot.json").unlink(missing_ok=True)

        reborn = Service(tmp_path / "data", clock=svc.clock, config=svc.config)
        response = reborn.get("fac", "/api/groups/g1")
        assert response.status_code == 500
        assert reason_of(response) == "CORRUPT_LOG"

    def test_hundred_commands_replay_to_same_hash(self, svc, tmp_path):
        for i in range(50):
            content = dict(step_content(1), notes=f"draft {i}")
            assert (
                svc.put(
                    "alice", "/api/groups/g1/steps/1/work", {"content": content}
                ).status_code
                == 200
            )
            assert (
                svc.put(
                    "bob", "/api/groups/g1/steps/1/work", {"content": content}
                ).status_code
                == 200
            )
        live_hash = wf.state_hash(svc.registry.state("g1"))

        reborn = Service(tmp_path / "data", clock=svc.clock, config=svc.config)
        assert wf.state_hash(reborn.registry.state("g1")) == live_hash
        work = reborn.get("alice", "/api/groups/g1/steps/1/work").json()
        assert work["content"]["notes"] == "draft 49"
        assert work["version"] == 50


# ---------------------------------------------------------------------------
# Authorization matrix: every non-admin route family x every role, executed
# against one prepared gate state.  Each cell gets a fresh service so the
# mutating cases cannot bleed into each other.
#
# Prepared state (realtime group): Panelist 1 (alice) shared step 1 and
# posted in its forum; Panelist 2 (bob) holds a private unshared draft;
# the facilitator saved an unpublished step-1 group-solution draft.

from dataclasses import dataclass

from delphinet.service import auth as service_auth


@dataclass(frozen=True)
class Cell:
    status: int
    reason: str | None = None
    gate: str | None = None


@dataclass(frozen=True)
class MatrixCase:
    id: str
    method: str
    path: str
    expected: dict  # actor -> Cell
    body: dict | None = None
    params: dict | None = None


OK = Cell(200)
MADE = Cell(201)
ROLE = Cell(403, "ROLE")
EMPTY = Cell(422, "EMPTY_CONTENT")
MISSING = Cell(404, "UNKNOWN_ENTITY")
NOT_RATED = Cell(422, "NO_RATED_REPORTS")


def gate(reason: str) -> Cell:
    return Cell(403, "DELPHI_GATE", reason)


G = "/api/groups/g1"
MATRIX = [
    MatrixCase(
        "own-work-view", "get", f"{G}/steps/1/work",
        {"fac": OK, "alice": OK, "bob": OK, "olive": OK},
    ),
    MatrixCase(
        "shared-peer-view", "get", f"{G}/steps/1/work",
        {"fac": OK, "alice": OK, "bob": gate("viewer_not_shared"), "olive": OK},
        params={"owner": "Panelist 1"},
    ),
    MatrixCase(
        "unshared-peer-view", "get", f"{G}/steps/1/work",
        {
            "fac": gate("owner_not_shared"),
            "alice": gate("owner_not_shared"),
            "bob": OK,
            "olive": gate("owner_not_shared"),
        },
        params={"owner": "Panelist 2"},
    ),
    MatrixCase(
        "work-edit", "put", f"{G}/steps/1/work",
        {"fac": ROLE, "alice": OK, "bob": OK, "olive": ROLE},
        body={"content": step_content(1)},
    ),
    MatrixCase(
        "work-share", "post", f"{G}/steps/1/share",
        {"fac": ROLE, "alice": OK, "bob": OK, "olive": ROLE},
    ),
    MatrixCase(
        "peer-roster", "get", f"{G}/steps/1/peers",
        {"fac": OK, "alice": OK, "bob": OK, "olive": OK},
    ),
    MatrixCase(
        "advance", "post", f"{G}/advance",
        {"fac": OK, "alice": OK, "bob": gate("not_shared"), "olive": OK},
        body={"step": 2},
    ),
    MatrixCase(
        "forum-read", "get", f"{G}/steps/1/forum",
        {"fac": OK, "alice": OK, "bob": gate("viewer_not_shared"), "olive": OK},
    ),
    MatrixCase(
        "forum-post", "post", f"{G}/steps/1/forum",
        {"fac": MADE, "alice": MADE, "bob": gate("viewer_not_shared"), "olive": ROLE},
        body={"body": "x"},
    ),
    MatrixCase(
        "group-solution-view", "get", f"{G}/steps/1/group-solution",
        {
            "fac": OK,
            "alice": gate("not_published"),
            "bob": gate("viewer_not_shared"),
            "olive": gate("not_published"),
        },
    ),
    MatrixCase(
        "group-solution-edit", "put", f"{G}/steps/1/group-solution",
        {"fac": OK, "alice": ROLE, "bob": ROLE, "olive": ROLE},
        body={"content": step_content(1)},
    ),
    MatrixCase(
        "group-solution-publish", "post", f"{G}/steps/1/group-solution/publish",
        {"fac": OK, "alice": ROLE, "bob": ROLE, "olive": ROLE},
    ),
    MatrixCase(
        "release", "post", f"{G}/steps/2/release",
        {"fac": OK, "alice": ROLE, "bob": ROLE, "olive": ROLE},
    ),
    MatrixCase(
        "adopt", "post", f"{G}/adopt",
        {"fac": ROLE, "alice": OK, "bob": gate("viewer_not_shared"), "olive": ROLE},
        body={"source": "Panelist 1", "step": 1, "selection": ["*"], "target": "own"},
    ),
    MatrixCase(
        "scenario-list", "get", f"{G}/scenarios",
        {
            "fac": EMPTY,
            "alice": EMPTY,
            "bob": EMPTY,
            "olive": gate("not_published"),
        },
    ),
    MatrixCase(
        "scenario-create", "post", f"{G}/scenarios",
        {
            "fac": EMPTY,
            "alice": EMPTY,
            "bob": EMPTY,
            "olive": gate("not_published"),
        },
        body={"name": "X"},
    ),
    MatrixCase(
        "messages-read", "get", f"{G}/messages",
        {"fac": OK, "alice": OK, "bob": OK, "olive": OK},
    ),
    MatrixCase(
        "message-send", "post", f"{G}/messages",
        {"fac": MADE, "alice": ROLE, "bob": ROLE, "olive": ROLE},
        body={"recipients": ["Panelist 3"], "body": "x"},
    ),
    MatrixCase(
        "rating-post", "post", f"{G}/reports/Panelist 1/rating",
        {"fac": ROLE, "alice": MISSING, "bob": MISSING, "olive": ROLE},
        body={"score": 5},
    ),
    MatrixCase(
        "reports-list", "get", f"{G}/reports",
        {"fac": OK, "alice": OK, "bob": OK, "olive": OK},
    ),
    MatrixCase(
        "submit", "post", f"{G}/submit",
        {"fac": NOT_RATED, "alice": NOT_RATED, "bob": NOT_RATED, "olive": ROLE},
        body={"method": "highest_rated"},
    ),
    MatrixCase(
        "submission-view", "get", f"{G}/submission",
        {"fac": OK, "alice": OK, "bob": OK, "olive": OK},
    ),
    MatrixCase(
        "blob-upload", "post", f"{G}/blobs",
        {"fac": MADE, "alice": MADE, "bob": MADE, "olive": MADE},
        body={"content_base64": "aGVsbG8="},
    ),
    MatrixCase(
        "export-download", "get", f"{G}/export/report.html",
        {"fac": MISSING, "alice": MISSING, "bob": MISSING, "olive": MISSING},
    ),
]

ACTORS = ("fac", "alice", "bob", "olive")


def build_matrix_service(tmp_path) -> Service:
    service = Service(tmp_path / "matrix")
    service.seed_users("fac", "alice", "bob", "olive", "carol")
    service.seed_problem()
    service.seed_group(
        members=[
            {"user": "fac", "role": "facilitator"},
            {"user": "alice", "role": "analyst"},
            {"user": "bob", "role": "analyst"},
            {"user": "olive", "role": "observer"},
            {"user": "carol", "role": "analyst"},
        ]
    )
    service.share_step("alice", 1)
    response = service.put(
        "bob", f"{G}/steps/1/work", {"content": step_content(1)}
    )
    assert response.status_code == 200
    response = service.put(
        "fac", f"{G}/steps/1/group-solution", {"content": step_content(1)}
    )
    assert response.status_code == 200
    response = service.post("alice", f"{G}/steps/1/forum", {"body": "seed"})
    assert response.status_code == 201
    return service


@pytest.mark.parametrize("actor", ACTORS)
@pytest.mark.parametrize("case", MATRIX, ids=lambda c: c.id)
def test_authorization_matrix(tmp_path, monkeypatch, case, actor):
    monkeypatch.setattr(service_auth, "_PBKDF2_ITERATIONS", 1000)
    svc = build_matrix_service(tmp_path)
    expected = case.expected[actor]
    if case.method == "get":
        response = svc.get(actor, case.path, params=case.params)
    elif case.method == "put":
        response = svc.put(actor, case.path, case.body)
    else:
        response = svc.post(actor, case.path, case.body)
    detail = f"{case.id} as {actor}: {response.status_code} {response.text}"
    assert response.status_code == expected.status, detail
    if expected.reason is not None:
        assert reason_of(response) == expected.reason, detail
    if expected.gate is not None:
        assert gate_of(response) == expected.gate, detail


def test_matrix_covers_every_actor():
    for case in MATRIX:
        assert set(case.expected) == set(ACTORS), case.id


# ---------------------------------------------------------------------------
# Group summary view


class TestGroupSummary:
    def test_summary_shape(self, svc):
        svc.share_step("alice", 1)
        summary = svc.get("bob", "/api/groups/g1").json()
        assert summary["mode"] == "realtime"
        assert summary["you"] == {
            "user": "bob",
            "role": "analyst",
            "pseudonym": "Panelist 2",
        }
        assert summary["steps"]["1"]["shared_peers"] == ["Panelist 1"]
        assert summary["steps"]["1"]["own_status"] == "private"
        assert summary["problem"]["questions"] == ["Q?"]
        assert summary["submitted"] is False

        roster = {m["pseudonym"] for m in summary["members"]}
        assert roster == {"Facilitator", "Panelist 1", "Panelist 2", "Observer 1"}
        assert "alice" not in json.dumps(summary["members"])

    def test_group_listing_by_membership(self, svc):
        groups = svc.get("alice", "/api/groups").json()["groups"]
        assert [g["id"] for g in groups] == ["g1"]
        assert groups[0]["role"] == "analyst"
        assert svc.get("carol", "/api/groups").json()["groups"] == []
        admin_view = svc.get("admin", "/api/groups").json()["groups"]
        assert [g["id"] for g in admin_view] == ["g1"]
        assert admin_view[0]["role"] is None

    def test_non_member_summary_404_member_ok(self, svc):
        assert svc.get("carol", "/api/groups/g1").status_code == 404
        assert svc.get("admin", "/api/groups/g1").status_code == 200
        assert svc.get("alice", "/api/groups/unknown").status_code == 404
