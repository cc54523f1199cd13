"""Scenario exploration over step-5 work payloads.

Scenario definitions live inside the owner's step-5 payload (analysts:
their own draft; facilitator: the group-solution draft; observers: the
latest published group solution, read-only).  Storing them in the payload
keeps every mutation on the group command log, so scenarios replay, share,
and freeze exactly like the rest of the work.

Each stored entry records the structure signature of the network it was
written against; evaluating after a structural edit fails with a version
conflict instead of silently answering a different question.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any, Mapping, Sequence

from .. import workflow as wf
from ..bn import BayesianNetwork, parents_of
from ..bn.jsonio import content_hash, network_from_json
from ..errors import (
    EmptyContentError,
    IncompatibleSelectionError,
    NameCollisionError,
    ResourceLimitError,
    RoleError,
    UnknownEntityError,
)
from ..explain import ExplanationDetail, ExplanationSummary, detail
from ..inference import Posterior, check_evidence
from ..scenarios import (
    EvaluationCache,
    EvaluationResult,
    NetworkRef,
    Scenario,
    evaluate_scenario,
    structure_signature,
)

BASE_ID = "s0"
BASE_NAME = "Base"


def signature_hash(net: BayesianNetwork) -> str:
    """Stable digest of the structure signature (variables/states/arrows)."""
    canonical = json.dumps(structure_signature(net), sort_keys=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def total_table_cells(net: BayesianNetwork) -> int:
    cells = 0
    for var in net.variables.values():
        size = len(var.states)
        for parent in parents_of(net, var.id):
            size *= len(net.variables[parent].states)
        cells += size
    return cells


def check_table_budget(net: BayesianNetwork, max_table_cells: int) -> None:
    cells = total_table_cells(net)
    if cells > max_table_cells:
        raise ResourceLimitError(
            f"network needs {cells} CPT cells, above the evaluation budget "
            f"of {max_table_cells}",
            cells=cells,
            budget=max_table_cells,
        )


def default_outputs(net: BayesianNetwork) -> tuple[str, ...]:
    """Target variables when any are flagged, otherwise every variable."""
    return tuple(v.id for v in net.variables.values() if v.is_target) or tuple(
        net.variables
    )


class Exploration:
    """One member's scenario view over the relevant step-5 payload."""

    def __init__(self, state: wf.GroupState, user: str) -> None:
        self.state = state
        self.user = user
        member = next((m for m in state.members if m.user == user), None)
        if member is None:
            raise UnknownEntityError(f"no member {user!r}")
        self.role = member.role
        self.payload, self.work_version, self.writable = self._locate()
        network_doc = self.payload.get("network")
        if not network_doc or not network_doc.get("variables"):
            raise EmptyContentError(
                "no step-5 network to explore; draft one in step 5 first"
            )
        self.net = network_from_json(network_doc)
        self.signature = signature_hash(self.net)

    def _locate(self) -> tuple[dict, int, bool]:
        if self.role is wf.Role.ANALYST:
            view = wf.view_work(self.state, self.user, self.user, 5)
            return view["content"], view["version"], True
        if self.role is wf.Role.FACILITATOR:
            view = wf.view_group_solution(self.state, self.user, 5)
            return view["content"], view["version"], True
        # Observers explore the latest published group solution, read-only.
        view = wf.view_group_solution(self.state, self.user, 5)
        return view["content"], view["version"], False

    # -- listing ------------------------------------------------------------

    def _entries(self) -> list[dict]:
        entries = self.payload.get("scenarios") or []
        return [e for e in entries if isinstance(e, Mapping)]

    def _base_doc(self) -> dict:
        return {
            "id": BASE_ID,
            "name": BASE_NAME,
            "description": "Default scenario with no evidence entered.",
            "evidence": {},
            "outputs": list(default_outputs(self.net)),
            "is_base": True,
            "invalidated": False,
        }

    def _entry_doc(self, entry: Mapping[str, Any]) -> dict:
        stored_signature = entry.get("signature")
        return {
            "id": entry.get("id"),
            "name": entry.get("name", ""),
            "description": entry.get("description"),
            "evidence": dict(entry.get("evidence") or {}),
            "outputs": list(entry.get("outputs") or []),
            "is_base": False,
            "invalidated": (
                stored_signature is not None and stored_signature != self.signature
            ),
        }

    def list(self) -> list[dict]:
        return [self._base_doc()] + [self._entry_doc(e) for e in self._entries()]

    # -- creation -----------------------------------------------------------

    def build_create_command(
        self,
        name: str,
        evidence: Mapping[str, str],
        outputs: Sequence[str],
        description: str | None,
    ) -> tuple[wf.Command, dict]:
        """Validate the definition and return the workflow command that
        persists it plus the resulting scenario document."""
        if not self.writable:
            raise RoleError("observers cannot create scenarios")
        name = (name or "").strip()
        if not name:
            raise IncompatibleSelectionError("a scenario needs a name")
        evidence = dict(evidence)
        check_evidence(self.net, evidence)
        outputs = tuple(outputs) or default_outputs(self.net)
        for vid in outputs:
            if vid not in self.net.variables:
                raise UnknownEntityError(f"output names unknown variable {vid!r}")
        taken = {BASE_NAME} | {e.get("name") for e in self._entries()}
        if name in taken:
            raise NameCollisionError(f"a scenario named {name!r} already exists")

        numbers = [0]
        for entry in self._entries():
            sid = str(entry.get("id") or "")
            if sid.startswith("s") and sid[1:].isdigit():
                numbers.append(int(sid[1:]))
        entry = {
            "id": f"s{max(numbers) + 1}",
            "name": name,
            "description": description,
            "evidence": evidence,
            "outputs": list(outputs),
            "signature": self.signature,
        }
        payload = dict(self.payload)
        payload["scenarios"] = [dict(e) for e in self._entries()] + [entry]

        command: wf.Command
        if self.role is wf.Role.FACILITATOR:
            command = wf.EditGroupSolution(user=self.user, step=5, content=payload)
        else:
            command = wf.EditWork(user=self.user, step=5, content=payload)
        return command, self._entry_doc(entry)

    # -- evaluation ---------------------------------------------------------

    def _scenario(self, scenario_id: str) -> Scenario:
        ref = NetworkRef(owner=self.user, work_item="step5", version=self.work_version)
        if scenario_id == BASE_ID:
            return Scenario(
                id=BASE_ID,
                name=BASE_NAME,
                evidence={},
                output_variables=default_outputs(self.net),
                owner=self.user,
                network_ref=ref,
                is_base=True,
            )
        for entry in self._entries():
            if entry.get("id") == scenario_id:
                doc = self._entry_doc(entry)
                return Scenario(
                    id=scenario_id,
                    name=doc["name"],
                    evidence=doc["evidence"],
                    output_variables=tuple(doc["outputs"]) or default_outputs(self.net),
                    owner=self.user,
                    network_ref=ref,
                    description=doc["description"],
                    invalidated=doc["invalidated"],
                )
        raise UnknownEntityError(f"no scenario {scenario_id!r}")

    def evaluate(
        self,
        scenario_id: str,
        cache: EvaluationCache | None,
        max_table_cells: int,
    ) -> tuple[Scenario, EvaluationResult]:
        scenario = self._scenario(scenario_id)
        check_table_budget(self.net, max_table_cells)
        return scenario, evaluate_scenario(self.net, scenario, cache)

    def explanation_detail(
        self, scenario_id: str, max_table_cells: int
    ) -> tuple[Scenario, ExplanationDetail]:
        scenario = self._scenario(scenario_id)
        check_table_budget(self.net, max_table_cells)
        return scenario, detail(self.net, scenario)


# -- serialization ------------------------------------------------------------


def posterior_doc(net: BayesianNetwork, post: Posterior) -> dict:
    return {
        "variable": post.variable,
        "name": net.variables[post.variable].name,
        "distribution": dict(post.distribution),
    }


def summary_doc(summary: ExplanationSummary) -> dict:
    return {
        "text": summary.text,
        "statements": [
            {
                "variable": st.variable,
                "variable_name": st.variable_name,
                "state": st.state,
                "prior": st.prior,
                "posterior": st.posterior,
                "prior_text": st.prior_text,
                "posterior_text": st.posterior_text,
            }
            for st in summary.target_statements
        ],
        "evidence": list(summary.evidence_list),
        "changes": list(summary.change_statements),
    }


def detail_doc(net: BayesianNetwork, exp: ExplanationDetail) -> dict:
    return {
        "sections": [{"id": sid, "text": text} for sid, text in exp.sections],
        "network_hash": content_hash(net),
    }


def evaluation_doc(
    net: BayesianNetwork, scenario: Scenario, result: EvaluationResult
) -> dict:
    return {
        "scenario": {
            "id": scenario.id,
            "name": scenario.name,
            "evidence": dict(scenario.evidence),
            "outputs": list(scenario.output_variables),
        },
        "posteriors": [posterior_doc(net, p) for p in result.posteriors],
        "summary": summary_doc(result.summary),
        "from_cache": result.from_cache,
    }
