"""Evidence scenarios: creation, evaluation (cached), and comparison.

A scenario names a set of evidence on a specific network work item and the
variables whose posteriors the analyst wants to watch.  The base scenario
(no evidence) always exists and cannot be deleted.  Scenarios an analyst
creates on someone else's shared network stay private to that analyst.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .bn.jsonio import content_hash
from .bn.model import BayesianNetwork, validate_network
from .errors import (
    IncompatibleSelectionError,
    NameCollisionError,
    UnknownEntityError,
    UnknownVariableError,
    VersionMismatchError,
)
from .explain import ExplanationSummary, summarize
from .inference import Posterior, check_evidence, posterior


@dataclass(frozen=True)
class NetworkRef:
    """Which network a scenario belongs to: owner + work item + version."""

    owner: str
    work_item: str
    version: int = 0


@dataclass
class Scenario:
    id: str
    name: str
    evidence: dict[str, str]
    output_variables: tuple[str, ...]
    owner: str
    network_ref: NetworkRef
    description: Optional[str] = None
    is_base: bool = False
    invalidated: bool = False


@dataclass(frozen=True)
class StateDelta:
    state: str
    p_a: float
    p_b: float
    delta: float  # p_b - p_a


@dataclass(frozen=True)
class VariableComparison:
    variable: str
    states: tuple[StateDelta, ...]


@dataclass(frozen=True)
class ScenarioComparison:
    scenario_a: str
    scenario_b: str
    variables: tuple[VariableComparison, ...]


@dataclass(frozen=True)
class EvaluationResult:
    posteriors: tuple[Posterior, ...]
    summary: ExplanationSummary
    from_cache: bool


def _normalize_evidence(
    evidence: Mapping[str, str] | Iterable[tuple[str, str]]
) -> dict[str, str]:
    if isinstance(evidence, Mapping):
        return dict(evidence)
    out: dict[str, str] = {}
    for vid, state in evidence:
        if vid in out:
            raise IncompatibleSelectionError(
                f"evidence asserts two states for variable {vid!r}"
            )
        out[vid] = state
    return out


def structure_signature(net: BayesianNetwork) -> tuple:
    """Changes exactly when variables, states, or arrows change."""
    return (
        tuple(sorted((v.id, v.states) for v in net.variables.values())),
        tuple(sorted((a.from_id, a.to_id) for a in net.arrows)),
    )


class EvaluationCache:
    """Evaluations keyed by (network content, evidence, outputs)."""

    def __init__(self) -> None:
        self._entries: dict[tuple, tuple[tuple[Posterior, ...], ExplanationSummary]] = {}

    def key(self, net: BayesianNetwork, scenario: Scenario) -> tuple:
        return (
            content_hash(net),
            tuple(scenario.evidence.items()),
            scenario.output_variables,
        )

    def get(self, key: tuple):
        return self._entries.get(key)

    def put(self, key: tuple, value) -> None:
        self._entries[key] = value


def evaluate_scenario(
    net: BayesianNetwork,
    scenario: Scenario,
    cache: Optional[EvaluationCache] = None,
) -> EvaluationResult:
    """Posteriors for the scenario's outputs plus a fresh summary explanation."""
    if scenario.invalidated:
        raise VersionMismatchError(
            f"scenario {scenario.name!r} was invalidated by a structural change"
        )
    key = cache.key(net, scenario) if cache is not None else None
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            posteriors, summary = hit
            return EvaluationResult(posteriors=posteriors, summary=summary, from_cache=True)
    posteriors = tuple(posterior(net, scenario.evidence, scenario.output_variables))
    summary = summarize(net, scenario, posteriors)
    if cache is not None:
        cache.put(key, (posteriors, summary))
    return EvaluationResult(posteriors=posteriors, summary=summary, from_cache=False)


def compare_scenarios(
    net: BayesianNetwork, a: Scenario, b: Scenario
) -> ScenarioComparison:
    """Aligned per-state probabilities and signed deltas for two scenarios."""
    if a.network_ref != b.network_ref:
        raise VersionMismatchError(
            f"scenarios {a.name!r} and {b.name!r} reference different network versions"
        )
    outputs = list(dict.fromkeys(itertools.chain(a.output_variables, b.output_variables)))
    result_a = {p.variable: p for p in posterior(net, a.evidence, outputs)}
    result_b = {p.variable: p for p in posterior(net, b.evidence, outputs)}
    variables = []
    for vid in outputs:
        states = tuple(
            StateDelta(
                state=s,
                p_a=result_a[vid].distribution[s],
                p_b=result_b[vid].distribution[s],
                delta=result_b[vid].distribution[s] - result_a[vid].distribution[s],
            )
            for s in net.variables[vid].states
        )
        variables.append(VariableComparison(variable=vid, states=states))
    return ScenarioComparison(
        scenario_a=a.id, scenario_b=b.id, variables=tuple(variables)
    )


class ScenarioWorkspace:
    """The scenario list attached to one network work item.

    Visibility: the base scenario and scenarios created by the network's
    owner are visible to anyone who can see the network; scenarios other
    users add are visible only to their creators.
    """

    def __init__(self, network_ref: NetworkRef, net: BayesianNetwork) -> None:
        report = validate_network(net)
        if not report.ok:
            raise UnknownVariableError(
                f"cannot open scenarios on an invalid network: {report.findings[0].message}"
            )
        self.network_ref = network_ref
        self._counter = itertools.count(1)
        default_outputs = tuple(
            v.id for v in net.variables.values() if v.is_target
        ) or tuple(net.variables)
        self.scenarios: dict[str, Scenario] = {}
        base = Scenario(
            id="s0",
            name="Base",
            evidence={},
            output_variables=default_outputs,
            owner=network_ref.owner,
            network_ref=network_ref,
            description="Default scenario with no evidence entered.",
            is_base=True,
        )
        self.scenarios[base.id] = base

    @property
    def base(self) -> Scenario:
        return next(s for s in self.scenarios.values() if s.is_base)

    def create(
        self,
        net: BayesianNetwork,
        name: str,
        evidence: Mapping[str, str] | Iterable[tuple[str, str]],
        outputs: Sequence[str],
        owner: str,
        description: Optional[str] = None,
    ) -> Scenario:
        normalized = _normalize_evidence(evidence)
        check_evidence(net, normalized)
        if not outputs:
            raise IncompatibleSelectionError("a scenario needs at least one output variable")
        for vid in outputs:
            if vid not in net.variables:
                raise UnknownVariableError(f"output names unknown variable {vid!r}")
        if any(s.name == name for s in self.scenarios.values()):
            raise NameCollisionError(f"a scenario named {name!r} already exists")
        scenario = Scenario(
            id=f"s{next(self._counter)}",
            name=name,
            evidence=normalized,
            output_variables=tuple(outputs),
            owner=owner,
            network_ref=self.network_ref,
            description=description,
        )
        self.scenarios[scenario.id] = scenario
        return scenario

    def get(self, scenario_id: str) -> Scenario:
        scenario = self.scenarios.get(scenario_id)
        if scenario is None:
            raise UnknownEntityError(f"no scenario {scenario_id!r}")
        return scenario

    def delete(self, scenario_id: str, requester: str) -> None:
        scenario = self.get(scenario_id)
        if scenario.is_base:
            raise IncompatibleSelectionError("the base scenario cannot be deleted")
        if requester not in (scenario.owner, self.network_ref.owner):
            raise UnknownEntityError(f"no scenario {scenario_id!r}")
        del self.scenarios[scenario_id]

    def visible_to(self, viewer: str) -> list[Scenario]:
        return [
            s
            for s in self.scenarios.values()
            if s.is_base or s.owner == self.network_ref.owner or s.owner == viewer
        ]

    def apply_network_update(
        self, old_net: BayesianNetwork, new_net: BayesianNetwork
    ) -> list[Scenario]:
        """Mark scenarios stale after a structural edit (parameter-only edits
        keep everything).  Returns the scenarios that were invalidated."""
        if structure_signature(old_net) == structure_signature(new_net):
            return []
        flagged = []
        for scenario in self.scenarios.values():
            if scenario.is_base:
                continue
            if not scenario.invalidated:
                scenario.invalidated = True
                flagged.append(scenario)
        return flagged
