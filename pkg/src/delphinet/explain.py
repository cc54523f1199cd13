"""Automated explanation generation for scenario evaluations.

All text comes from deterministic sentence templates, so identical inputs
yield byte-identical output.  Every probability is rendered in the dual form
"Descriptor (12.34%)"; the detailed explanation's section identifiers match
the report template one-to-one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .bn.model import BayesianNetwork
from .inference import Posterior, posterior, prior_marginals
from .verbal import Descriptor, render_probability, to_descriptor

# Section identifiers, in fixed order, shared with the report template.
EXPLANATION_SECTION_IDS: tuple[str, ...] = (
    "structure",
    "priors",
    "source_reliability",
    "relevance",
    "impact",
    "conclusion",
)

# |joint shift - sum of single-item shifts| above this flags an interaction.
INTERACTION_NOTE_THRESHOLD = 0.05


@dataclass(frozen=True)
class TargetStatement:
    variable: str
    variable_name: str
    state: str
    prior: float
    posterior: float
    prior_text: str
    posterior_text: str


@dataclass(frozen=True)
class ChangeClass:
    category: str  # unchanged | strengthened | weakened
    from_band: Descriptor
    to_band: Descriptor


@dataclass(frozen=True)
class ExplanationSummary:
    target_statements: tuple[TargetStatement, ...]
    evidence_list: tuple[str, ...]
    change_statements: tuple[str, ...]
    text: str


@dataclass(frozen=True)
class ExplanationDetail:
    sections: tuple[tuple[str, str], ...]  # (section id, section text)

    @property
    def section_ids(self) -> tuple[str, ...]:
        return tuple(sid for sid, _ in self.sections)

    def section(self, section_id: str) -> str:
        for sid, text in self.sections:
            if sid == section_id:
                return text
        raise KeyError(section_id)

    @property
    def text(self) -> str:
        return "\n\n".join(f"[{sid}]\n{body}" for sid, body in self.sections)


def classify_change(prior: float, post: float) -> ChangeClass:
    """Qualitative change between two probabilities of the same statement."""
    from_band = to_descriptor(prior)
    to_band = to_descriptor(post)
    if from_band is to_band:
        category = "unchanged"
    elif post > prior:
        category = "strengthened"
    else:
        category = "weakened"
    return ChangeClass(category=category, from_band=from_band, to_band=to_band)


def _sorted_children(net: BayesianNetwork, var_id: str) -> list[str]:
    return sorted(a.to_id for a in net.arrows if a.from_id == var_id)


def _directed_paths(net: BayesianNetwork, start: str, goal: str) -> list[list[str]]:
    """Every simple directed path start→goal, in lexicographic id order."""
    paths: list[list[str]] = []

    def walk(node: str, trail: list[str]) -> None:
        if node == goal:
            paths.append(trail.copy())
            return
        for nxt in _sorted_children(net, node):
            if nxt not in trail:
                trail.append(nxt)
                walk(nxt, trail)
                trail.pop()

    walk(start, [start])
    return paths


def _render_path(net: BayesianNetwork, path: Sequence[str]) -> str:
    return " -> ".join(net.variables[v].name for v in path)


def describe_structure(
    net: BayesianNetwork,
    targets: Sequence[str],
    evidence_variables: Iterable[str] = (),
) -> str:
    """Fixed-template narrative of causes, effects, and evidence paths."""
    lines: list[str] = []
    for t in targets:
        name = net.variables[t].name
        parents = [net.variables[a.from_id].name for a in net.arrows if a.to_id == t]
        children = [net.variables[a.to_id].name for a in net.arrows if a.from_id == t]
        if not parents and not children:
            lines.append(f"{name} has no modeled causes or effects.")
            continue
        for p in parents:
            lines.append(f"{p} influences {name}.")
        for c in children:
            lines.append(f"{name} influences {c}.")
    for ev in evidence_variables:
        for t in targets:
            for path in _directed_paths(net, ev, t):
                lines.append(f"Path: {_render_path(net, path)}.")
            for path in _directed_paths(net, t, ev):
                lines.append(f"Path: {_render_path(net, path)}.")
    return "\n".join(lines)


def _evidence_phrases(net: BayesianNetwork, evidence: Mapping[str, str]) -> list[str]:
    return [
        f"{net.variables[vid].name} = {state}" for vid, state in evidence.items()
    ]


def _change_sentence(net: BayesianNetwork, statement: TargetStatement) -> str:
    change = classify_change(statement.prior, statement.posterior)
    label = f"{statement.variable_name} = {statement.state}"
    if change.category == "unchanged":
        return (
            f"The probability of {label} is unchanged: "
            f"{statement.posterior_text} (was {statement.prior_text})."
        )
    return (
        f"The evidence {change.category} {label}: "
        f"from {statement.prior_text} to {statement.posterior_text}."
    )


def summarize(
    net: BayesianNetwork,
    scenario,
    posteriors: Sequence[Posterior],
) -> ExplanationSummary:
    """Short explanation regenerated on every evaluation.

    ``scenario`` only needs ``evidence`` and ``output_variables`` attributes,
    which keeps this module independent of the scenario bookkeeping.
    """
    evidence: Mapping[str, str] = scenario.evidence
    outputs: Sequence[str] = scenario.output_variables
    priors = {p.variable: p for p in prior_marginals(net, outputs)}
    posts = {p.variable: p for p in posteriors}

    statements: list[TargetStatement] = []
    for vid in outputs:
        var = net.variables[vid]
        for state in var.states:
            prior_p = priors[vid].distribution[state]
            post_p = posts[vid].distribution[state]
            statements.append(
                TargetStatement(
                    variable=vid,
                    variable_name=var.name,
                    state=state,
                    prior=prior_p,
                    posterior=post_p,
                    prior_text=render_probability(prior_p),
                    posterior_text=render_probability(post_p),
                )
            )

    evidence_list = tuple(_evidence_phrases(net, evidence))
    change_statements: tuple[str, ...] = ()
    if evidence:
        change_statements = tuple(_change_sentence(net, s) for s in statements)

    lines: list[str] = []
    for s in statements:
        lines.append(
            f"Without evidence, {s.variable_name} = {s.state} is {s.prior_text}."
        )
    if evidence_list:
        lines.append("Entered evidence: " + "; ".join(evidence_list) + ".")
        lines.extend(change_statements)
    else:
        lines.append("No evidence entered.")
    return ExplanationSummary(
        target_statements=tuple(statements),
        evidence_list=evidence_list,
        change_statements=change_statements,
        text="\n".join(lines),
    )


def _focus_state(net: BayesianNetwork, vid: str) -> str:
    """The state impact sentences track: the variable's leading state."""
    return net.variables[vid].states[0]


def _impact_section(
    net: BayesianNetwork, evidence: Mapping[str, str], outputs: Sequence[str]
) -> str:
    if not evidence:
        return "No evidence entered."
    lines: list[str] = []
    items = list(evidence.items())
    prior = {p.variable: p for p in prior_marginals(net, outputs)}
    for vid in outputs:
        focus = _focus_state(net, vid)
        name = net.variables[vid].name
        before_p = prior[vid].distribution[focus]
        # Walk the evidence in insertion order, reporting each item's shift
        # on top of everything entered before it.
        running: dict[str, str] = {}
        for ev_vid, ev_state in items:
            running[ev_vid] = ev_state
            (after,) = posterior(net, running, [vid])
            after_p = after.distribution[focus]
            if after_p > before_p:
                direction = "raising it"
            elif after_p < before_p:
                direction = "lowering it"
            else:
                direction = "leaving it unchanged"
            lines.append(
                f"Adding {net.variables[ev_vid].name} = {ev_state} moved "
                f"{name} = {focus} from {render_probability(before_p)} to "
                f"{render_probability(after_p)}, {direction}."
            )
            before_p = after_p
        # Interaction note: compare the joint shift against the sum of
        # single-item shifts from the no-evidence baseline.
        base_p = prior[vid].distribution[focus]
        joint_shift = before_p - base_p
        single_sum = 0.0
        for ev_vid, ev_state in items:
            (alone,) = posterior(net, {ev_vid: ev_state}, [vid])
            single_sum += alone.distribution[focus] - base_p
        if len(items) > 1 and abs(joint_shift - single_sum) > INTERACTION_NOTE_THRESHOLD:
            lines.append(
                f"Note: together the evidence items shift {name} = {focus} by "
                f"{joint_shift * 100:+.2f} percentage points, while their individual "
                f"effects would add to {single_sum * 100:+.2f}; the items interact "
                f"rather than acting independently."
            )
    return "\n".join(lines)


def _relevance_section(
    net: BayesianNetwork, evidence: Mapping[str, str], outputs: Sequence[str]
) -> str:
    if not evidence:
        return "No evidence entered."
    lines: list[str] = []
    for ev_vid in evidence:
        ev_name = net.variables[ev_vid].name
        for t in outputs:
            t_name = net.variables[t].name
            forward = _directed_paths(net, ev_vid, t)
            backward = _directed_paths(net, t, ev_vid)
            if backward:
                for path in backward:
                    lines.append(
                        f"{ev_name} is a downstream effect of {t_name} "
                        f"(path: {_render_path(net, path)}), so observing it "
                        f"revises belief in its causes."
                    )
            if forward:
                for path in forward:
                    lines.append(
                        f"{ev_name} causally influences {t_name} "
                        f"(path: {_render_path(net, path)})."
                    )
            if not forward and not backward:
                shared = sorted(
                    set(_sorted_children(net, ev_vid)) & set(_sorted_children(net, t))
                )
                if shared:
                    names = ", ".join(net.variables[c].name for c in shared)
                    lines.append(
                        f"{ev_name} and {t_name} are alternative causes of {names}; "
                        f"observing one changes how much the other is needed to "
                        f"explain the shared effect."
                    )
                else:
                    lines.append(
                        f"{ev_name} has no direct causal path to {t_name}; it bears "
                        f"on it through the rest of the network."
                    )
    return "\n".join(lines)


def _source_reliability_section(
    net: BayesianNetwork, evidence: Mapping[str, str]
) -> str:
    if not evidence:
        return "No evidence entered."
    lines: list[str] = []
    for vid in evidence:
        var = net.variables[vid]
        notes = [n for n in (var.description, var.rationale) if n]
        if notes:
            lines.append(f"{var.name}: " + " ".join(notes))
        else:
            lines.append(f"{var.name}: no reliability annotations recorded.")
    return "\n".join(lines)


def _priors_section(net: BayesianNetwork, outputs: Sequence[str]) -> str:
    lines: list[str] = []
    priors = prior_marginals(net, outputs)
    for result in priors:
        var = net.variables[result.variable]
        for state in var.states:
            p = result.distribution[state]
            lines.append(
                f"Without evidence, {var.name} = {state} is {render_probability(p)}."
            )
    for i, a in enumerate(outputs):
        for b in outputs[i + 1 :]:
            if any(x.from_id == a and x.to_id == b for x in net.arrows):
                lines.append(
                    f"Note: {net.variables[a].name} directly influences "
                    f"{net.variables[b].name}."
                )
            if any(x.from_id == b and x.to_id == a for x in net.arrows):
                lines.append(
                    f"Note: {net.variables[b].name} directly influences "
                    f"{net.variables[a].name}."
                )
    return "\n".join(lines)


def _conclusion_section(
    net: BayesianNetwork, evidence: Mapping[str, str], outputs: Sequence[str]
) -> str:
    lines: list[str] = []
    posts = {p.variable: p for p in posterior(net, evidence, outputs)}
    priors = {p.variable: p for p in prior_marginals(net, outputs)}
    for vid in outputs:
        var = net.variables[vid]
        for state in var.states:
            p = posts[vid].distribution[state]
            if evidence:
                lines.append(
                    f"Given the evidence, {var.name} = {state} is {render_probability(p)}."
                )
            else:
                lines.append(
                    f"Without evidence, {var.name} = {state} is {render_probability(p)}."
                )
    if evidence:
        for vid in outputs:
            var = net.variables[vid]
            focus = _focus_state(net, vid)
            change = classify_change(
                priors[vid].distribution[focus], posts[vid].distribution[focus]
            )
            if change.category == "unchanged":
                lines.append(
                    f"Overall the evidence leaves {var.name} = {focus} in the same "
                    f"band: {change.to_band.value}."
                )
            else:
                lines.append(
                    f"Overall the evidence {change.category} {var.name} = {focus}: "
                    f"{change.from_band.value} before, {change.to_band.value} after."
                )
    return "\n".join(lines)


def detail(net: BayesianNetwork, scenario) -> ExplanationDetail:
    """Detailed explanation with sections aligned to the report template."""
    evidence: Mapping[str, str] = scenario.evidence
    outputs: Sequence[str] = scenario.output_variables
    sections = (
        ("structure", describe_structure(net, outputs, evidence)),
        ("priors", _priors_section(net, outputs)),
        ("source_reliability", _source_reliability_section(net, evidence)),
        ("relevance", _relevance_section(net, evidence, outputs)),
        ("impact", _impact_section(net, evidence, outputs)),
        ("conclusion", _conclusion_section(net, evidence, outputs)),
    )
    return ExplanationDetail(sections=sections)
