"""File-based command line for working on a network without the service.

Subcommands operate on network documents (and optional scenario files)
stored on disk:

    delphinet validate net.json
    delphinet infer net.json --evidence "Var=state" --targets "X,Y"
    delphinet scenario run net.json scenarios.json
    delphinet explain net.json --scenario NAME --level summary|detail
    delphinet report autofill out.html net.json --scenario NAME
    delphinet import-xmlbif in.xml -o out.json

Exit codes: 0 success, 1 validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Mapping, Sequence

from . import explain, reporting
from .bn import jsonio, xmlbif
from .bn.jsonio import content_hash
from .bn.model import BayesianNetwork, validate_network
from .errors import DelphinetError, ParseError, UnknownVariableError
from .inference import Posterior, posterior
from .scenarios import NetworkRef, Scenario, ScenarioWorkspace, evaluate_scenario
from .verbal import render_probability


# ---------------------------------------------------------------------------
# Input handling


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _write_text(path: str | Path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _read_json(path: str):
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def _load_network(path: str) -> BayesianNetwork:
    return jsonio.network_from_json(_read_json(path))


def resolve_variable(net: BayesianNetwork, token: str) -> str:
    """Accept either a variable id or its exact display name."""
    if token in net.variables:
        return token
    matches = [v.id for v in net.variables.values() if v.name == token]
    if len(matches) == 1:
        return matches[0]
    if len(matches) > 1:
        raise UnknownVariableError(
            f"name {token!r} is ambiguous: matches ids {', '.join(matches)}"
        )
    raise UnknownVariableError(f"no variable with id or name {token!r}")


def parse_evidence(net: BayesianNetwork, pairs: Sequence[str]) -> dict[str, str]:
    evidence: dict[str, str] = {}
    for pair in pairs:
        token, sep, state = pair.partition("=")
        if not sep or not token or not state:
            raise UsageError(f"evidence must be VARIABLE=state, got {pair!r}")
        evidence[resolve_variable(net, token)] = state
    return evidence


def parse_targets(net: BayesianNetwork, spec: str | None) -> tuple[str, ...]:
    if not spec:
        flagged = tuple(v.id for v in net.variables.values() if v.is_target)
        return flagged or tuple(net.variables)
    return tuple(
        resolve_variable(net, token.strip())
        for token in spec.split(",")
        if token.strip()
    )


class UsageError(Exception):
    """Bad invocation discovered after argparse (maps to exit code 2)."""


# ---------------------------------------------------------------------------
# Output formatting


def _posterior_lines(net: BayesianNetwork, entry: Posterior) -> list[str]:
    var = net.variables[entry.variable]
    lines = [f"{var.name}:"]
    for state, prob in entry.distribution.items():
        lines.append(f"  {state:<24} {prob * 100:7.2f}%  {render_probability(prob)}")
    return lines


def _print_posteriors(net: BayesianNetwork, posteriors: Sequence[Posterior]) -> None:
    for entry in posteriors:
        print("\n".join(_posterior_lines(net, entry)))


def _evidence_label(net: BayesianNetwork, evidence: Mapping[str, str]) -> str:
    if not evidence:
        return "no evidence"
    return ", ".join(
        f"{net.variables[vid].name}={state}" for vid, state in evidence.items()
    )


# ---------------------------------------------------------------------------
# Scenario files


def _scenario_docs(path: str) -> list[dict]:
    doc = _read_json(path)
    entries = doc.get("scenarios") if isinstance(doc, dict) else doc
    if not isinstance(entries, list):
        raise ParseError(
            f"{path} must be a list of scenarios or an object with a 'scenarios' list"
        )
    for entry in entries:
        if not isinstance(entry, dict) or "name" not in entry:
            raise ParseError("each scenario needs at least a 'name' field")
    return entries


def _workspace_from_file(
    net: BayesianNetwork, path: str | None
) -> ScenarioWorkspace:
    workspace = ScenarioWorkspace(NetworkRef(owner="cli", work_item="net"), net)
    if path is None:
        return workspace
    for entry in _scenario_docs(path):
        raw_evidence = entry.get("evidence", {})
        if not isinstance(raw_evidence, dict):
            raise ParseError(f"scenario {entry['name']!r}: 'evidence' must be an object")
        evidence = {
            resolve_variable(net, token): state
            for token, state in raw_evidence.items()
        }
        outputs = [
            resolve_variable(net, token) for token in entry.get("outputs", [])
        ] or workspace.base.output_variables
        workspace.create(
            net,
            entry["name"],
            evidence,
            outputs,
            owner="cli",
            description=entry.get("description"),
        )
    return workspace


def _pick_scenario(
    net: BayesianNetwork,
    name: str,
    scenarios_path: str | None,
    evidence_pairs: Sequence[str],
) -> Scenario:
    """Resolve --scenario NAME against the base, a scenario file, or ad-hoc
    --evidence flags (which define a one-off scenario of that name)."""
    workspace = _workspace_from_file(net, scenarios_path)
    if evidence_pairs:
        return workspace.create(
            net,
            name if name != "Base" else "ad hoc",
            parse_evidence(net, evidence_pairs),
            workspace.base.output_variables,
            owner="cli",
        )
    for scenario in workspace.scenarios.values():
        if scenario.name == name or scenario.id == name:
            return scenario
    raise UsageError(
        f"no scenario named {name!r}; pass --scenarios FILE or --evidence flags"
    )


# ---------------------------------------------------------------------------
# Subcommands


def cmd_validate(args: argparse.Namespace) -> int:
    net = _load_network(args.network)
    report = validate_network(net)
    if report.ok:
        print(f"valid: {len(net.variables)} variables, {len(net.arrows)} arrows")
        return 0
    for finding in report.findings:
        print(f"{finding.code}: {finding.message}")
    return 1


def cmd_infer(args: argparse.Namespace) -> int:
    net = _load_network(args.network)
    evidence = parse_evidence(net, args.evidence)
    targets = parse_targets(net, args.targets)
    print(f"evidence: {_evidence_label(net, evidence)}")
    _print_posteriors(net, posterior(net, evidence, targets))
    return 0


def cmd_scenario_run(args: argparse.Namespace) -> int:
    net = _load_network(args.network)
    workspace = _workspace_from_file(net, args.scenarios)
    for scenario in workspace.scenarios.values():
        result = evaluate_scenario(net, scenario)
        print(f"== {scenario.name} ({_evidence_label(net, scenario.evidence)})")
        _print_posteriors(net, result.posteriors)
        print(result.summary.text)
        print()
    return 0


def cmd_explain(args: argparse.Namespace) -> int:
    net = _load_network(args.network)
    scenario = _pick_scenario(net, args.scenario, args.scenarios, args.evidence)
    if args.level == "summary":
        result = evaluate_scenario(net, scenario)
        print(result.summary.text)
        return 0
    for section_id, text in explain.detail(net, scenario).sections:
        title = reporting.SECTION_TITLES.get(section_id, section_id)
        print(f"## {title}")
        print(text)
        print()
    return 0


def cmd_report_autofill(args: argparse.Namespace) -> int:
    net = _load_network(args.network)
    scenario = _pick_scenario(net, args.scenario, args.scenarios, args.evidence)
    draft = (
        _read_json(args.draft)
        if args.draft
        else reporting.instantiate_template(title=f"Scenario report: {scenario.name}")
    )
    network_hash = content_hash(net)
    filled = reporting.autofill_from_explanation(
        draft,
        explain.detail(net, scenario),
        detail_network_hash=network_hash,
        current_network_hash=network_hash,
    )
    out = Path(args.output)
    if out.suffix == ".json":
        _write_text(out, json.dumps(filled, indent=2) + "\n")
    else:
        _write_text(out, reporting.render_report_html(filled))
    print(f"wrote {out}")
    return 0


def cmd_import_xmlbif(args: argparse.Namespace) -> int:
    net = xmlbif.import_xmlbif(_read_text(args.input))
    doc = jsonio.network_to_json(net, name=Path(args.input).stem)
    _write_text(
        args.output, json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    )
    print(
        f"imported {len(net.variables)} variables, {len(net.arrows)} arrows "
        f"-> {args.output}"
    )
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="delphinet",
        description="Work on causal Bayesian network documents from files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a network document")
    p_validate.add_argument("network", help="network JSON file")
    p_validate.set_defaults(func=cmd_validate)

    p_infer = sub.add_parser("infer", help="compute posteriors given evidence")
    p_infer.add_argument("network")
    p_infer.add_argument(
        "--evidence",
        action="append",
        default=[],
        metavar="VAR=STATE",
        help="observed state; repeatable; VAR is an id or display name",
    )
    p_infer.add_argument(
        "--targets", metavar="X,Y", help="comma-separated target variables"
    )
    p_infer.set_defaults(func=cmd_infer)

    p_scenario = sub.add_parser("scenario", help="scenario operations")
    scenario_sub = p_scenario.add_subparsers(dest="scenario_command", required=True)
    p_run = scenario_sub.add_parser("run", help="evaluate every scenario in a file")
    p_run.add_argument("network")
    p_run.add_argument("scenarios", help="scenario JSON file")
    p_run.set_defaults(func=cmd_scenario_run)

    p_explain = sub.add_parser("explain", help="explain a scenario's results")
    p_explain.add_argument("network")
    p_explain.add_argument(
        "--scenario", default="Base", help="scenario name (default: Base)"
    )
    p_explain.add_argument(
        "--level", choices=("summary", "detail"), default="summary"
    )
    p_explain.add_argument("--scenarios", help="scenario JSON file to search")
    p_explain.add_argument(
        "--evidence", action="append", default=[], metavar="VAR=STATE",
        help="define the scenario inline instead of loading a file",
    )
    p_explain.set_defaults(func=cmd_explain)

    p_report = sub.add_parser("report", help="report operations")
    report_sub = p_report.add_subparsers(dest="report_command", required=True)
    p_autofill = report_sub.add_parser(
        "autofill", help="fill a report's generated sections from an explanation"
    )
    p_autofill.add_argument(
        "output", help="where to write the result (.json draft or rendered HTML)"
    )
    p_autofill.add_argument("network")
    p_autofill.add_argument("--scenario", default="Base")
    p_autofill.add_argument("--scenarios", help="scenario JSON file to search")
    p_autofill.add_argument(
        "--evidence", action="append", default=[], metavar="VAR=STATE"
    )
    p_autofill.add_argument("--draft", help="existing draft JSON to fill in place")
    p_autofill.set_defaults(func=cmd_report_autofill)

    p_import = sub.add_parser(
        "import-xmlbif", help="convert an XMLBIF file to a network document"
    )
    p_import.add_argument("input")
    p_import.add_argument("-o", "--output", required=True)
    p_import.set_defaults(func=cmd_import_xmlbif)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DelphinetError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
