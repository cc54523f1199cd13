"""Validation and canonical encoding of per-step work payloads.

Each workflow step stores a different kind of artifact.  Payloads are
stored internally as canonical JSON strings so state snapshots are
immutable and content hashes are stable.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from ..bn import jsonio
from ..bn.model import validate_network
from ..errors import EmptyContentError, IncompatibleSelectionError

STEP_COUNT = 6

#: Human-readable names for the six workflow steps, indexed by step number.
STEP_NAMES = {
    1: "Understand the problem",
    2: "Identify variables",
    3: "Build the structure",
    4: "Quantify relationships",
    5: "Explore the model",
    6: "Write the report",
}


def _require_mapping(content: Any, step: int) -> Mapping[str, Any]:
    if not isinstance(content, Mapping):
        raise IncompatibleSelectionError(
            f"step {step} payload must be a JSON object, got {type(content).__name__}"
        )
    return content


def _require_list(content: Mapping[str, Any], key: str, step: int) -> list:
    value = content.get(key, [])
    if not isinstance(value, list):
        raise IncompatibleSelectionError(
            f"step {step} payload field {key!r} must be a list"
        )
    return value


def _validate_network_doc(doc: Any, step: int) -> None:
    if not isinstance(doc, Mapping):
        raise IncompatibleSelectionError(
            f"step {step} payload field 'network' must be a network document"
        )
    network = jsonio.network_from_json(doc)
    report = validate_network(network)
    if not report.ok:
        first = report.findings[0]
        raise IncompatibleSelectionError(
            f"step {step} network is invalid: {first.code}: {first.message}"
        )


def validate_payload(step: int, content: Any) -> None:
    """Check that ``content`` has the shape required for ``step``.

    Drafts may be empty; emptiness is only rejected at share time (see
    :func:`payload_is_empty`).  Shape violations raise
    :class:`IncompatibleSelectionError`, invalid embedded networks raise
    the underlying format error.
    """
    if not 1 <= step <= STEP_COUNT:
        raise IncompatibleSelectionError(f"step must be 1..{STEP_COUNT}, got {step}")
    content = _require_mapping(content, step)
    if step == 1:
        _require_list(content, "hypotheses", step)
        _require_list(content, "evidence", step)
        notes = content.get("notes", "")
        if not isinstance(notes, str):
            raise IncompatibleSelectionError("step 1 payload field 'notes' must be a string")
    elif step == 2:
        variables = _require_list(content, "variables", step)
        for entry in variables:
            if not isinstance(entry, Mapping) or "name" not in entry:
                raise IncompatibleSelectionError(
                    "step 2 variables must be objects with a 'name' field"
                )
    elif step in (3, 4):
        if "network" in content and content["network"] is not None:
            _validate_network_doc(content["network"], step)
    elif step == 5:
        if "network" in content and content["network"] is not None:
            _validate_network_doc(content["network"], step)
        scenarios = _require_list(content, "scenarios", step)
        for entry in scenarios:
            if not isinstance(entry, Mapping) or "name" not in entry:
                raise IncompatibleSelectionError(
                    "step 5 scenarios must be objects with a 'name' field"
                )
    elif step == 6:
        report = content.get("report")
        if report is not None:
            if not isinstance(report, Mapping) or not isinstance(
                report.get("sections", []), list
            ):
                raise IncompatibleSelectionError(
                    "step 6 payload field 'report' must contain a 'sections' list"
                )


def payload_is_empty(step: int, content: Mapping[str, Any]) -> bool:
    """Return True when the payload carries no shareable substance."""
    if step == 1:
        return not content.get("hypotheses") and not content.get("evidence") and not content.get("notes")
    if step == 2:
        return not content.get("variables")
    if step in (3, 4):
        network = content.get("network")
        return not network or not network.get("variables")
    if step == 5:
        network = content.get("network")
        return (not network or not network.get("variables")) and not content.get("scenarios")
    if step == 6:
        report = content.get("report")
        if not report:
            return True
        sections = report.get("sections", [])
        return not any(
            (section.get("body") or "").strip() or (section.get("generated") or "").strip()
            for section in sections
            if isinstance(section, Mapping)
        )
    return True


def canonical_payload(content: Mapping[str, Any]) -> str:
    """Encode a payload as deterministic JSON for immutable storage."""
    return json.dumps(content, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def decode_payload(encoded: str) -> dict:
    return json.loads(encoded)


def require_shareable(step: int, content: Mapping[str, Any]) -> None:
    """Raise :class:`EmptyContentError` when a payload may not be shared."""
    if payload_is_empty(step, content):
        raise EmptyContentError(
            f"cannot share step {step} work with no content"
        )
