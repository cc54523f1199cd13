"""Structured analytic report drafts, autofill, and final export.

A report draft is a JSON document with a fixed section skeleton.  Six of
the sections mirror the detailed explanation one-to-one so machine text
can be filled in next to the analyst's own prose; three free sections
(executive summary, assumptions, caveats) bookend them.  Machine text is
kept in a separate ``generated`` slot per section: it is replaced on each
refill and never mixes with what the analyst wrote.
"""

from __future__ import annotations

import hashlib
import html
import json
from pathlib import Path
from typing import Any, Mapping, Sequence

from .errors import IncompatibleSelectionError, StaleExplanationError
from .explain import EXPLANATION_SECTION_IDS, ExplanationDetail

REPORT_KIND = "delphinet-report"

#: Section ids that receive machine-generated explanation text.
ALIGNED_SECTION_IDS: tuple[str, ...] = EXPLANATION_SECTION_IDS

#: All report sections in their fixed template order.
REPORT_SECTION_IDS: tuple[str, ...] = (
    ("executive_summary",) + ALIGNED_SECTION_IDS + ("assumptions", "caveats")
)

SECTION_TITLES: dict[str, str] = {
    "executive_summary": "Executive Summary",
    "structure": "Causal Structure",
    "priors": "Prior Probabilities",
    "source_reliability": "Source Reliability",
    "relevance": "Relevance of the Evidence",
    "impact": "Impact of the Evidence",
    "conclusion": "Conclusion",
    "assumptions": "Assumptions",
    "caveats": "Caveats",
}

#: Marker attached to machine-written blocks so analyst prose and tool
#: prose stay distinguishable all the way into the exported document.
GENERATED_MARKER = "machine-generated"


def instantiate_template(
    questions: Sequence[str] = (), title: str = ""
) -> dict:
    """Create an empty report draft with all nine sections in order.

    Every problem question gets an answer slot inside the conclusion.
    """
    sections = []
    for section_id in REPORT_SECTION_IDS:
        section: dict[str, Any] = {
            "id": section_id,
            "title": SECTION_TITLES[section_id],
            "body": "",
            "generated": None,
        }
        if section_id == "conclusion":
            section["questions"] = [
                {"question": question, "answer": ""} for question in questions
            ]
        sections.append(section)
    return {
        "kind": REPORT_KIND,
        "title": title,
        "sections": sections,
        "explanation_network_hash": None,
    }


def validate_draft(draft: Mapping[str, Any]) -> None:
    """Check the draft skeleton: ids unique, aligned sections in order."""
    sections = draft.get("sections")
    if not isinstance(sections, list):
        raise IncompatibleSelectionError("report draft needs a 'sections' list")
    ids = [s.get("id") for s in sections if isinstance(s, Mapping)]
    if len(ids) != len(sections) or None in ids:
        raise IncompatibleSelectionError("every report section needs an id")
    if len(set(ids)) != len(ids):
        raise IncompatibleSelectionError("report section ids must be unique")
    aligned_present = [i for i in ids if i in ALIGNED_SECTION_IDS]
    expected = [i for i in ALIGNED_SECTION_IDS if i in aligned_present]
    if aligned_present != expected:
        raise IncompatibleSelectionError(
            "explanation-aligned sections must appear in their fixed order"
        )


def section_of(draft: Mapping[str, Any], section_id: str) -> Mapping[str, Any]:
    for section in draft.get("sections", []):
        if isinstance(section, Mapping) and section.get("id") == section_id:
            return section
    raise IncompatibleSelectionError(f"draft has no section {section_id!r}")


def autofill_from_explanation(
    draft: Mapping[str, Any],
    detail: ExplanationDetail,
    *,
    detail_network_hash: str,
    current_network_hash: str,
) -> dict:
    """Fill each aligned section's generated block from the explanation.

    Analyst-written ``body`` text is never touched; a second autofill
    replaces the previous generated block.  A detail computed against a
    network that has changed since is refused.
    """
    if detail_network_hash != current_network_hash:
        raise StaleExplanationError(
            "the explanation was computed from an older network version; "
            "re-evaluate before filling the report"
        )
    validate_draft(draft)
    filled = json.loads(json.dumps(draft))
    by_id = {
        section["id"]: section
        for section in filled["sections"]
        if isinstance(section, Mapping)
    }
    for section_id in ALIGNED_SECTION_IDS:
        section = by_id.get(section_id)
        if section is None:
            raise IncompatibleSelectionError(
                f"draft is missing the aligned section {section_id!r}"
            )
        section["generated"] = detail.section(section_id)
    filled["explanation_network_hash"] = current_network_hash
    return filled


# ---------------------------------------------------------------------------
# Export


def _paragraphs(text: str) -> str:
    blocks = [b.strip() for b in text.split("\n\n") if b.strip()]
    return "\n".join(f"<p>{html.escape(block)}</p>" for block in blocks)


def render_report_html(draft: Mapping[str, Any]) -> str:
    """Render a draft as a self-contained portable HTML document."""
    title = html.escape(draft.get("title") or "Analytic Report")
    parts = [
        "<!doctype html>",
        '<html lang="en">',
        "<head>",
        '<meta charset="utf-8">',
        f"<title>{title}</title>",
        "<style>",
        "body { font-family: Georgia, serif; max-width: 48rem; margin: 2rem auto; }",
        f".{GENERATED_MARKER} {{ background: #f4f6fa; border-left: 4px solid #7a90b8; "
        "padding: 0.5rem 1rem; }",
        f".{GENERATED_MARKER} .origin {{ font-size: 0.8rem; color: #555; "
        "text-transform: uppercase; letter-spacing: 0.05em; }",
        "dt { font-weight: bold; }",
        "</style>",
        "</head>",
        "<body>",
        f"<h1>{title}</h1>",
    ]
    for section in draft.get("sections", []):
        section_id = html.escape(str(section.get("id", "")))
        section_title = html.escape(
            section.get("title") or SECTION_TITLES.get(section.get("id", ""), "")
        )
        parts.append(f'<section id="{section_id}">')
        parts.append(f"<h2>{section_title}</h2>")
        body = section.get("body") or ""
        if body.strip():
            parts.append(_paragraphs(body))
        generated = section.get("generated")
        if generated:
            parts.append(
                f'<div class="{GENERATED_MARKER}" data-provenance="{GENERATED_MARKER}">'
            )
            parts.append(f'<div class="origin">{GENERATED_MARKER}</div>')
            parts.append(_paragraphs(generated))
            parts.append("</div>")
        for slot in section.get("questions", []):
            parts.append("<dl>")
            parts.append(f"<dt>{html.escape(slot.get('question', ''))}</dt>")
            parts.append(f"<dd>{html.escape(slot.get('answer', '')) or '&mdash;'}</dd>")
            parts.append("</dl>")
        parts.append("</section>")
    parts.append("</body>")
    parts.append("</html>")
    return "\n".join(parts)


def _canonical(doc: Any) -> bytes:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def build_export_bundle(
    out_dir: str | Path,
    report: Mapping[str, Any],
    network: Mapping[str, Any] | None = None,
    scenarios: Sequence[Mapping[str, Any]] | None = None,
) -> dict:
    """Write ``report.html``, ``network.json``, ``scenarios.json`` and a
    manifest with content hashes; returns the manifest document."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files: dict[str, bytes] = {
        "report.html": render_report_html(report).encode("utf-8"),
        "network.json": _canonical(network if network is not None else {}),
        "scenarios.json": _canonical(list(scenarios) if scenarios is not None else []),
    }
    manifest: dict[str, Any] = {"format": "delphinet-export", "version": 1, "files": {}}
    for name, data in files.items():
        (out / name).write_bytes(data)
        manifest["files"][name] = {
            "sha256": hashlib.sha256(data).hexdigest(),
            "bytes": len(data),
        }
    (out / "manifest.json").write_bytes(_canonical(manifest))
    return manifest
