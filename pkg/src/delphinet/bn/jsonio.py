"""Canonical JSON document format for networks (versioned, schema-checked).

The document mirrors the in-memory types; probabilities are decimal numbers
and unspecified cells are encoded as ``null``.  Loading is lenient about
*semantic* problems (dangling arrows, mis-shaped rows) — those are the job of
``validate_network`` — but strict about document shape.
"""

from __future__ import annotations

import hashlib
import json
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from ..errors import NetworkFormatError
from .model import (
    Arrow,
    BayesianNetwork,
    CanvasLabel,
    Cpt,
    Provenance,
    Variable,
    VariableKind,
)

FORMAT_NAME = "delphinet-network"
FORMAT_VERSION = 1


def _schema() -> dict[str, Any]:
    text = resources.files("delphinet.bn").joinpath("schema/network.schema.json").read_text()
    return json.loads(text)


_VALIDATOR = jsonschema.Draft202012Validator(_schema())


def network_to_json(net: BayesianNetwork, name: str | None = None) -> dict[str, Any]:
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "name": name,
        "variables": [
            {
                "id": v.id,
                "name": v.name,
                "kind": v.kind.value,
                "states": list(v.states),
                "isTarget": v.is_target,
                "description": v.description,
                "rationale": v.rationale,
            }
            for v in net.variables.values()
        ],
        "arrows": [
            {"from": a.from_id, "to": a.to_id, "label": a.label} for a in net.arrows
        ],
        "cpts": [
            {
                "child": cpt.child,
                "parents": list(cpt.parents),
                "rows": [
                    {"combo": list(combo), "cells": dict(row)}
                    for combo, row in cpt.rows.items()
                ],
            }
            for cpt in net.cpts.values()
        ],
        "canvasLabels": [
            {"text": c.text, "x": c.x, "y": c.y} for c in net.canvas_labels
        ],
        "provenance": {
            "author": net.provenance.author,
            "createdAt": net.provenance.created_at,
            "updatedAt": net.provenance.updated_at,
        },
    }


def network_from_json(data: Any) -> BayesianNetwork:
    errors = sorted(_VALIDATOR.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        where = "/".join(str(p) for p in first.absolute_path) or "(root)"
        raise NetworkFormatError(f"network document invalid at {where}: {first.message}")
    net = BayesianNetwork()
    for raw in data["variables"]:
        if raw["id"] in net.variables:
            raise NetworkFormatError(f"duplicate variable id {raw['id']!r}")
        net.variables[raw["id"]] = Variable(
            id=raw["id"],
            name=raw["name"],
            kind=VariableKind(raw["kind"]),
            states=tuple(raw["states"]),
            is_target=raw.get("isTarget", False),
            description=raw.get("description"),
            rationale=raw.get("rationale"),
        )
    net.arrows = [
        Arrow(from_id=raw["from"], to_id=raw["to"], label=raw.get("label"))
        for raw in data["arrows"]
    ]
    for raw in data["cpts"]:
        child = raw["child"]
        if child not in net.variables:
            raise NetworkFormatError(f"CPT for unknown variable id {child!r}")
        if child in net.cpts:
            raise NetworkFormatError(f"duplicate CPT for variable id {child!r}")
        rows: dict[tuple[str, ...], dict[str, float | None]] = {}
        for row in raw["rows"]:
            combo = tuple(row["combo"])
            if combo in rows:
                raise NetworkFormatError(f"duplicate CPT row {combo!r} for {child!r}")
            rows[combo] = {s: p for s, p in row["cells"].items()}
        net.cpts[child] = Cpt(child=child, parents=tuple(raw["parents"]), rows=rows)
    missing = [v for v in net.variables if v not in net.cpts]
    if missing:
        raise NetworkFormatError(f"variables without CPTs: {missing!r}")
    for raw in data.get("canvasLabels", []):
        net.canvas_labels.append(CanvasLabel(text=raw["text"], x=raw.get("x"), y=raw.get("y")))
    prov = data.get("provenance", {})
    net.provenance = Provenance(
        author=prov.get("author"),
        created_at=prov.get("createdAt"),
        updated_at=prov.get("updatedAt"),
    )
    return net


def dumps(net: BayesianNetwork, name: str | None = None) -> str:
    return json.dumps(network_to_json(net, name), indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> BayesianNetwork:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"not valid JSON: {exc}") from exc
    return network_from_json(data)


def save(net: BayesianNetwork, path: str | Path, name: str | None = None) -> None:
    Path(path).write_text(dumps(net, name), encoding="utf-8")


def load(path: str | Path) -> BayesianNetwork:
    return loads(Path(path).read_text(encoding="utf-8"))


def canonical_bytes(net: BayesianNetwork) -> bytes:
    """Deterministic byte encoding, suitable for content addressing."""
    return json.dumps(
        network_to_json(net), sort_keys=True, separators=(",", ":"), ensure_ascii=False
    ).encode("utf-8")


def content_hash(net: BayesianNetwork) -> str:
    return hashlib.sha256(canonical_bytes(net)).hexdigest()
