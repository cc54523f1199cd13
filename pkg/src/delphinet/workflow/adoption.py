"""Copying selected elements of a peer's shared work into another draft.

Selections are step-specific:

* step 1 — ``hypothesis:<index>`` / ``evidence:<index>`` entries;
* step 2 — variable names from the source variable list;
* steps 3-4 — network variable ids plus ``<from>-><to>`` arrows;
* step 5 — scenario names;
* any step — the single token ``"*"`` replaces the whole payload.

Adopted elements carry a provenance note naming the source pseudonym and
shared version.  Identifier remapping keeps the destination network
self-consistent; arrows are only adopted when both endpoints exist in the
destination or are co-adopted.
"""

from __future__ import annotations

import dataclasses
import json
from typing import Any, Mapping, Sequence

from ..bn import jsonio
from ..bn.model import Arrow, add_arrow, add_variable, set_cpt_row
from ..errors import IncompatibleSelectionError

FULL_COPY = "*"


def _copy(value: Any) -> Any:
    return json.loads(json.dumps(value))


def _provenance_note(provenance: str) -> str:
    return f"adopted from {provenance}"


def adopt(
    step: int,
    source: Mapping[str, Any],
    target: Mapping[str, Any],
    selection: Sequence[str],
    provenance: str,
) -> dict:
    """Return a new target payload with the selected elements merged in."""
    if not selection:
        raise IncompatibleSelectionError("nothing selected to adopt")
    if tuple(selection) == (FULL_COPY,):
        merged = _copy(dict(source))
        merged["adopted_from"] = provenance
        return merged
    if FULL_COPY in selection:
        raise IncompatibleSelectionError(
            "'*' replaces the whole artifact and cannot be combined"
        )
    if step == 1:
        return _adopt_step1(source, target, selection, provenance)
    if step == 2:
        return _adopt_step2(source, target, selection, provenance)
    if step in (3, 4):
        return _adopt_network(step, source, target, selection, provenance)
    if step == 5:
        return _adopt_step5(source, target, selection, provenance)
    raise IncompatibleSelectionError(
        f"step {step} supports whole-artifact adoption ('*') only"
    )


def _adopt_step1(
    source: Mapping[str, Any],
    target: Mapping[str, Any],
    selection: Sequence[str],
    provenance: str,
) -> dict:
    merged = _copy(dict(target))
    merged.setdefault("hypotheses", [])
    merged.setdefault("evidence", [])
    lists = {"hypothesis": "hypotheses", "evidence": "evidence"}
    for token in selection:
        kind, _, index_text = token.partition(":")
        key = lists.get(kind)
        if key is None or not index_text.isdigit():
            raise IncompatibleSelectionError(
                f"step 1 selections look like 'hypothesis:0', got {token!r}"
            )
        entries = source.get(key, [])
        index = int(index_text)
        if index >= len(entries):
            raise IncompatibleSelectionError(
                f"{token!r} does not exist in the source work"
            )
        entry = entries[index]
        if isinstance(entry, Mapping):
            adopted = _copy(dict(entry))
        else:
            adopted = {"text": str(entry)}
        adopted["provenance"] = _provenance_note(provenance)
        merged[key].append(adopted)
    return merged


def _adopt_step2(
    source: Mapping[str, Any],
    target: Mapping[str, Any],
    selection: Sequence[str],
    provenance: str,
) -> dict:
    merged = _copy(dict(target))
    merged.setdefault("variables", [])
    existing = {
        entry.get("name")
        for entry in merged["variables"]
        if isinstance(entry, Mapping)
    }
    by_name = {
        entry.get("name"): entry
        for entry in source.get("variables", [])
        if isinstance(entry, Mapping)
    }
    for name in selection:
        entry = by_name.get(name)
        if entry is None:
            raise IncompatibleSelectionError(
                f"source work has no variable named {name!r}"
            )
        if name in existing:
            raise IncompatibleSelectionError(
                f"a variable named {name!r} already exists in the target"
            )
        adopted = _copy(dict(entry))
        adopted["provenance"] = _provenance_note(provenance)
        merged["variables"].append(adopted)
        existing.add(name)
    return merged


def _fresh_id(base: str, taken: set[str]) -> str:
    candidate = base
    suffix = 2
    while candidate in taken:
        candidate = f"{base}_{suffix}"
        suffix += 1
    return candidate


def _adopt_network(
    step: int,
    source: Mapping[str, Any],
    target: Mapping[str, Any],
    selection: Sequence[str],
    provenance: str,
) -> dict:
    source_doc = source.get("network")
    if not source_doc:
        raise IncompatibleSelectionError("source work has no network to adopt from")
    source_net = jsonio.network_from_json(source_doc)
    target_doc = target.get("network")
    if target_doc:
        target_net = jsonio.network_from_json(target_doc)
    else:
        target_net = jsonio.network_from_json(
            {"format": jsonio.FORMAT_NAME, "version": jsonio.FORMAT_VERSION,
             "variables": [], "arrows": [], "cpts": []}
        )

    variable_ids = [t for t in selection if "->" not in t]
    arrow_tokens = [t for t in selection if "->" in t]

    # Source id -> destination id.  Names are the cross-network identity:
    # a selected variable whose name already exists in the target resolves
    # to the existing variable instead of a copy.
    target_names = {v.name: v.id for v in target_net.variables.values()}
    mapping: dict[str, str] = {}
    note = _provenance_note(provenance)
    for var_id in variable_ids:
        src_var = source_net.variables.get(var_id)
        if src_var is None:
            raise IncompatibleSelectionError(
                f"source network has no variable with id {var_id!r}"
            )
        if src_var.name in target_names:
            mapping[var_id] = target_names[src_var.name]
            continue
        new_id = _fresh_id(src_var.id, set(target_net.variables))
        rationale = f"{src_var.rationale} [{note}]" if src_var.rationale else f"[{note}]"
        target_net = add_variable(
            target_net,
            dataclasses.replace(src_var, id=new_id, rationale=rationale),
        )
        mapping[var_id] = new_id
        target_names[src_var.name] = new_id

    def _resolve(endpoint: str, token: str) -> str:
        if endpoint in mapping:
            return mapping[endpoint]
        src_var = source_net.variables.get(endpoint)
        if src_var is not None and src_var.name in target_names:
            return target_names[src_var.name]
        raise IncompatibleSelectionError(
            f"arrow {token!r} needs endpoint {endpoint!r} adopted or present"
        )

    for token in arrow_tokens:
        from_src, _, to_src = token.partition("->")
        from_id = _resolve(from_src, token)
        to_id = _resolve(to_src, token)
        if from_id == to_id:
            raise IncompatibleSelectionError(
                f"arrow {token!r} collapses to a self-loop in the target"
            )
        if any(a.from_id == from_id and a.to_id == to_id for a in target_net.arrows):
            continue
        target_net = add_arrow(target_net, Arrow(from_id=from_id, to_id=to_id))

    if step == 4:
        target_net = _copy_matching_parameters(source_net, target_net, mapping)

    merged = _copy(dict(target))
    merged["network"] = jsonio.network_to_json(target_net)
    return merged


def _copy_matching_parameters(source_net, target_net, mapping: Mapping[str, str]):
    """Copy CPT rows for adopted variables whose parent sets carried over.

    Rows transfer only when the destination variable ended up with exactly
    the parents (by name) the source variable had, so the probabilities
    keep their meaning.
    """
    source_names = {v.id: v.name for v in source_net.variables.values()}
    target_names = {v.id: v.name for v in target_net.variables.values()}
    for src_id, dst_id in mapping.items():
        src_cpt = source_net.cpts[src_id]
        dst_cpt = target_net.cpts[dst_id]
        src_parent_names = [source_names[p] for p in src_cpt.parents]
        dst_parent_names = [target_names[p] for p in dst_cpt.parents]
        if sorted(src_parent_names) != sorted(dst_parent_names):
            continue
        if source_net.variables[src_id].states != target_net.variables[dst_id].states:
            continue
        # Reorder each source combo into the destination's parent order.
        order = [src_parent_names.index(name) for name in dst_parent_names]
        for combo, row in src_cpt.rows.items():
            dst_combo = tuple(combo[i] for i in order)
            target_net = set_cpt_row(target_net, dst_id, dst_combo, dict(row))
    return target_net


def _adopt_step5(
    source: Mapping[str, Any],
    target: Mapping[str, Any],
    selection: Sequence[str],
    provenance: str,
) -> dict:
    merged = _copy(dict(target))
    merged.setdefault("scenarios", [])
    existing = {
        entry.get("name")
        for entry in merged["scenarios"]
        if isinstance(entry, Mapping)
    }
    by_name = {
        entry.get("name"): entry
        for entry in source.get("scenarios", [])
        if isinstance(entry, Mapping)
    }
    for name in selection:
        entry = by_name.get(name)
        if entry is None:
            raise IncompatibleSelectionError(
                f"source work has no scenario named {name!r}"
            )
        if name in existing:
            raise IncompatibleSelectionError(
                f"a scenario named {name!r} already exists in the target"
            )
        adopted = _copy(dict(entry))
        adopted["provenance"] = _provenance_note(provenance)
        merged["scenarios"].append(adopted)
        existing.add(name)
    return merged
