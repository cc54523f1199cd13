"""Discrete causal Bayesian network: types, construction operations, validation.

All operations are pure: they take a network and return a new network (or
raise), so callers can hold snapshots without defensive copying.  Mutation
ordering is the caller's concern.
"""

from __future__ import annotations

import copy
import itertools
import uuid
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, Optional

from ..errors import (
    CycleError,
    DuplicateArrowError,
    DuplicateNameError,
    InvalidStatesError,
    OutOfRangeError,
    RowOverflowError,
    RowSumError,
    SelfLoopError,
    UnknownStateError,
    UnknownVariableError,
)

ROW_SUM_TOLERANCE = 1e-6
SUM_EPSILON = 1e-9

ParentCombo = tuple[str, ...]
Row = dict[str, Optional[float]]


class VariableKind(str, Enum):
    BOOLEAN = "Boolean"
    BINARY = "Binary"
    ORDERED = "Ordered"
    UNORDERED = "Unordered"


BOOLEAN_STATES = ("True", "False")


@dataclass(frozen=True)
class Variable:
    """A discrete random variable.

    ``states`` is the ordered list of state names; for Ordered variables the
    list order is the rank order.  Ids are opaque and immutable — renames
    never touch them, so references from forums and rationales stay valid.
    """

    id: str
    name: str
    kind: VariableKind
    states: tuple[str, ...]
    is_target: bool = False
    description: Optional[str] = None
    rationale: Optional[str] = None


@dataclass(frozen=True)
class Arrow:
    from_id: str
    to_id: str
    label: Optional[str] = None


@dataclass(frozen=True)
class CanvasLabel:
    text: str
    x: Optional[float] = None
    y: Optional[float] = None


@dataclass(frozen=True)
class Provenance:
    author: Optional[str] = None
    created_at: Optional[str] = None
    updated_at: Optional[str] = None


@dataclass
class Cpt:
    """Conditional probability table for one variable.

    Rows are keyed by a tuple of parent states, one per parent in ``parents``
    order; a variable with no parents has the single key ``()``.  Cell value
    ``None`` means "not specified yet" — completion distributes the unused
    mass uniformly over those cells.
    """

    child: str
    parents: ParentCombo = ()
    rows: dict[ParentCombo, Row] = field(default_factory=dict)


@dataclass
class BayesianNetwork:
    variables: dict[str, Variable] = field(default_factory=dict)
    arrows: list[Arrow] = field(default_factory=list)
    cpts: dict[str, Cpt] = field(default_factory=dict)
    canvas_labels: list[CanvasLabel] = field(default_factory=list)
    provenance: Provenance = field(default_factory=Provenance)


@dataclass(frozen=True)
class ValidationFinding:
    code: str
    message: str
    where: Optional[str] = None


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[ValidationFinding, ...]
    topological_order: Optional[tuple[str, ...]]

    @property
    def ok(self) -> bool:
        return not self.findings


def new_network(author: Optional[str] = None) -> BayesianNetwork:
    return BayesianNetwork(provenance=Provenance(author=author))


def make_variable(
    name: str,
    kind: VariableKind | str,
    states: Optional[Iterable[str]] = None,
    *,
    is_target: bool = False,
    description: Optional[str] = None,
    rationale: Optional[str] = None,
    var_id: Optional[str] = None,
) -> Variable:
    """Build a variable, validating states against the kind.

    Boolean variables always get the fixed (True, False) pair; passing
    anything else is an error.  Binary needs exactly two states, Ordered and
    Unordered at least two.
    """
    kind = VariableKind(kind)
    state_tuple = tuple(states) if states is not None else None
    if kind is VariableKind.BOOLEAN:
        if state_tuple is None:
            state_tuple = BOOLEAN_STATES
        elif state_tuple != BOOLEAN_STATES:
            raise InvalidStatesError(
                f"Boolean variable must have states {list(BOOLEAN_STATES)}, got {list(state_tuple)}"
            )
    else:
        if state_tuple is None:
            raise InvalidStatesError(f"{kind.value} variable requires explicit states")
        minimum = 2
        if kind is VariableKind.BINARY and len(state_tuple) != 2:
            raise InvalidStatesError(
                f"Binary variable needs exactly 2 states, got {len(state_tuple)}"
            )
        if len(state_tuple) < minimum:
            raise InvalidStatesError(
                f"{kind.value} variable needs at least {minimum} states, got {len(state_tuple)}"
            )
    if any(not s for s in state_tuple):
        raise InvalidStatesError("state names must be non-empty")
    if len(set(state_tuple)) != len(state_tuple):
        raise InvalidStatesError(f"duplicate state names in {list(state_tuple)}")
    return Variable(
        id=var_id or uuid.uuid4().hex[:12],
        name=name,
        kind=kind,
        states=state_tuple,
        is_target=is_target,
        description=description,
        rationale=rationale,
    )


def parents_of(net: BayesianNetwork, var_id: str) -> tuple[str, ...]:
    """Parent ids of a variable, in the order recorded on its CPT."""
    _require_variable(net, var_id)
    return net.cpts[var_id].parents


def children_of(net: BayesianNetwork, var_id: str) -> tuple[str, ...]:
    return tuple(a.to_id for a in net.arrows if a.from_id == var_id)


def _require_variable(net: BayesianNetwork, var_id: str) -> Variable:
    var = net.variables.get(var_id)
    if var is None:
        raise UnknownVariableError(f"no variable with id {var_id!r}")
    return var


def _fresh_rows(net: BayesianNetwork, parents: ParentCombo, child: Variable) -> dict[ParentCombo, Row]:
    """All-unspecified rows for the Cartesian product of parent states."""
    parent_states = [net.variables[p].states for p in parents]
    return {
        combo: {s: None for s in child.states}
        for combo in itertools.product(*parent_states)
    }


def add_variable(net: BayesianNetwork, v: Variable) -> BayesianNetwork:
    if any(existing.name == v.name for existing in net.variables.values()):
        raise DuplicateNameError(f"a variable named {v.name!r} already exists")
    if v.id in net.variables:
        raise DuplicateNameError(f"a variable with id {v.id!r} already exists")
    # Defend against hand-built Variable instances that bypassed make_variable.
    make_variable(v.name, v.kind, v.states, var_id=v.id)
    out = copy.deepcopy(net)
    out.variables[v.id] = v
    out.cpts[v.id] = Cpt(child=v.id, parents=(), rows={(): {s: None for s in v.states}})
    return out


def rename_variable(net: BayesianNetwork, var_id: str, new_name: str) -> BayesianNetwork:
    var = _require_variable(net, var_id)
    if any(other.name == new_name and other.id != var_id for other in net.variables.values()):
        raise DuplicateNameError(f"a variable named {new_name!r} already exists")
    out = copy.deepcopy(net)
    out.variables[var_id] = replace(var, name=new_name)
    return out


def update_variable(
    net: BayesianNetwork,
    var_id: str,
    *,
    is_target: Optional[bool] = None,
    description: Optional[str] = None,
    rationale: Optional[str] = None,
) -> BayesianNetwork:
    """Edit annotation fields that never affect CPT shape."""
    var = _require_variable(net, var_id)
    out = copy.deepcopy(net)
    updated = var
    if is_target is not None:
        updated = replace(updated, is_target=is_target)
    if description is not None:
        updated = replace(updated, description=description)
    if rationale is not None:
        updated = replace(updated, rationale=rationale)
    out.variables[var_id] = updated
    return out


def set_variable_states(
    net: BayesianNetwork, var_id: str, states: Iterable[str], kind: Optional[VariableKind | str] = None
) -> BayesianNetwork:
    """Replace a variable's state list (and optionally its kind).

    Changing the state set invalidates every table that mentions the old
    states, so the variable's own CPT and each child's CPT are rebuilt fully
    unspecified.
    """
    var = _require_variable(net, var_id)
    new_kind = VariableKind(kind) if kind is not None else var.kind
    candidate = make_variable(var.name, new_kind, states, var_id=var.id,
                              is_target=var.is_target, description=var.description,
                              rationale=var.rationale)
    out = copy.deepcopy(net)
    out.variables[var_id] = candidate
    out.cpts[var_id] = Cpt(
        child=var_id,
        parents=out.cpts[var_id].parents,
        rows=_fresh_rows(out, out.cpts[var_id].parents, candidate),
    )
    for child_id in children_of(out, var_id):
        cpt = out.cpts[child_id]
        out.cpts[child_id] = Cpt(
            child=child_id,
            parents=cpt.parents,
            rows=_fresh_rows(out, cpt.parents, out.variables[child_id]),
        )
    return out


def rename_state(net: BayesianNetwork, var_id: str, old: str, new: str) -> BayesianNetwork:
    """Rename one state, rewriting every CPT key/cell that mentions it."""
    var = _require_variable(net, var_id)
    if old not in var.states:
        raise UnknownStateError(f"{var.name!r} has no state {old!r}")
    if new in var.states:
        raise DuplicateNameError(f"{var.name!r} already has a state {new!r}")
    if var.kind is VariableKind.BOOLEAN:
        raise InvalidStatesError("Boolean states are fixed")
    if not new:
        raise InvalidStatesError("state names must be non-empty")
    out = copy.deepcopy(net)
    out.variables[var_id] = replace(
        var, states=tuple(new if s == old else s for s in var.states)
    )
    own = out.cpts[var_id]
    own.rows = {
        combo: {(new if s == old else s): p for s, p in row.items()}
        for combo, row in own.rows.items()
    }
    for child_id in children_of(out, var_id):
        cpt = out.cpts[child_id]
        axis = cpt.parents.index(var_id)
        cpt.rows = {
            tuple(new if (i == axis and s == old) else s for i, s in enumerate(combo)): row
            for combo, row in cpt.rows.items()
        }
    return out


def _path_between(
    net: BayesianNetwork, start: str, goal: str, allow_trivial: bool = True
) -> Optional[list[str]]:
    """Shortest directed path start→goal along existing arrows, or None.

    With ``allow_trivial`` false, ``start == goal`` demands a real round
    trip through at least one arrow (used for cycle hunting)."""
    if start == goal and allow_trivial:
        return [start]
    adjacency: dict[str, list[str]] = {}
    for a in net.arrows:
        adjacency.setdefault(a.from_id, []).append(a.to_id)
    seen = {start}
    queue: deque[list[str]] = deque([[start]])
    while queue:
        path = queue.popleft()
        for nxt in adjacency.get(path[-1], ()):
            if nxt == goal:
                return path + [nxt]
            if nxt not in seen:
                seen.add(nxt)
                queue.append(path + [nxt])
    return None


def add_arrow(net: BayesianNetwork, a: Arrow) -> BayesianNetwork:
    _require_variable(net, a.from_id)
    _require_variable(net, a.to_id)
    if a.from_id == a.to_id:
        raise SelfLoopError(f"arrow from {a.from_id!r} to itself")
    if any(x.from_id == a.from_id and x.to_id == a.to_id for x in net.arrows):
        raise DuplicateArrowError(f"arrow {a.from_id!r}->{a.to_id!r} already present")
    back_path = _path_between(net, a.to_id, a.from_id)
    if back_path is not None:
        cycle = [net.variables[v].name for v in back_path] + [net.variables[a.to_id].name]
        raise CycleError(
            f"arrow would close the cycle {' -> '.join(cycle)}", cycle=cycle
        )
    out = copy.deepcopy(net)
    out.arrows.append(a)
    # Re-key the child's CPT: the new parent becomes the last axis and every
    # existing row is replicated across its states (child initially
    # independent of the new parent).
    child = out.variables[a.to_id]
    cpt = out.cpts[a.to_id]
    new_parent_states = out.variables[a.from_id].states
    new_rows: dict[ParentCombo, Row] = {}
    for combo, row in cpt.rows.items():
        for ps in new_parent_states:
            new_rows[combo + (ps,)] = dict(row)
    out.cpts[a.to_id] = Cpt(child=child.id, parents=cpt.parents + (a.from_id,), rows=new_rows)
    return out


def _row_fill_values(row: Row, states: tuple[str, ...]) -> dict[str, float]:
    """Row with the uniform-residual rule applied (pure function of the row)."""
    specified = {s: p for s, p in row.items() if p is not None}
    total = sum(specified.values())
    blanks = [s for s in states if row.get(s) is None]
    if blanks:
        share = max(0.0, 1.0 - total) / len(blanks)
        return {s: (row[s] if row.get(s) is not None else share) for s in states}
    return {s: row[s] for s in states}  # type: ignore[misc]


def _marginalize_parent_axis(
    cpt: Cpt, axis: int, parent_states: tuple[str, ...], child_states: tuple[str, ...]
) -> dict[ParentCombo, Row]:
    """Average rows uniformly over one parent axis.

    Groups of rows that are entirely unspecified collapse to an unspecified
    row; otherwise each contributing row is completed (uniform residual) and
    the group is averaged cell-wise, yielding a fully specified row.
    """
    grouped: dict[ParentCombo, list[Row]] = {}
    for combo, row in cpt.rows.items():
        reduced = combo[:axis] + combo[axis + 1 :]
        grouped.setdefault(reduced, []).append(row)
    out: dict[ParentCombo, Row] = {}
    for reduced, rows in grouped.items():
        if all(all(p is None for p in row.values()) for row in rows):
            out[reduced] = {s: None for s in child_states}
            continue
        filled = [_row_fill_values(row, child_states) for row in rows]
        out[reduced] = {
            s: sum(f[s] for f in filled) / len(filled) for s in child_states
        }
    return out


def remove_arrow(net: BayesianNetwork, from_id: str, to_id: str) -> BayesianNetwork:
    _require_variable(net, from_id)
    _require_variable(net, to_id)
    index = next(
        (i for i, a in enumerate(net.arrows) if a.from_id == from_id and a.to_id == to_id),
        None,
    )
    if index is None:
        raise UnknownVariableError(f"no arrow {from_id!r}->{to_id!r}")
    out = copy.deepcopy(net)
    del out.arrows[index]
    cpt = out.cpts[to_id]
    axis = cpt.parents.index(from_id)
    child = out.variables[to_id]
    out.cpts[to_id] = Cpt(
        child=to_id,
        parents=cpt.parents[:axis] + cpt.parents[axis + 1 :],
        rows=_marginalize_parent_axis(cpt, axis, out.variables[from_id].states, child.states),
    )
    return out


def remove_variable(net: BayesianNetwork, var_id: str) -> BayesianNetwork:
    """Delete a variable, cascading to incident arrows and children's CPTs."""
    _require_variable(net, var_id)
    out = copy.deepcopy(net)
    for child_id in children_of(out, var_id):
        cpt = out.cpts[child_id]
        axis = cpt.parents.index(var_id)
        out.cpts[child_id] = Cpt(
            child=child_id,
            parents=cpt.parents[:axis] + cpt.parents[axis + 1 :],
            rows=_marginalize_parent_axis(
                cpt, axis, out.variables[var_id].states, out.variables[child_id].states
            ),
        )
    out.arrows = [a for a in out.arrows if var_id not in (a.from_id, a.to_id)]
    del out.variables[var_id]
    del out.cpts[var_id]
    return out


def _resolve_combo(
    net: BayesianNetwork, cpt: Cpt, parent_combo: Mapping[str, str] | ParentCombo
) -> ParentCombo:
    """Accept a combo as a parent-id→state map or an already-ordered tuple."""
    if isinstance(parent_combo, Mapping):
        extra = set(parent_combo) - set(cpt.parents)
        if extra:
            raise UnknownVariableError(
                f"{sorted(extra)!r} are not parents of {net.variables[cpt.child].name!r}"
            )
        missing = [p for p in cpt.parents if p not in parent_combo]
        if missing:
            names = [net.variables[p].name for p in missing]
            raise UnknownStateError(f"parent combination missing states for {names!r}")
        combo = tuple(parent_combo[p] for p in cpt.parents)
    else:
        combo = tuple(parent_combo)
    if combo not in cpt.rows:
        raise UnknownStateError(
            f"no CPT row {combo!r} for {net.variables[cpt.child].name!r}"
        )
    return combo


def set_cpt_entry(
    net: BayesianNetwork,
    child: str,
    parent_combo: Mapping[str, str] | ParentCombo,
    child_state: str,
    p: Optional[float],
) -> BayesianNetwork:
    """Record one probability as explicitly specified (None clears the cell)."""
    var = _require_variable(net, child)
    cpt = net.cpts[child]
    combo = _resolve_combo(net, cpt, parent_combo)
    if child_state not in var.states:
        raise UnknownStateError(f"{var.name!r} has no state {child_state!r}")
    if p is not None:
        if not 0.0 <= p <= 1.0:
            raise OutOfRangeError(f"probability {p!r} outside [0, 1]")
        others = sum(
            q
            for s, q in net.cpts[child].rows[combo].items()
            if s != child_state and q is not None
        )
        if others + p > 1.0 + SUM_EPSILON:
            raise RowOverflowError(
                f"row {combo!r} of {var.name!r}: specified sum {others + p:.9f} exceeds 1"
            )
    out = copy.deepcopy(net)
    out.cpts[child].rows[combo][child_state] = p
    return out


def set_cpt_row(
    net: BayesianNetwork,
    child: str,
    parent_combo: Mapping[str, str] | ParentCombo,
    cells: Mapping[str, Optional[float]],
) -> BayesianNetwork:
    """Replace a whole row in one step (cells absent from ``cells`` are cleared)."""
    var = _require_variable(net, child)
    cpt = net.cpts[child]
    combo = _resolve_combo(net, cpt, parent_combo)
    unknown = set(cells) - set(var.states)
    if unknown:
        raise UnknownStateError(f"{var.name!r} has no states {sorted(unknown)!r}")
    specified = [p for p in cells.values() if p is not None]
    if any(not 0.0 <= p <= 1.0 for p in specified):
        raise OutOfRangeError(f"row for {var.name!r} contains probabilities outside [0, 1]")
    if sum(specified) > 1.0 + SUM_EPSILON:
        raise RowOverflowError(
            f"row {combo!r} of {var.name!r}: specified sum {sum(specified):.9f} exceeds 1"
        )
    out = copy.deepcopy(net)
    out.cpts[child].rows[combo] = {s: cells.get(s) for s in var.states}
    return out


def complete_cpt(net: BayesianNetwork) -> BayesianNetwork:
    """Fill every unspecified cell by spreading the unused mass uniformly.

    Fully specified rows are renormalized when their sum is within 1e-6 of 1
    (and left byte-identical when already within 1e-12, which makes the
    operation idempotent); a larger discrepancy is an error.
    """
    out = copy.deepcopy(net)
    for var_id, cpt in out.cpts.items():
        var = out.variables[var_id]
        for combo, row in cpt.rows.items():
            specified = {s: p for s, p in row.items() if p is not None}
            total = sum(specified.values())
            blanks = [s for s in var.states if row[s] is None]
            if total > 1.0 + SUM_EPSILON:
                raise RowOverflowError(
                    f"row {combo!r} of {var.name!r}: specified sum {total:.9f} exceeds 1"
                )
            if blanks:
                share = (1.0 - total) / len(blanks)
                for s in blanks:
                    row[s] = share
            else:
                if abs(total - 1.0) <= 1e-12:
                    continue
                if abs(total - 1.0) <= ROW_SUM_TOLERANCE:
                    for s in var.states:
                        row[s] = row[s] / total  # type: ignore[operator]
                else:
                    raise RowSumError(
                        f"row {combo!r} of {var.name!r}: fully specified sum {total:.9f} is not 1"
                    )
    return out


def topological_order(net: BayesianNetwork) -> Optional[tuple[str, ...]]:
    """Kahn's algorithm; ties broken by variable id so the order is stable."""
    indegree = {v: 0 for v in net.variables}
    children: dict[str, list[str]] = {v: [] for v in net.variables}
    for a in net.arrows:
        if a.from_id not in net.variables or a.to_id not in net.variables:
            continue  # dangling endpoints are a validation finding, not a crash
        indegree[a.to_id] += 1
        children[a.from_id].append(a.to_id)
    ready = sorted(v for v, d in indegree.items() if d == 0)
    order: list[str] = []
    while ready:
        current = ready.pop(0)
        order.append(current)
        changed = False
        for child in children[current]:
            indegree[child] -= 1
            if indegree[child] == 0:
                ready.append(child)
                changed = True
        if changed:
            ready.sort()
    if len(order) != len(net.variables):
        return None
    return tuple(order)


def validate_network(net: BayesianNetwork) -> ValidationReport:
    """Collect structural problems without raising.

    Unspecified cells are legal (they are completed at inference time); what
    the report flags is dangling ids, mis-shaped CPTs, overflow rows,
    out-of-range cells, and cycles.
    """
    findings: list[ValidationFinding] = []
    names_seen: dict[str, str] = {}
    for var in net.variables.values():
        if var.name in names_seen:
            findings.append(
                ValidationFinding("DUPLICATE_NAME", f"duplicate variable name {var.name!r}", var.id)
            )
        names_seen.setdefault(var.name, var.id)
    for a in net.arrows:
        for endpoint in (a.from_id, a.to_id):
            if endpoint not in net.variables:
                findings.append(
                    ValidationFinding("DANGLING_ID", f"arrow endpoint {endpoint!r} unknown", endpoint)
                )
        if a.from_id == a.to_id:
            findings.append(ValidationFinding("SELF_LOOP", f"self-loop on {a.from_id!r}", a.from_id))
    arrow_pairs = [(a.from_id, a.to_id) for a in net.arrows]
    if len(set(arrow_pairs)) != len(arrow_pairs):
        findings.append(ValidationFinding("DUPLICATE_ARROW", "duplicate arrows present"))
    for var_id, var in net.variables.items():
        cpt = net.cpts.get(var_id)
        if cpt is None:
            findings.append(ValidationFinding("MISSING_CPT", f"{var.name!r} has no CPT", var_id))
            continue
        expected_parents = tuple(sorted(a.from_id for a in net.arrows if a.to_id == var_id))
        if tuple(sorted(cpt.parents)) != expected_parents:
            findings.append(
                ValidationFinding(
                    "CPT_PARENT_MISMATCH",
                    f"CPT of {var.name!r} keyed by {cpt.parents!r}, arrows say {expected_parents!r}",
                    var_id,
                )
            )
            continue
        parent_states = [net.variables[p].states for p in cpt.parents if p in net.variables]
        expected_rows = set(itertools.product(*parent_states))
        if set(cpt.rows) != expected_rows:
            findings.append(
                ValidationFinding(
                    "CPT_ROWS_MISMATCH",
                    f"CPT of {var.name!r} has {len(cpt.rows)} rows, expected {len(expected_rows)}",
                    var_id,
                )
            )
            continue
        for combo, row in cpt.rows.items():
            if set(row) != set(var.states):
                findings.append(
                    ValidationFinding(
                        "CPT_CELLS_MISMATCH",
                        f"row {combo!r} of {var.name!r} does not cover the state set",
                        var_id,
                    )
                )
                continue
            specified = [p for p in row.values() if p is not None]
            if any(not 0.0 <= p <= 1.0 for p in specified):
                findings.append(
                    ValidationFinding(
                        "CELL_OUT_OF_RANGE",
                        f"row {combo!r} of {var.name!r} has probabilities outside [0, 1]",
                        var_id,
                    )
                )
            elif sum(specified) > 1.0 + SUM_EPSILON:
                findings.append(
                    ValidationFinding(
                        "ROW_OVERFLOW",
                        f"row {combo!r} of {var.name!r}: specified sum {sum(specified):.9f} exceeds 1",
                        var_id,
                    )
                )
            elif len(specified) == len(var.states) and abs(sum(specified) - 1.0) > ROW_SUM_TOLERANCE:
                findings.append(
                    ValidationFinding(
                        "ROW_SUM",
                        f"row {combo!r} of {var.name!r}: fully specified sum {sum(specified):.9f} is not 1",
                        var_id,
                    )
                )
    order = topological_order(net)
    if order is None:
        cycle = find_cycle(net)
        path = (
            " -> ".join(net.variables[v].name for v in cycle)
            if cycle
            else "directed cycle"
        )
        findings.append(
            ValidationFinding("CYCLE", f"arrow set contains a directed cycle: {path}")
        )
    return ValidationReport(findings=tuple(findings), topological_order=order)


def find_cycle(net: BayesianNetwork) -> Optional[list[str]]:
    """Return one directed cycle as variable ids (first element repeated
    at the end), or None when the arrow set is acyclic."""
    for start in net.variables:
        path = _path_between(net, start, start, allow_trivial=False)
        if path is not None:
            return path
    return None


def find_variable(net: BayesianNetwork, name_or_id: str) -> Variable:
    """Resolve a variable by id, falling back to exact name match."""
    var = net.variables.get(name_or_id)
    if var is not None:
        return var
    matches = [v for v in net.variables.values() if v.name == name_or_id]
    if len(matches) == 1:
        return matches[0]
    raise UnknownVariableError(f"no variable {name_or_id!r}")
