"""Exact inference: variable elimination plus a brute-force testing oracle.

``posterior`` is the production path (min-fill variable elimination over
dense numpy factors).  ``enumerate_posteriors`` recomputes the same
quantities by walking every assignment of the full joint with plain Python
arithmetic; it shares no factor machinery with the production path, which is
what makes it useful as an oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from ..bn.model import BayesianNetwork, complete_cpt, validate_network
from ..errors import (
    ImpossibleEvidenceError,
    IncompatibleSelectionError,
    NetworkFormatError,
    NetworkTooLargeError,
    UnknownStateError,
    UnknownVariableError,
)

ZERO_EVIDENCE_THRESHOLD = 1e-12
ORACLE_CELL_CAP = 2**24


@dataclass(frozen=True)
class Posterior:
    """Pr(variable | evidence) as per-state fractions summing to 1."""

    variable: str
    distribution: dict[str, float]


def check_evidence(net: BayesianNetwork, evidence: Mapping[str, str]) -> None:
    for var_id, state in evidence.items():
        var = net.variables.get(var_id)
        if var is None:
            raise UnknownVariableError(f"evidence names unknown variable {var_id!r}")
        if state not in var.states:
            raise UnknownStateError(f"{var.name!r} has no state {state!r}")


def _check_targets(net: BayesianNetwork, targets: Sequence[str]) -> None:
    for t in targets:
        if t not in net.variables:
            raise UnknownVariableError(f"target names unknown variable {t!r}")


def _prepare(net: BayesianNetwork) -> BayesianNetwork:
    report = validate_network(net)
    if not report.ok:
        details = "; ".join(f.message for f in report.findings[:3])
        raise NetworkFormatError(f"network does not validate: {details}")
    return complete_cpt(net)


# --------------------------------------------------------------------------
# Brute-force oracle
# --------------------------------------------------------------------------

def enumerate_posteriors(
    net: BayesianNetwork,
    evidence: Mapping[str, str],
    targets: Sequence[str],
) -> list[Posterior]:
    """Compute posteriors by summing the full joint, assignment by assignment."""
    completed = _prepare(net)
    check_evidence(completed, evidence)
    _check_targets(completed, targets)

    ids = list(completed.variables)
    cells = 1
    for var in completed.variables.values():
        cells *= len(var.states)
        if cells > ORACLE_CELL_CAP:
            raise NetworkTooLargeError(
                f"joint has more than {ORACLE_CELL_CAP} cells; oracle refuses"
            )

    # Pin evidence variables to their observed state so the walk only visits
    # consistent assignments; this changes nothing but the constant factor.
    domains = [
        (evidence[vid],) if vid in evidence else completed.variables[vid].states
        for vid in ids
    ]
    index_of = {vid: i for i, vid in enumerate(ids)}
    tables: list[tuple[int, tuple[int, ...], dict] ] = []
    for vid in ids:
        cpt = completed.cpts[vid]
        tables.append(
            (index_of[vid], tuple(index_of[p] for p in cpt.parents), cpt.rows)
        )

    totals: dict[str, dict[str, float]] = {
        t: {s: 0.0 for s in completed.variables[t].states} for t in targets
    }
    mass = 0.0
    for assignment in itertools.product(*domains):
        p = 1.0
        for child_axis, parent_axes, rows in tables:
            combo = tuple(assignment[a] for a in parent_axes)
            p *= rows[combo][assignment[child_axis]]
            if p == 0.0:
                break
        if p == 0.0:
            continue
        mass += p
        for t in targets:
            totals[t][assignment[index_of[t]]] += p

    if mass < ZERO_EVIDENCE_THRESHOLD:
        raise ImpossibleEvidenceError(
            f"evidence {dict(evidence)!r} has probability below {ZERO_EVIDENCE_THRESHOLD}"
        )
    return [
        Posterior(variable=t, distribution={s: v / mass for s, v in totals[t].items()})
        for t in targets
    ]


# --------------------------------------------------------------------------
# Variable elimination
# --------------------------------------------------------------------------

@dataclass
class Factor:
    scope: tuple[str, ...]
    table: np.ndarray  # one axis per scope variable


def _cpt_factor(net: BayesianNetwork, var_id: str) -> Factor:
    var = net.variables[var_id]
    cpt = net.cpts[var_id]
    scope = cpt.parents + (var_id,)
    shape = [len(net.variables[v].states) for v in scope]
    table = np.empty(shape, dtype=np.float64)
    parent_states = [net.variables[p].states for p in cpt.parents]
    for combo_idx in itertools.product(*[range(len(s)) for s in parent_states]):
        combo = tuple(parent_states[i][j] for i, j in enumerate(combo_idx))
        row = cpt.rows[combo]
        for k, state in enumerate(var.states):
            table[combo_idx + (k,)] = row[state]
    return Factor(scope=scope, table=table)


def _apply_evidence(net: BayesianNetwork, factor: Factor, evidence: Mapping[str, str]) -> Factor:
    scope = list(factor.scope)
    table = factor.table
    for var_id in [v for v in scope if v in evidence]:
        axis = scope.index(var_id)
        idx = net.variables[var_id].states.index(evidence[var_id])
        table = np.take(table, idx, axis=axis)
        scope.pop(axis)
    return Factor(scope=tuple(scope), table=table)


def _multiply(net: BayesianNetwork, a: Factor, b: Factor) -> Factor:
    scope = list(a.scope) + [v for v in b.scope if v not in a.scope]
    def aligned(f: Factor) -> np.ndarray:
        expanded = f.table
        # Append broadcast axes for scope variables the factor lacks, then
        # transpose its own axes into the union order.
        order = [f.scope.index(v) for v in scope if v in f.scope]
        expanded = np.transpose(expanded, order)
        shape = [
            len(net.variables[v].states) if v in f.scope else 1 for v in scope
        ]
        return expanded.reshape(shape)
    return Factor(scope=tuple(scope), table=aligned(a) * aligned(b))


def _sum_out(factor: Factor, var_id: str) -> Factor:
    axis = factor.scope.index(var_id)
    return Factor(
        scope=factor.scope[:axis] + factor.scope[axis + 1 :],
        table=factor.table.sum(axis=axis),
    )


def _min_fill_order(
    factors: Sequence[Factor], eliminate: set[str]
) -> list[str]:
    """Min-fill elimination order, ties broken lexicographically on id."""
    adjacency: dict[str, set[str]] = {}
    for f in factors:
        for v in f.scope:
            adjacency.setdefault(v, set())
        for u, w in itertools.combinations(f.scope, 2):
            adjacency[u].add(w)
            adjacency[w].add(u)
    for v in eliminate:
        adjacency.setdefault(v, set())

    remaining = set(eliminate)
    order: list[str] = []
    while remaining:
        def fill_cost(v: str) -> int:
            neighbours = [n for n in adjacency[v] if n in adjacency]
            return sum(
                1
                for u, w in itertools.combinations(neighbours, 2)
                if w not in adjacency[u]
            )
        best = min(remaining, key=lambda v: (fill_cost(v), v))
        neighbours = [n for n in adjacency[best] if n in adjacency]
        for u, w in itertools.combinations(neighbours, 2):
            adjacency[u].add(w)
            adjacency[w].add(u)
        for n in neighbours:
            adjacency[n].discard(best)
        del adjacency[best]
        remaining.discard(best)
        order.append(best)
    return order


def _eliminate(
    net: BayesianNetwork, factors: list[Factor], eliminate: set[str]
) -> Factor:
    """Sum the named variables out of the factor product."""
    work = list(factors)
    for var_id in _min_fill_order(work, eliminate):
        touching = [f for f in work if var_id in f.scope]
        rest = [f for f in work if var_id not in f.scope]
        if not touching:
            continue
        product = touching[0]
        for f in touching[1:]:
            product = _multiply(net, product, f)
        work = rest + [_sum_out(product, var_id)]
    result = Factor(scope=(), table=np.array(1.0))
    for f in work:
        result = _multiply(net, result, f)
    return result


def posterior(
    net: BayesianNetwork,
    evidence: Mapping[str, str],
    targets: Sequence[str],
) -> list[Posterior]:
    """Pr(target | evidence) for each target, by variable elimination."""
    completed = _prepare(net)
    check_evidence(completed, evidence)
    _check_targets(completed, targets)

    base_factors = [
        _apply_evidence(completed, _cpt_factor(completed, vid), evidence)
        for vid in completed.variables
    ]
    all_vars = set(completed.variables) - set(evidence)
    evidence_mass = float(_eliminate(completed, base_factors, all_vars).table)
    if evidence_mass < ZERO_EVIDENCE_THRESHOLD:
        raise ImpossibleEvidenceError(
            f"evidence {dict(evidence)!r} has probability below {ZERO_EVIDENCE_THRESHOLD}"
        )

    results: list[Posterior] = []
    for t in targets:
        states = completed.variables[t].states
        if t in evidence:
            results.append(
                Posterior(
                    variable=t,
                    distribution={s: 1.0 if s == evidence[t] else 0.0 for s in states},
                )
            )
            continue
        final = _eliminate(completed, base_factors, all_vars - {t})
        table = final.table
        if final.scope != (t,):  # scope is () only if t vanished; cannot happen
            axis_order = [final.scope.index(t)]
            table = np.transpose(table, axis_order)
        dist = table / table.sum()
        results.append(
            Posterior(variable=t, distribution={s: float(dist[i]) for i, s in enumerate(states)})
        )
    return results


def prior_marginals(net: BayesianNetwork, targets: Sequence[str]) -> list[Posterior]:
    """Marginals under no evidence (the base scenario)."""
    return posterior(net, {}, targets)


def evidence_impact(
    net: BayesianNetwork,
    base_evidence: Mapping[str, str],
    item: tuple[str, str],
    target: str,
) -> tuple[Posterior, Posterior]:
    """Posterior for the target before and after adding one evidence item."""
    var_id, state = item
    if var_id in base_evidence:
        raise IncompatibleSelectionError(
            f"variable {var_id!r} already observed in the base evidence"
        )
    before = posterior(net, base_evidence, [target])[0]
    extended = dict(base_evidence)
    extended[var_id] = state
    after = posterior(net, extended, [target])[0]
    return before, after
