"""Shared builders for test networks, including a random-network generator."""

from __future__ import annotations

import random

from delphinet.bn import (
    Arrow,
    BayesianNetwork,
    VariableKind,
    add_arrow,
    add_variable,
    make_variable,
    new_network,
    set_cpt_entry,
    set_cpt_row,
)


def collider_net() -> BayesianNetwork:
    """A -> C <- B with independent causes; fixed values for frozen tests."""
    net = new_network()
    for name in "ABC":
        net = add_variable(net, make_variable(name, "Boolean", var_id=name.lower()))
    net = add_arrow(net, Arrow("a", "c"))
    net = add_arrow(net, Arrow("b", "c"))
    net = set_cpt_row(net, "a", (), {"True": 0.3, "False": 0.7})
    net = set_cpt_row(net, "b", (), {"True": 0.4, "False": 0.6})
    for combo, p in {
        ("True", "True"): 0.9,
        ("True", "False"): 0.6,
        ("False", "True"): 0.5,
        ("False", "False"): 0.1,
    }.items():
        net = set_cpt_row(net, "c", combo, {"True": p, "False": 1 - p})
    return net


def common_cause_net() -> BayesianNetwork:
    """B <- A -> C; observing A should make B and C independent."""
    net = new_network()
    for name in "ABC":
        net = add_variable(net, make_variable(name, "Boolean", var_id=name.lower()))
    net = add_arrow(net, Arrow("a", "b"))
    net = add_arrow(net, Arrow("a", "c"))
    net = set_cpt_row(net, "a", (), {"True": 0.3, "False": 0.7})
    net = set_cpt_row(net, "b", ("True",), {"True": 0.8, "False": 0.2})
    net = set_cpt_row(net, "b", ("False",), {"True": 0.3, "False": 0.7})
    net = set_cpt_row(net, "c", ("True",), {"True": 0.7, "False": 0.3})
    net = set_cpt_row(net, "c", ("False",), {"True": 0.2, "False": 0.8})
    return net


def diamond_net() -> BayesianNetwork:
    """A -> {B, C} -> D; two active paths between A and D."""
    net = new_network()
    for name in "ABCD":
        net = add_variable(net, make_variable(name, "Boolean", var_id=name.lower()))
    for u, w in [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]:
        net = add_arrow(net, Arrow(u, w))
    net = set_cpt_row(net, "a", (), {"True": 0.5, "False": 0.5})
    net = set_cpt_row(net, "b", ("True",), {"True": 0.9, "False": 0.1})
    net = set_cpt_row(net, "b", ("False",), {"True": 0.2, "False": 0.8})
    net = set_cpt_row(net, "c", ("True",), {"True": 0.3, "False": 0.7})
    net = set_cpt_row(net, "c", ("False",), {"True": 0.7, "False": 0.3})
    for combo, p in {
        ("True", "True"): 0.95,
        ("True", "False"): 0.8,
        ("False", "True"): 0.4,
        ("False", "False"): 0.05,
    }.items():
        net = set_cpt_row(net, "d", combo, {"True": p, "False": 1 - p})
    return net


def chain_net() -> BayesianNetwork:
    """A -> B with P(A=t)=0.5, P(B=t|A)=0.8/0.2 — the textbook Bayes flip."""
    net = new_network()
    net = add_variable(net, make_variable("A", "Boolean", var_id="a"))
    net = add_variable(net, make_variable("B", "Boolean", var_id="b"))
    net = add_arrow(net, Arrow("a", "b"))
    net = set_cpt_row(net, "a", (), {"True": 0.5, "False": 0.5})
    net = set_cpt_row(net, "b", ("True",), {"True": 0.8, "False": 0.2})
    net = set_cpt_row(net, "b", ("False",), {"True": 0.2, "False": 0.8})
    return net


def random_network(
    rng: random.Random, max_vars: int = 8, max_states: int = 3
) -> BayesianNetwork:
    """A random DAG with random (partially specified) CPTs.

    Cell values stay strictly positive so random evidence never has zero
    probability; some cells are left unspecified to exercise the completion
    rule inside both engines.
    """
    n = rng.randint(1, max_vars)
    net = new_network()
    ids = [f"v{i}" for i in range(n)]
    for i, vid in enumerate(ids):
        count = rng.randint(2, max_states)
        states = [f"s{j}" for j in range(count)]
        kind = VariableKind.BINARY if count == 2 else VariableKind.UNORDERED
        net = add_variable(net, make_variable(f"V{i}", kind, states, var_id=vid))
    for j in range(n):
        for i in range(j):
            if rng.random() < 0.35:
                net = add_arrow(net, Arrow(ids[i], ids[j]))
    for vid in ids:
        var = net.variables[vid]
        for combo in list(net.cpts[vid].rows):
            weights = [rng.uniform(0.05, 1.0) for _ in var.states]
            total = sum(weights)
            row = {s: w / total for s, w in zip(var.states, weights)}
            if rng.random() < 0.3:
                # Leave a random non-empty suffix of the row unspecified.
                keep = rng.randint(0, len(var.states) - 1)
                row = {
                    s: (row[s] if k < keep else None)
                    for k, s in enumerate(var.states)
                }
            net = set_cpt_row(net, vid, combo, row)
    return net


def random_evidence(rng: random.Random, net: BayesianNetwork) -> dict[str, str]:
    evidence: dict[str, str] = {}
    for vid, var in net.variables.items():
        if rng.random() < 0.25:
            evidence[vid] = rng.choice(var.states)
    return evidence
