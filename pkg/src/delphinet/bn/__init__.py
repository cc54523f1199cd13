"""Discrete causal Bayesian network model, serialization, and validation."""

from __future__ import annotations

from .model import (
    Arrow,
    BayesianNetwork,
    CanvasLabel,
    Cpt,
    Provenance,
    ValidationFinding,
    ValidationReport,
    Variable,
    VariableKind,
    add_arrow,
    add_variable,
    children_of,
    complete_cpt,
    find_variable,
    make_variable,
    new_network,
    parents_of,
    remove_arrow,
    remove_variable,
    rename_state,
    rename_variable,
    set_cpt_entry,
    set_cpt_row,
    set_variable_states,
    topological_order,
    update_variable,
    validate_network,
)

__all__ = [
    "Arrow",
    "BayesianNetwork",
    "CanvasLabel",
    "Cpt",
    "Provenance",
    "ValidationFinding",
    "ValidationReport",
    "Variable",
    "VariableKind",
    "add_arrow",
    "add_variable",
    "children_of",
    "complete_cpt",
    "find_variable",
    "make_variable",
    "new_network",
    "parents_of",
    "remove_arrow",
    "remove_variable",
    "rename_state",
    "rename_variable",
    "set_cpt_entry",
    "set_cpt_row",
    "set_variable_states",
    "topological_order",
    "update_variable",
    "validate_network",
]
