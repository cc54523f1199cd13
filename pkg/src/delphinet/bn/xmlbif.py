"""XMLBIF 0.3 interchange: structure and CPTs only.

Annotations (kinds, target flags, descriptions, canvas labels) have no place
in the format, so they are dropped on export and defaulted on import: a
variable whose outcomes are exactly True/False imports as Boolean, any other
two-outcome variable as Binary, the rest as Unordered.

TABLE entries follow the usual convention: the child's outcomes cycle
fastest, then the last GIVEN parent, then the one before it, and so on.
"""

from __future__ import annotations

import itertools
import xml.etree.ElementTree as ET
from pathlib import Path
from xml.dom import minidom

from ..errors import NetworkFormatError
from .model import (
    BOOLEAN_STATES,
    Arrow,
    BayesianNetwork,
    Cpt,
    Variable,
    VariableKind,
)
from .model import _row_fill_values  # uniform residual, shared with complete_cpt


def export_xmlbif(net: BayesianNetwork, name: str = "network") -> str:
    """Serialize to XMLBIF.  Unspecified cells are exported at their
    uniform-residual values, since the format cannot express "unspecified"."""
    bif = ET.Element("BIF", VERSION="0.3")
    network = ET.SubElement(bif, "NETWORK")
    ET.SubElement(network, "NAME").text = name
    for var in net.variables.values():
        elem = ET.SubElement(network, "VARIABLE", TYPE="nature")
        ET.SubElement(elem, "NAME").text = var.name
        for state in var.states:
            ET.SubElement(elem, "OUTCOME").text = state
    for var in net.variables.values():
        cpt = net.cpts[var.id]
        definition = ET.SubElement(network, "DEFINITION")
        ET.SubElement(definition, "FOR").text = var.name
        for parent_id in cpt.parents:
            ET.SubElement(definition, "GIVEN").text = net.variables[parent_id].name
        parent_states = [net.variables[p].states for p in cpt.parents]
        numbers: list[str] = []
        for combo in itertools.product(*parent_states):
            filled = _row_fill_values(cpt.rows[combo], var.states)
            numbers.extend(repr(filled[s]) for s in var.states)
        ET.SubElement(definition, "TABLE").text = " ".join(numbers)
    raw = ET.tostring(bif, encoding="unicode")
    pretty = minidom.parseString(raw).toprettyxml(indent="  ")
    return pretty if pretty.endswith("\n") else pretty + "\n"


def import_xmlbif(text: str) -> BayesianNetwork:
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise NetworkFormatError(f"not well-formed XML: {exc}") from exc
    if root.tag != "BIF":
        raise NetworkFormatError(f"expected <BIF> root, got <{root.tag}>")
    network = root.find("NETWORK")
    if network is None:
        raise NetworkFormatError("no <NETWORK> element")

    net = BayesianNetwork()
    by_name: dict[str, Variable] = {}
    for elem in network.findall("VARIABLE"):
        name_elem = elem.find("NAME")
        if name_elem is None or not (name_elem.text or "").strip():
            raise NetworkFormatError("<VARIABLE> without a NAME")
        name = name_elem.text.strip()
        outcomes = [
            (o.text or "").strip() for o in elem.findall("OUTCOME")
        ]
        if len(outcomes) < 2 or any(not o for o in outcomes):
            raise NetworkFormatError(f"variable {name!r} needs at least two named outcomes")
        if name in by_name:
            raise NetworkFormatError(f"duplicate variable name {name!r}")
        if tuple(outcomes) == BOOLEAN_STATES:
            kind = VariableKind.BOOLEAN
        elif len(outcomes) == 2:
            kind = VariableKind.BINARY
        else:
            kind = VariableKind.UNORDERED
        var = Variable(id=name, name=name, kind=kind, states=tuple(outcomes))
        by_name[name] = var
        net.variables[var.id] = var

    seen_definitions: set[str] = set()
    for definition in network.findall("DEFINITION"):
        for_elem = definition.find("FOR")
        if for_elem is None or (for_elem.text or "").strip() not in by_name:
            raise NetworkFormatError("<DEFINITION> FOR does not name a declared variable")
        child = by_name[for_elem.text.strip()]
        if child.id in seen_definitions:
            raise NetworkFormatError(f"duplicate <DEFINITION> for {child.name!r}")
        seen_definitions.add(child.id)
        parents: list[Variable] = []
        for given in definition.findall("GIVEN"):
            given_name = (given.text or "").strip()
            if given_name not in by_name:
                raise NetworkFormatError(
                    f"GIVEN {given_name!r} of {child.name!r} is not a declared variable"
                )
            parents.append(by_name[given_name])
        table_elem = definition.find("TABLE")
        if table_elem is None:
            raise NetworkFormatError(f"<DEFINITION> for {child.name!r} has no TABLE")
        try:
            numbers = [float(tok) for tok in (table_elem.text or "").split()]
        except ValueError as exc:
            raise NetworkFormatError(f"TABLE of {child.name!r}: {exc}") from exc
        combos = list(itertools.product(*[p.states for p in parents]))
        expected = len(combos) * len(child.states)
        if len(numbers) != expected:
            raise NetworkFormatError(
                f"TABLE of {child.name!r} has {len(numbers)} entries, expected {expected}"
            )
        if any(not 0.0 <= x <= 1.0 for x in numbers):
            raise NetworkFormatError(f"TABLE of {child.name!r} has entries outside [0, 1]")
        rows: dict[tuple[str, ...], dict[str, float | None]] = {}
        it = iter(numbers)
        for combo in combos:
            rows[combo] = {s: next(it) for s in child.states}
        net.cpts[child.id] = Cpt(
            child=child.id, parents=tuple(p.id for p in parents), rows=rows
        )
        for parent in parents:
            net.arrows.append(Arrow(from_id=parent.id, to_id=child.id))

    for var in net.variables.values():
        if var.id not in net.cpts:
            net.cpts[var.id] = Cpt(
                child=var.id, parents=(), rows={(): {s: None for s in var.states}}
            )
    return net


def save(net: BayesianNetwork, path: str | Path, name: str = "network") -> None:
    Path(path).write_text(export_xmlbif(net, name), encoding="utf-8")


def load(path: str | Path) -> BayesianNetwork:
    return import_xmlbif(Path(path).read_text(encoding="utf-8"))
