"""Canonical JSON format and XMLBIF interchange."""

from __future__ import annotations

import json

import pytest

from delphinet.bn import jsonio, xmlbif
from delphinet.bn.model import CanvasLabel, Provenance, VariableKind, validate_network
from delphinet.errors import NetworkFormatError
from delphinet.inference import posterior
from delphinet.samples import drug_cheat_network

from support import chain_net


class TestJsonRoundTrip:
    def test_full_round_trip(self):
        net = drug_cheat_network()
        net.canvas_labels.append(CanvasLabel(text="investigation sketch", x=10.5, y=-3.0))
        net.provenance = Provenance(author="fac1", created_at="2024-06-01T12:00:00Z")
        back = jsonio.loads(jsonio.dumps(net, name="doping"))
        assert back.variables == net.variables
        assert back.arrows == net.arrows
        assert {k: (c.parents, c.rows) for k, c in back.cpts.items()} == {
            k: (c.parents, c.rows) for k, c in net.cpts.items()
        }
        assert back.canvas_labels == net.canvas_labels
        assert back.provenance == net.provenance

    def test_unspecified_cells_survive_as_null(self):
        net = drug_cheat_network()
        doc = jsonio.network_to_json(net)
        event_cpt = next(c for c in doc["cpts"] if c["child"] == "event")
        assert event_cpt["rows"][0]["cells"] == {
            "Weightlifting": None,
            "Running": None,
            "Swimming": None,
        }
        back = jsonio.network_from_json(doc)
        assert back.cpts["event"].rows[()]["Running"] is None

    def test_document_shape(self):
        doc = jsonio.network_to_json(drug_cheat_network())
        assert doc["format"] == "delphinet-network"
        assert doc["version"] == 1
        assert {v["kind"] for v in doc["variables"]} == {
            "Unordered", "Boolean", "Binary",
        }

    def test_content_hash_tracks_content(self):
        a = jsonio.content_hash(drug_cheat_network())
        b = jsonio.content_hash(drug_cheat_network())
        assert a == b
        assert a != jsonio.content_hash(chain_net())


class TestJsonValidation:
    def doc(self):
        return jsonio.network_to_json(chain_net())

    def test_wrong_format_field(self):
        doc = self.doc()
        doc["format"] = "other"
        with pytest.raises(NetworkFormatError):
            jsonio.network_from_json(doc)

    def test_bad_kind(self):
        doc = self.doc()
        doc["variables"][0]["kind"] = "Continuous"
        with pytest.raises(NetworkFormatError):
            jsonio.network_from_json(doc)

    def test_probability_above_one(self):
        doc = self.doc()
        doc["cpts"][0]["rows"][0]["cells"]["True"] = 1.5
        with pytest.raises(NetworkFormatError):
            jsonio.network_from_json(doc)

    def test_missing_required_field(self):
        doc = self.doc()
        del doc["cpts"]
        with pytest.raises(NetworkFormatError):
            jsonio.network_from_json(doc)

    def test_not_json(self):
        with pytest.raises(NetworkFormatError):
            jsonio.loads("{nope")

    def test_duplicate_variable_id(self):
        doc = self.doc()
        doc["variables"].append(dict(doc["variables"][0]))
        with pytest.raises(NetworkFormatError):
            jsonio.network_from_json(doc)

    def test_cpt_for_unknown_child(self):
        doc = self.doc()
        doc["cpts"][0]["child"] = "ghost"
        with pytest.raises(NetworkFormatError):
            jsonio.network_from_json(doc)

    def test_semantic_problems_load_then_report(self):
        # A dangling arrow is representable; it is the validator's job.
        doc = self.doc()
        doc["arrows"].append({"from": "a", "to": "ghost", "label": None})
        net = jsonio.network_from_json(doc)
        report = validate_network(net)
        assert "DANGLING_ID" in [f.code for f in report.findings]


class TestXmlbif:
    def test_round_trip_preserves_distribution(self):
        net = drug_cheat_network()
        text = xmlbif.export_xmlbif(net, name="doping")
        back = xmlbif.import_xmlbif(text)
        # Ids become names on import; query by the name-derived id.
        walk = [
            ({}, 2.33),
            ({"Sample A Result": "positive"}, 32.41),
        ]
        for evidence, expected in walk:
            (result,) = posterior(back, evidence, ["Drug Cheat"])
            assert result.distribution["True"] * 100 == pytest.approx(expected, abs=0.01)

    def test_kinds_defaulted_on_import(self):
        back = xmlbif.import_xmlbif(xmlbif.export_xmlbif(drug_cheat_network()))
        assert back.variables["Drug Cheat"].kind is VariableKind.BOOLEAN
        assert back.variables["Sample B Result"].kind is VariableKind.BINARY
        assert back.variables["Event"].kind is VariableKind.UNORDERED

    def test_annotations_dropped(self):
        back = xmlbif.import_xmlbif(xmlbif.export_xmlbif(drug_cheat_network()))
        assert all(not v.is_target for v in back.variables.values())
        assert all(v.description is None for v in back.variables.values())

    def test_table_ordering_child_fastest_last_given_fastest(self):
        text = xmlbif.export_xmlbif(drug_cheat_network())
        # Sample A has parents (Drug Cheat, Taking M879); the TABLE must walk
        # M879 before Drug Cheat, child outcomes innermost.
        definition = text.split("<FOR>Sample A Result</FOR>")[1]
        table = definition.split("<TABLE>")[1].split("</TABLE>")[0].split()
        values = [float(x) for x in table]
        assert values == pytest.approx(
            [0.53, 0.47, 0.77, 0.23, 0.62, 0.38, 0.02, 0.98]
        )

    def test_unspecified_cells_export_at_fill_values(self):
        text = xmlbif.export_xmlbif(drug_cheat_network())
        definition = text.split("<FOR>Event</FOR>")[1]
        table = definition.split("<TABLE>")[1].split("</TABLE>")[0].split()
        assert [float(x) for x in table] == pytest.approx([1 / 3] * 3)

    def test_missing_definition_defaults_to_unspecified(self):
        text = """<BIF VERSION="0.3"><NETWORK><NAME>n</NAME>
        <VARIABLE TYPE="nature"><NAME>X</NAME><OUTCOME>a</OUTCOME><OUTCOME>b</OUTCOME></VARIABLE>
        </NETWORK></BIF>"""
        net = xmlbif.import_xmlbif(text)
        assert net.cpts["X"].rows[()] == {"a": None, "b": None}

    @pytest.mark.parametrize(
        "mutation",
        [
            lambda t: t.replace("<BIF", "<BIF><oops", 1),
            lambda t: t.replace("NETWORK>", "NET>"),
            lambda t: t.replace("0.95", "9.5", 1),
            lambda t: t.replace("<GIVEN>Drug Cheat</GIVEN>", "<GIVEN>Ghost</GIVEN>", 1),
        ],
        ids=["malformed", "no-network", "out-of-range", "unknown-given"],
    )
    def test_import_errors(self, mutation):
        text = mutation(xmlbif.export_xmlbif(drug_cheat_network()))
        with pytest.raises(NetworkFormatError):
            xmlbif.import_xmlbif(text)

    def test_table_length_mismatch(self):
        text = xmlbif.export_xmlbif(drug_cheat_network())
        head, _, tail = text.partition("<TABLE>")
        body = tail.split("</TABLE>")[0]
        text = head + "<TABLE>" + body + " 0.5" + "</TABLE>" + tail.split("</TABLE>", 1)[1]
        with pytest.raises(NetworkFormatError):
            xmlbif.import_xmlbif(text)


def test_file_round_trip(tmp_path):
    net = drug_cheat_network()
    jsonio.save(net, tmp_path / "net.json", name="doping")
    assert jsonio.load(tmp_path / "net.json").variables == net.variables
    xmlbif.save(net, tmp_path / "net.xml")
    assert "Drug Cheat" in xmlbif.load(tmp_path / "net.xml").variables
    raw = json.loads((tmp_path / "net.json").read_text())
    assert raw["name"] == "doping"
