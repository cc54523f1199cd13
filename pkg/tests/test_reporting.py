"""Report template, explanation autofill, HTML rendering, export bundle."""

from __future__ import annotations

import hashlib
import json

import pytest

from delphinet import explain, reporting
from delphinet.bn import jsonio
from delphinet.errors import IncompatibleSelectionError, StaleExplanationError
from delphinet.samples import drug_cheat_network


class FakeScenario:
    def __init__(self, evidence, outputs):
        self.evidence = evidence
        self.output_variables = outputs


@pytest.fixture()
def detail():
    net = drug_cheat_network()
    scenario = FakeScenario({"sample_a": "positive"}, ("drug_cheat",))
    return explain.detail(net, scenario)


@pytest.fixture()
def net_hash():
    return jsonio.content_hash(drug_cheat_network())


class TestTemplate:
    def test_new_draft_has_nine_sections_in_fixed_order(self):
        draft = reporting.instantiate_template()
        ids = [s["id"] for s in draft["sections"]]
        assert ids == list(reporting.REPORT_SECTION_IDS)
        assert len(ids) == 9
        assert all(s["body"] == "" for s in draft["sections"])
        assert all(s["generated"] is None for s in draft["sections"])

    def test_aligned_ids_equal_explanation_ids_exactly(self):
        assert reporting.ALIGNED_SECTION_IDS == explain.EXPLANATION_SECTION_IDS
        assert reporting.REPORT_SECTION_IDS == (
            "executive_summary",
            "structure",
            "priors",
            "source_reliability",
            "relevance",
            "impact",
            "conclusion",
            "assumptions",
            "caveats",
        )

    def test_question_slots_in_conclusion(self):
        questions = ["Who?", "When?", "Why?"]
        draft = reporting.instantiate_template(questions)
        conclusion = reporting.section_of(draft, "conclusion")
        assert [q["question"] for q in conclusion["questions"]] == questions
        assert all(q["answer"] == "" for q in conclusion["questions"])

    def test_titles_present(self):
        draft = reporting.instantiate_template()
        assert reporting.section_of(draft, "executive_summary")["title"] == (
            "Executive Summary"
        )


class TestValidateDraft:
    def test_duplicate_section_ids_rejected(self):
        draft = reporting.instantiate_template()
        draft["sections"].append({"id": "caveats", "body": ""})
        with pytest.raises(IncompatibleSelectionError):
            reporting.validate_draft(draft)

    def test_misordered_aligned_sections_rejected(self):
        draft = reporting.instantiate_template()
        sections = draft["sections"]
        impact = next(i for i, s in enumerate(sections) if s["id"] == "impact")
        priors = next(i for i, s in enumerate(sections) if s["id"] == "priors")
        sections[impact], sections[priors] = sections[priors], sections[impact]
        with pytest.raises(IncompatibleSelectionError):
            reporting.validate_draft(draft)

    def test_missing_sections_rejected(self):
        with pytest.raises(IncompatibleSelectionError):
            reporting.validate_draft({"kind": reporting.REPORT_KIND})


class TestAutofill:
    def test_autofill_populates_aligned_sections_only(self, detail, net_hash):
        draft = reporting.instantiate_template(["Q?"])
        filled = reporting.autofill_from_explanation(
            draft, detail,
            detail_network_hash=net_hash, current_network_hash=net_hash,
        )
        for section_id in reporting.ALIGNED_SECTION_IDS:
            section = reporting.section_of(filled, section_id)
            assert section["generated"] == detail.section(section_id)
            assert section["body"] == ""
        for section_id in ("executive_summary", "assumptions", "caveats"):
            section = reporting.section_of(filled, section_id)
            assert section["generated"] is None

    def test_analyst_text_never_overwritten(self, detail, net_hash):
        draft = reporting.instantiate_template()
        reporting.section_of(draft, "impact")["body"] = "My own analysis."
        filled = reporting.autofill_from_explanation(
            draft, detail,
            detail_network_hash=net_hash, current_network_hash=net_hash,
        )
        section = reporting.section_of(filled, "impact")
        assert section["body"] == "My own analysis."
        assert section["generated"] == detail.section("impact")

    def test_second_autofill_replaces_generated_block(self, detail, net_hash):
        draft = reporting.instantiate_template()
        reporting.section_of(draft, "structure")["body"] = "kept"
        once = reporting.autofill_from_explanation(
            draft, detail,
            detail_network_hash=net_hash, current_network_hash=net_hash,
        )
        twice = reporting.autofill_from_explanation(
            once, detail,
            detail_network_hash=net_hash, current_network_hash=net_hash,
        )
        section = reporting.section_of(twice, "structure")
        assert section["generated"] == detail.section("structure")
        assert section["generated"].count(detail.section("structure")) == 1
        assert section["body"] == "kept"

    def test_stale_explanation_rejected(self, detail, net_hash):
        draft = reporting.instantiate_template()
        with pytest.raises(StaleExplanationError):
            reporting.autofill_from_explanation(
                draft, detail,
                detail_network_hash=net_hash, current_network_hash="deadbeef",
            )

    def test_autofill_does_not_mutate_input(self, detail, net_hash):
        draft = reporting.instantiate_template()
        snapshot = json.dumps(draft, sort_keys=True)
        reporting.autofill_from_explanation(
            draft, detail,
            detail_network_hash=net_hash, current_network_hash=net_hash,
        )
        assert json.dumps(draft, sort_keys=True) == snapshot


class TestHtml:
    def test_escapes_analyst_html(self):
        draft = reporting.instantiate_template()
        reporting.section_of(draft, "caveats")["body"] = "<script>alert(1)</script>"
        page = reporting.render_report_html(draft)
        assert "<script>" not in page
        assert "&lt;script&gt;" in page

    def test_generated_blocks_carry_provenance_marker(self, detail, net_hash):
        draft = reporting.autofill_from_explanation(
            reporting.instantiate_template(), detail,
            detail_network_hash=net_hash, current_network_hash=net_hash,
        )
        page = reporting.render_report_html(draft)
        assert page.count('data-provenance="machine-generated"') == len(
            reporting.ALIGNED_SECTION_IDS
        )

    def test_questions_rendered(self):
        draft = reporting.instantiate_template(["Who did it?"])
        conclusion = reporting.section_of(draft, "conclusion")
        conclusion["questions"][0]["answer"] = "Probably X."
        page = reporting.render_report_html(draft)
        assert "Who did it?" in page
        assert "Probably X." in page

    def test_self_contained_document(self):
        page = reporting.render_report_html(reporting.instantiate_template())
        assert page.startswith("<!doctype html>")
        assert "</html>" in page
        assert "http" not in page  # no external references


class TestExportBundle:
    def test_bundle_files_and_hashes(self, tmp_path, detail, net_hash):
        draft = reporting.autofill_from_explanation(
            reporting.instantiate_template(["Q?"]), detail,
            detail_network_hash=net_hash, current_network_hash=net_hash,
        )
        network_doc = jsonio.network_to_json(drug_cheat_network())
        scenarios_doc = [{"id": "s0", "name": "Base", "evidence": {}}]
        manifest = reporting.build_export_bundle(
            tmp_path, draft, network_doc, scenarios_doc
        )
        for name in ("report.html", "network.json", "scenarios.json", "manifest.json"):
            assert (tmp_path / name).exists()
        for name, meta in manifest["files"].items():
            data = (tmp_path / name).read_bytes()
            assert hashlib.sha256(data).hexdigest() == meta["sha256"]
            assert len(data) == meta["bytes"]

    def test_bundle_is_deterministic(self, tmp_path, detail, net_hash):
        draft = reporting.autofill_from_explanation(
            reporting.instantiate_template(), detail,
            detail_network_hash=net_hash, current_network_hash=net_hash,
        )
        m1 = reporting.build_export_bundle(tmp_path / "a", draft)
        m2 = reporting.build_export_bundle(tmp_path / "b", draft)
        assert m1 == m2

    def test_network_json_round_trips(self, tmp_path):
        draft = reporting.instantiate_template()
        network_doc = jsonio.network_to_json(drug_cheat_network())
        reporting.build_export_bundle(tmp_path, draft, network_doc)
        loaded = json.loads((tmp_path / "network.json").read_text())
        restored = jsonio.network_from_json(loaded)
        assert jsonio.content_hash(restored) == jsonio.content_hash(
            drug_cheat_network()
        )
