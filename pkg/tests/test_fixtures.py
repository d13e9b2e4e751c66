"""Bundled corpus: manifest integrity, parseability, documented counts."""

import pytest

import oracles
from plantkb.errors import UnknownFixtureError
from plantkb.fixtures import FixtureManifest, fixture_graph, fixture_text, manifest
from plantkb.ontology import extract_ontology


def test_manifest_lists_clean_fixture_first():
    entries = manifest()
    assert len(entries) == 10
    assert entries[0].name == "arabidopsis"
    assert entries[0].expected_error_codes == frozenset()
    assert all(isinstance(e, FixtureManifest) for e in entries)


def test_each_defect_fixture_expects_exactly_one_code():
    for entry in manifest()[1:]:
        assert len(entry.expected_error_codes) == 1
        (code,) = entry.expected_error_codes
        assert entry.name == code.lower()


def test_unknown_fixture_name_raises():
    with pytest.raises(UnknownFixtureError):
        fixture_text("present")
    with pytest.raises(UnknownFixtureError):
        fixture_graph("clean")


def test_clean_fixture_statement_count():
    text = fixture_text("arabidopsis")
    graph = fixture_graph("arabidopsis")
    assert oracles.count_statements(text) == 87
    assert len(graph) == 87


def test_clean_fixture_view_counts():
    view = extract_ontology(fixture_graph("arabidopsis"))
    assert (len(view.classes), len(view.properties), len(view.individuals)) == (17, 4, 14)


def test_every_fixture_parses():
    for entry in manifest():
        graph = fixture_graph(entry.name)
        assert len(graph) > 0


def test_defect_fixtures_stay_close_to_the_clean_ontology():
    baseline = fixture_graph("arabidopsis")
    for entry in manifest()[1:]:
        variant = fixture_graph(entry.name)
        # seeded defects are small edits, not rewrites
        delta = len(set(variant) ^ set(baseline))
        assert 0 < delta <= 12, entry.name
