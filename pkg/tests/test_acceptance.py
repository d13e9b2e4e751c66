"""Acceptance gate.

One test per shipping criterion, each ending in a visible PASS line (run with
``-s`` or ``-rP`` to see the lines; a failing criterion fails its test).  All
randomized checks use fixed seeds and independent oracles from oracles.py.
"""

import http.client
import json
import math
import random
import threading
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from urllib.parse import quote, urlencode

import pytest

import oracles
import plantkb.fixtures
from plantkb.endpoint import DatasetConfig, make_server
from plantkb.fixtures import fixture_graph, fixture_text, manifest
from plantkb.graph import Graph
from plantkb.lint import Severity, render_json, render_text, run_checks
from plantkb.ontology import to_dot
from plantkb.reasoner import InconsistencyKind, check_consistency, materialize
from plantkb.sparql import evaluate, parse_query
from plantkb.terms import Iri, Literal, Triple, TriplePattern, Var
from plantkb.turtle import parse_turtle, serialize_turtle

FIXTURE_DIR = Path(plantkb.fixtures.__file__).resolve().parent
CLEAN = str(FIXTURE_DIR / "arabidopsis.ttl")
PLANT = "http://plantkb.example/arabidopsis#"

GOLDEN_QUERIES = [
    (
        "PREFIX plant: <http://plantkb.example/arabidopsis#> "
        "PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#> "
        "SELECT ?x WHERE { ?x rdfs:subClassOf plant:BiologicalProperty }",
        {"GeneticResistance", "RegenerativeAbility", "SeedCompatibility",
         "Tolerance", "Viability"},
    ),
    (
        "PREFIX plant: <http://plantkb.example/arabidopsis#> "
        "PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#> "
        "SELECT ?x WHERE { ?x rdfs:subClassOf plant:BiologicalDevelopmentalStage }",
        {"Germination", "LifeSpan", "Seed", "Seedling"},
    ),
    (
        "PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#> "
        "SELECT DISTINCT ?p WHERE { ?p rdfs:domain ?c }",
        {"growsIn", "hasPart", "hasVariant", "maxHeight"},
    ),
]


@pytest.fixture(scope="module")
def served():
    cfg = DatasetConfig(source_path=CLEAN, materialize_on_load=True,
                        bind_address="127.0.0.1:0")
    srv = make_server(cfg)
    threading.Thread(target=srv.serve_forever, daemon=True).start()
    yield srv.server_address[:2]
    srv.shutdown()
    srv.server_close()


def _http(served, method, path, body=None, headers=None):
    host, port = served
    conn = http.client.HTTPConnection(host, port, timeout=10)
    try:
        conn.request(method, path, body=body, headers=headers or {})
        resp = conn.getresponse()
        return resp.status, resp.read()
    finally:
        conn.close()


def test_criterion_1_golden_queries_over_the_wire(served):
    for query, expected_locals in GOLDEN_QUERIES:
        started = time.monotonic()
        status, body = _http(served, "GET", "/sparql?query=" + quote(query))
        elapsed = time.monotonic() - started
        assert status == 200
        assert elapsed < 1.0, f"request took {elapsed:.3f}s"
        bindings = json.loads(body)["results"]["bindings"]
        got = {next(iter(b.values()))["value"].rsplit("#", 1)[1] for b in bindings}
        assert got == expected_locals
    print("PASS criterion 1: golden hierarchy and property queries, served, each <1s")


def test_criterion_2_round_trip_500_documents():
    rng = random.Random(20260818)
    started = time.monotonic()
    datatypes_seen = set()
    iri_objects = literal_objects = 0
    for _ in range(500):
        triples = oracles.random_document_triples(rng, max_triples=200)
        assert len(triples) <= 200
        for t in triples:
            if isinstance(t.object, Literal):
                literal_objects += 1
                datatypes_seen.add(t.object.datatype)
            else:
                iri_objects += 1
        g = Graph()
        for t in triples:
            g.insert(t)
        assert parse_turtle(serialize_turtle(g)).graph == g
    elapsed = time.monotonic() - started
    assert len(datatypes_seen) >= 3
    assert iri_objects > 0 and literal_objects > 0
    assert elapsed < 30.0, f"round trips took {elapsed:.1f}s"
    print(f"PASS criterion 2: 500 serialize/parse round trips, exact, in {elapsed:.1f}s")


def test_criterion_3_closure_equals_brute_force_on_1000_ontologies():
    rng = random.Random(42_1000)
    for case in range(1000):
        triples = oracles.random_ontology(rng)
        terms = set()
        for t in triples:
            terms.update((t.subject, t.predicate, t.object))
        cap = max(1, len(terms) ** 2)

        g = Graph()
        for t in triples:
            g.insert(t)
        result = materialize(g)
        assert set(g) == oracles.closure(triples), f"case {case}"
        assert result.iterations <= cap

        again = materialize(g)
        assert again.added == set() and again.iterations == 1
    print("PASS criterion 3: 1000 random ontologies, closure exact, idempotent, capped")


def test_criterion_4_query_answers_match_enumeration_on_1000_cases():
    rng = random.Random(777_000)
    for case in range(1000):
        triples, text, patterns, filters, select = oracles.random_query_case(rng)
        g = Graph()
        for t in triples:
            g.insert(t)
        rows = evaluate(parse_query(text), g).rows
        got = Counter(tuple(row[v] for v in select) for row in rows)
        want = oracles.enumerate_select(triples, patterns, filters, select)
        assert got == want, f"case {case}: {text}"

        head, _, tail = text.partition("{")
        body = tail.rsplit("}", 1)[0]
        parts = [p.strip() for p in body.split(" . ")]
        rng.shuffle(parts)
        permuted = f"{head}{{ {' . '.join(parts)} }}"
        rows2 = evaluate(parse_query(permuted), g).rows
        got2 = Counter(tuple(row[v] for v in select) for row in rows2)
        assert got2 == want, f"case {case} permuted: {permuted}"
    print("PASS criterion 4: 1000 random queries match brute-force enumeration, "
          "pattern order irrelevant")


def test_criterion_5_defect_fixtures_trigger_exactly_their_codes():
    entries = manifest()
    clean = run_checks(fixture_graph("arabidopsis"))
    assert [d for d in clean if d.severity is Severity.ERROR] == []
    for entry in entries[1:]:
        diagnostics = run_checks(fixture_graph(entry.name))
        error_codes = {d.code for d in diagnostics if d.severity is Severity.ERROR}
        assert error_codes == entry.expected_error_codes, entry.name
    for entry in entries:
        first = run_checks(fixture_graph(entry.name))
        second = run_checks(fixture_graph(entry.name))
        assert render_text(first) == render_text(second)
        assert render_json(first) == render_json(second)
    print("PASS criterion 5: nine defect fixtures, exact codes, byte-stable reports")


def test_criterion_6_consistency_findings_are_exact():
    ex = "http://example.test/cons#"
    a, b, x = Iri(ex + "A"), Iri(ex + "B"), Iri(ex + "x")
    rdf_type = Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")
    owl_class = Iri("http://www.w3.org/2002/07/owl#Class")
    disjoint = Iri("http://www.w3.org/2002/07/owl#disjointWith")
    subclass = Iri("http://www.w3.org/2000/01/rdf-schema#subClassOf")

    g = Graph()
    for t in (
        Triple(a, rdf_type, owl_class),
        Triple(b, rdf_type, owl_class),
        Triple(a, disjoint, b),
        Triple(x, rdf_type, a),
        Triple(x, rdf_type, b),
    ):
        g.insert(t)
    findings = check_consistency(g)
    assert len(findings) == 1
    f = findings[0]
    assert f.kind is InconsistencyKind.DISJOINTNESS_VIOLATION
    assert set(f.members) == {a, b} and f.witness == Triple(x, rdf_type, a)

    g2 = Graph()
    for t in (
        Triple(a, rdf_type, owl_class),
        Triple(b, rdf_type, owl_class),
        Triple(a, subclass, b),
        Triple(b, subclass, a),
    ):
        g2.insert(t)
    findings = check_consistency(g2)
    assert len(findings) == 1
    assert findings[0].kind is InconsistencyKind.SUBCLASS_CYCLE
    assert set(findings[0].members) == {a, b}

    assert check_consistency(fixture_graph("arabidopsis")) == []
    print("PASS criterion 6: disjointness and cycle each reported once, clean fixture none")


def test_criterion_7_protocol_equivalence_and_stability(served):
    query = GOLDEN_QUERIES[0][0]
    status_get, via_get = _http(served, "GET", "/sparql?query=" + quote(query))
    status_form, via_form = _http(
        served, "POST", "/sparql", body=urlencode({"query": query}),
        headers={"Content-Type": "application/x-www-form-urlencoded"})
    status_raw, via_raw = _http(
        served, "POST", "/sparql", body=query.encode("utf-8"),
        headers={"Content-Type": "application/sparql-query"})
    assert status_get == status_form == status_raw == 200
    assert via_get == via_form == via_raw

    status, body = _http(served, "GET",
                         "/sparql?query=" + quote("SELECT ?s WHERE { ?s ?p"))
    assert status == 400
    assert body.decode("utf-8").startswith("line 1, column ")

    path = "/sparql?query=" + quote(query)
    with ThreadPoolExecutor(max_workers=32) as pool:
        outcomes = list(pool.map(lambda _: _http(served, "GET", path), range(32)))
    assert all(status == 200 for status, _ in outcomes)
    assert len({body for _, body in outcomes}) == 1

    _, stats_before = _http(served, "GET", "/stats")
    for _ in range(1000):
        _http(served, "GET", path)
    _, stats_after = _http(served, "GET", "/stats")
    assert stats_before == stats_after
    assert json.loads(stats_after)["triples"] == 133
    print("PASS criterion 7: GET/POST byte-identical, 400 with position, "
          "32-way concurrency, stats constant over 1000 queries")


def test_criterion_8_indexed_lookup_beats_full_scan():
    ex = "http://example.test/big#"
    g = Graph()
    triples = []
    for i in range(10_000):
        s = Iri(f"{ex}s{i:05d}")
        for j in range(10):
            t = Triple(s, Iri(f"{ex}p{j}"), Iri(f"{ex}o{i:05d}_{j}"))
            triples.append(t)
            g.insert(t)
    assert len(g) == 100_000

    target = Iri(f"{ex}s04217")
    pattern = TriplePattern(target, Var("p"), Var("o"))
    results, stats = g.match_with_stats(pattern)
    expected = oracles.scan_match(triples, pattern)
    scan_visits = len(triples)

    assert set(results) == set(expected)
    matches = len(results)
    assert matches == 10
    bound = matches + 2 * math.ceil(math.log2(len(g))) + 4
    assert stats.entries_visited <= bound, f"visited {stats.entries_visited} > bound {bound}"
    assert scan_visits == 100_000
    print(f"PASS criterion 8: bound-subject lookup visited {stats.entries_visited} "
          f"<= {bound} index entries against a {scan_visits}-triple scan")


def test_criterion_9_dot_export_is_exact_and_stable():
    g = fixture_graph("arabidopsis")
    first = to_dot(g, "classes")
    second = to_dot(fixture_graph("arabidopsis"), "classes")
    assert first == second

    name, nodes, edges = oracles.parse_dot(first)
    assert name == "classes"
    declared = fixture_text("arabidopsis").count("a owl:Class")
    assert declared == 17
    assert len(nodes) == declared + 1 == 18
    print("PASS criterion 9: classes DOT has 18 nodes, stable bytes, well formed")
