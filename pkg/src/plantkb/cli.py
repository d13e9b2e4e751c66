"""plantkb command line: validate, infer, query, serve, export.

Exit codes: 0 success; 1 error-severity findings or an inconsistency;
2 usage errors, unreadable files, or Turtle/query syntax errors.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .endpoint import DatasetConfig, resolve_bind, serve
from .errors import ParseError, SubclassCycleError, UnknownPrefixError
from .graph import Graph
from .lint import CheckConfig, Severity, render_json, render_text, run_checks
from .ontology import to_dot
from .reasoner import materialize
from .sparql import evaluate, parse_query, serialize_results
from .terms import BlankNode, Iri
from .turtle import parse_turtle, serialize_turtle


def _load_graph(path: str) -> Graph:
    """Parse a Turtle file; raises OSError or ParseError for the caller to map."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_turtle(text).graph


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        graph = _load_graph(args.file)
    except OSError as exc:
        return _fail(str(exc), 2)
    except (ParseError, UnknownPrefixError) as exc:
        return _fail(str(exc), 2)
    cfg = CheckConfig(
        class_name_pattern=args.class_pattern,
        property_name_pattern=args.property_pattern,
        require_labels=not args.no_labels_check,
    )
    diagnostics = run_checks(graph, cfg)
    if args.format == "json":
        sys.stdout.write(render_json(diagnostics))
    else:
        sys.stdout.write(render_text(diagnostics))
    has_errors = any(d.severity is Severity.ERROR for d in diagnostics)
    return 1 if has_errors else 0


def cmd_infer(args: argparse.Namespace) -> int:
    try:
        graph = _load_graph(args.file)
    except OSError as exc:
        return _fail(str(exc), 2)
    except (ParseError, UnknownPrefixError) as exc:
        return _fail(str(exc), 2)
    result = materialize(graph)
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(serialize_turtle(graph))
    except OSError as exc:
        return _fail(str(exc), 2)
    print(f"added {len(result.added)} triples in {result.iterations} iterations")
    return 0


def cmd_query(args: argparse.Namespace) -> int:
    try:
        graph = _load_graph(args.file)
    except OSError as exc:
        return _fail(str(exc), 2)
    except (ParseError, UnknownPrefixError) as exc:
        return _fail(str(exc), 2)
    if args.query is not None:
        query_text = args.query
    else:
        try:
            with open(args.query_file, encoding="utf-8") as fh:
                query_text = fh.read()
        except OSError as exc:
            return _fail(str(exc), 2)
    try:
        query = parse_query(query_text)
    except (ParseError, UnknownPrefixError) as exc:
        return _fail(str(exc), 2)
    if args.infer:
        materialize(graph)
    results = evaluate(query, graph)
    if args.format == "json":
        sys.stdout.write(serialize_results(results, "sparql-json"))
    elif args.format == "csv":
        sys.stdout.write(serialize_results(results, "csv"))
    else:
        sys.stdout.write(_render_table(results))
    return 0


def _render_table(results) -> str:
    def cell(term) -> str:
        if term is None:
            return ""
        if isinstance(term, Iri):
            return term.value
        if isinstance(term, BlankNode):
            return f"_:{term.label}"
        return term.lexical

    header = list(results.vars)
    body = [[cell(row.get(v)) for v in header] for row in results.rows]
    widths = [
        max([len(header[i])] + [len(r[i]) for r in body]) for i in range(len(header))
    ]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for r in body:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def cmd_serve(args: argparse.Namespace) -> int:
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")
    try:
        host, port = resolve_bind(args.bind)
    except ValueError as exc:
        return _fail(str(exc), 2)
    cfg = DatasetConfig(
        source_path=args.file,
        materialize_on_load=args.materialize,
        bind_address=f"{host}:{port}",
    )
    try:
        serve(cfg)
    except OSError as exc:
        return _fail(str(exc), 2)
    except (ParseError, UnknownPrefixError) as exc:
        return _fail(str(exc), 2)
    except KeyboardInterrupt:
        pass
    return 0


def cmd_export_dot(args: argparse.Namespace) -> int:
    try:
        graph = _load_graph(args.file)
    except OSError as exc:
        return _fail(str(exc), 2)
    except (ParseError, UnknownPrefixError) as exc:
        return _fail(str(exc), 2)
    try:
        sys.stdout.write(to_dot(graph, args.mode))
    except SubclassCycleError as exc:
        return _fail(str(exc), 1)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plantkb",
        description="Semantic knowledge-base toolkit: parse, validate, reason over, "
        "query, serve, and export OWL/RDF ontologies in Turtle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="run lint and consistency checks")
    p.add_argument("file")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--no-labels-check", action="store_true")
    p.add_argument("--class-pattern", default=r"^[A-Z][A-Za-z0-9]*$")
    p.add_argument("--property-pattern", default=r"^[a-z][A-Za-z0-9]*$")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("infer", help="materialize inferences to a new Turtle file")
    p.add_argument("file")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("query", help="evaluate a SPARQL query against a file")
    p.add_argument("file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--query")
    group.add_argument("--query-file")
    p.add_argument("--infer", action="store_true", help="materialize before querying")
    p.add_argument("--format", choices=["json", "csv", "table"], default="json")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("serve", help="serve the file over HTTP (SPARQL protocol subset)")
    p.add_argument("file")
    p.add_argument("--bind", default=None, metavar="HOST:PORT")
    p.add_argument("--materialize", action="store_true")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("export", help="emit the ontology as GraphViz DOT")
    p.add_argument("file")
    p.add_argument("--mode", choices=["classes", "properties"], required=True)
    p.set_defaults(func=cmd_export_dot)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
