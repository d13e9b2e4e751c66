"""SPARQL subset: SELECT queries over one graph.

Grammar: PREFIX declarations, SELECT (DISTINCT) with explicit variables or
``*``, one WHERE block of dot-separated triple patterns, FILTER with
{=, !=, <, <=, >, >=, regex}, ORDER BY (ASC/DESC), LIMIT, OFFSET.
Constructs outside the subset (OPTIONAL, UNION, property paths, aggregates,
CONSTRUCT/ASK/DESCRIBE, ...) raise UnsupportedConstructError naming the
construct.

Evaluation is a natural join of the pattern matches, join order picked by
ascending estimated cardinality (index counts), re-estimated as variables
become bound.  Filters run on full rows; ordering sorts full rows under a
total term order (numeric literals by value, then other literals, then
IRIs, then blank nodes); projection, DISTINCT, and OFFSET/LIMIT follow in
that order.

Result serialization: W3C SPARQL 1.1 JSON results and RFC-4180 CSV.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field
from decimal import Decimal

from .errors import ParseError, RelativeIriError, UnknownPrefixError, UnsupportedConstructError
from .graph import Graph, PrefixMap
from .terms import (
    RDF_LANG_STRING,
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_INTEGER,
    XSD_STRING,
    BlankNode,
    Iri,
    Literal,
    Term,
    Triple,
    TriplePattern,
    Var,
)

_KEYWORDS = {
    "SELECT", "DISTINCT", "WHERE", "PREFIX", "FILTER", "ORDER", "BY",
    "ASC", "DESC", "LIMIT", "OFFSET", "REGEX",
}
_UNSUPPORTED = {
    "OPTIONAL", "UNION", "GRAPH", "SERVICE", "MINUS", "BIND", "VALUES",
    "EXISTS", "CONSTRUCT", "ASK", "DESCRIBE", "INSERT", "DELETE", "GROUP",
    "HAVING", "BASE", "FROM", "NAMED", "REDUCED", "COUNT", "SUM", "AVG",
}
_ABSOLUTE_IRI = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_WORD = re.compile(r"[A-Za-z0-9_.\-]")
_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}

_COMPARISON_OPS = {"=", "!=", "<", "<=", ">", ">="}


@dataclass(slots=True)
class FilterExpr:
    op: str  # one of =, !=, <, <=, >, >= or "regex"
    left: str  # variable name
    right: Term | str  # constant term, or the pattern text for regex


@dataclass(slots=True)
class Query:
    prefixes: PrefixMap
    select_vars: list[str] | str  # explicit names, or "*"
    patterns: list[TriplePattern]
    filters: list[FilterExpr] = field(default_factory=list)
    distinct: bool = False
    order_by: tuple[str, str] | None = None  # (variable, "asc"|"desc")
    limit: int | None = None
    offset: int | None = None


@dataclass(slots=True)
class ResultSet:
    vars: list[str]
    rows: list[dict[str, Term]]


@dataclass(slots=True)
class _Tok:
    kind: str
    value: object
    line: int
    col: int
    text: str


class _QueryTokenizer:
    def __init__(self, text: str):
        self.text = text
        self.i = 0
        self.line = 1
        self.col = 1

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.i < len(self.text):
                if self.text[self.i] == "\n":
                    self.line += 1
                    self.col = 1
                else:
                    self.col += 1
                self.i += 1

    def _peek(self, off: int = 0) -> str:
        j = self.i + off
        return self.text[j] if j < len(self.text) else ""

    def tokens(self) -> list[_Tok]:
        out = []
        while True:
            t = self._next()
            out.append(t)
            if t.kind == "eof":
                return out

    def _next(self) -> _Tok:
        while self.i < len(self.text):
            ch = self.text[self.i]
            if ch in " \t\r\n":
                self._advance()
            elif ch == "#":
                while self.i < len(self.text) and self.text[self.i] != "\n":
                    self._advance()
            else:
                break
        if self.i >= len(self.text):
            return _Tok("eof", None, self.line, self.col, "")
        line, col = self.line, self.col
        ch = self.text[self.i]

        if ch in "?$":
            self._advance()
            start = self.i
            while self.i < len(self.text) and (self.text[self.i].isalnum() or self.text[self.i] == "_"):
                self._advance()
            name = self.text[start:self.i]
            if not name:
                raise ParseError("variable name expected after '?'", line, col, ch)
            return _Tok("var", name, line, col, f"?{name}")
        if ch == "<" and self._looks_like_iri():
            return self._iri(line, col)
        if ch in "\"'":
            return self._string(line, col)
        if ch == "@":
            self._advance()
            start = self.i
            while self.i < len(self.text) and (self.text[self.i].isalnum() or self.text[self.i] == "-"):
                self._advance()
            tag = self.text[start:self.i]
            if not re.fullmatch(r"[A-Za-z]+(?:-[A-Za-z0-9]+)*", tag or ""):
                raise ParseError(f"malformed language tag @{tag}", line, col, f"@{tag}")
            return _Tok("langtag", tag, line, col, f"@{tag}")
        if ch == "^" and self._peek(1) == "^":
            self._advance(2)
            return _Tok("dt", "^^", line, col, "^^")
        if ch == "_" and self._peek(1) == ":":
            self._advance(2)
            start = self.i
            while self.i < len(self.text) and _WORD.match(self.text[self.i]):
                self._advance()
            label = self.text[start:self.i]
            if not label:
                raise ParseError("blank node label expected after '_:'", line, col, "_:")
            return _Tok("blank", label, line, col, f"_:{label}")
        if ch.isdigit() or (ch in "+-" and (self._peek(1).isdigit() or self._peek(1) == ".")):
            return self._number(line, col)
        if ch == "." and self._peek(1).isdigit():
            return self._number(line, col)
        if ch in "{}().,;*":
            self._advance()
            kind = {
                "{": "lbrace", "}": "rbrace", "(": "lparen", ")": "rparen",
                ".": "dot", ",": "comma", ";": "semi", "*": "star",
            }[ch]
            return _Tok(kind, ch, line, col, ch)
        if ch == "!":
            if self._peek(1) == "=":
                self._advance(2)
                return _Tok("op", "!=", line, col, "!=")
            raise ParseError("'!' must be part of '!='", line, col, "!")
        if ch in "<>=":
            if ch == "=":
                self._advance()
                return _Tok("op", "=", line, col, "=")
            if self._peek(1) == "=":
                op = ch + "="
                self._advance(2)
                return _Tok("op", op, line, col, op)
            self._advance()
            return _Tok("op", ch, line, col, ch)
        if _WORD.match(ch) or ch == ":":
            return self._word(line, col)
        raise ParseError(f"unexpected character {ch!r}", line, col, ch)

    def _looks_like_iri(self) -> bool:
        j = self.i + 1
        while j < len(self.text):
            c = self.text[j]
            if c == ">":
                return True
            if c in " \t\r\n<\"":
                return False
            j += 1
        return False

    def _iri(self, line: int, col: int) -> _Tok:
        start = self.i
        self._advance()
        buf = []
        while True:
            if self.i >= len(self.text):
                raise ParseError("unterminated IRI reference", line, col, self.text[start:start + 20])
            c = self.text[self.i]
            if c == ">":
                self._advance()
                return _Tok("iriref", "".join(buf), line, col, self.text[start:self.i])
            buf.append(c)
            self._advance()

    def _string(self, line: int, col: int) -> _Tok:
        quote = self.text[self.i]
        if self._peek(1) == quote and self._peek(2) == quote:
            raise UnsupportedConstructError("triple-quoted string literal", line, col, quote * 3)
        start = self.i
        self._advance()
        buf = []
        while True:
            if self.i >= len(self.text):
                raise ParseError("unterminated string literal", line, col, self.text[start:start + 20])
            c = self.text[self.i]
            if c == quote:
                self._advance()
                return _Tok("string", "".join(buf), line, col, self.text[start:self.i])
            if c == "\n":
                raise ParseError("newline inside string literal", self.line, self.col, "\\n")
            if c == "\\":
                nxt = self._peek(1)
                if nxt in _ESCAPES:
                    buf.append(_ESCAPES[nxt])
                    self._advance(2)
                elif nxt in "uU":
                    width = 4 if nxt == "u" else 8
                    digits = self.text[self.i + 2:self.i + 2 + width]
                    if len(digits) < width or any(d not in "0123456789abcdefABCDEF" for d in digits):
                        raise ParseError(f"invalid \\{nxt} escape", self.line, self.col, digits)
                    buf.append(chr(int(digits, 16)))
                    self._advance(2 + width)
                else:
                    raise ParseError(f"invalid string escape \\{nxt}", self.line, self.col, f"\\{nxt}")
            else:
                buf.append(c)
                self._advance()

    def _number(self, line: int, col: int) -> _Tok:
        start = self.i
        if self._peek() in "+-":
            self._advance()
        while self._peek().isdigit():
            self._advance()
        is_decimal = False
        if self._peek() == "." and self._peek(1).isdigit():
            is_decimal = True
            self._advance()
            while self._peek().isdigit():
                self._advance()
        if self._peek() in ("e", "E"):
            raise UnsupportedConstructError(
                "numeric literal with exponent", line, col, self.text[start:self.i + 2]
            )
        lexical = self.text[start:self.i]
        return _Tok("decimal" if is_decimal else "integer", lexical, line, col, lexical)

    def _word(self, line: int, col: int) -> _Tok:
        start = self.i
        while self.i < len(self.text) and _WORD.match(self.text[self.i]):
            self._advance()
        word = self.text[start:self.i]
        if self._peek() == ":":
            self._advance()
            local_start = self.i
            while self.i < len(self.text) and _WORD.match(self.text[self.i]):
                self._advance()
            while self.i > local_start and self.text[self.i - 1] == ".":
                self.i -= 1
                self.col -= 1
            local = self.text[local_start:self.i]
            return _Tok("pname", (word, local), line, col, self.text[start:self.i])
        while self.i > start + 1 and self.text[self.i - 1] == ".":
            self.i -= 1
            self.col -= 1
        word = self.text[start:self.i]
        if word == "a":
            return _Tok("a", "a", line, col, word)
        if word in ("true", "false"):
            return _Tok("boolean", word, line, col, word)
        upper = word.upper()
        if upper in _UNSUPPORTED:
            raise UnsupportedConstructError(upper, line, col, word)
        if upper in _KEYWORDS:
            return _Tok("kw", upper, line, col, word)
        raise ParseError(f"unexpected token {word!r}", line, col, word)


class _QueryParser:
    def __init__(self, tokens: list[_Tok]):
        self.tokens = tokens
        self.pos = 0
        self.prefixes = PrefixMap()

    def _peek(self) -> _Tok:
        return self.tokens[self.pos]

    def _take(self) -> _Tok:
        t = self.tokens[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def _expect(self, kind: str, what: str, value: object = None) -> _Tok:
        t = self._peek()
        if t.kind != kind or (value is not None and t.value != value):
            raise ParseError(f"expected {what}", t.line, t.col, t.text)
        return self._take()

    def parse(self) -> Query:
        while self._peek().kind == "kw" and self._peek().value == "PREFIX":
            self._take()
            tok = self._expect("pname", "prefix label ending in ':'")
            prefix, local = tok.value  # type: ignore[misc]
            if local:
                raise ParseError("prefix declaration label must end with ':'", tok.line, tok.col, tok.text)
            iri_tok = self._expect("iriref", "namespace IRI")
            raw: str = iri_tok.value  # type: ignore[assignment]
            if not _ABSOLUTE_IRI.match(raw):
                raise RelativeIriError(raw, iri_tok.line, iri_tok.col)
            self.prefixes.bind(prefix, Iri(raw))

        self._expect("kw", "SELECT", "SELECT")
        distinct = False
        if self._peek().kind == "kw" and self._peek().value == "DISTINCT":
            self._take()
            distinct = True

        select_vars: list[str] | str
        if self._peek().kind == "star":
            self._take()
            select_vars = "*"
        else:
            names = []
            while self._peek().kind == "var":
                names.append(self._take().value)
            if not names:
                t = self._peek()
                raise ParseError("expected projection variables or '*'", t.line, t.col, t.text)
            select_vars = names  # type: ignore[assignment]

        if self._peek().kind == "kw" and self._peek().value == "WHERE":
            self._take()
        self._expect("lbrace", "'{' opening the WHERE block")

        patterns: list[TriplePattern] = []
        filters: list[FilterExpr] = []
        while True:
            t = self._peek()
            if t.kind == "rbrace":
                self._take()
                break
            if t.kind == "eof":
                raise ParseError("unclosed WHERE block: expected '}'", t.line, t.col, t.text)
            if t.kind == "kw" and t.value == "FILTER":
                self._take()
                filters.append(self._filter())
            else:
                patterns.append(self._triple_pattern())
            if self._peek().kind == "dot":
                self._take()

        order_by = None
        limit = None
        offset = None
        while self._peek().kind == "kw":
            kw = self._take()
            if kw.value == "ORDER":
                self._expect("kw", "BY after ORDER", "BY")
                direction = "asc"
                t = self._peek()
                if t.kind == "kw" and t.value in ("ASC", "DESC"):
                    direction = self._take().value.lower()  # type: ignore[union-attr]
                    self._expect("lparen", "'(' after ASC/DESC")
                    var = self._expect("var", "ORDER BY variable")
                    self._expect("rparen", "')'")
                else:
                    var = self._expect("var", "ORDER BY variable")
                if order_by is not None:
                    raise ParseError("ORDER BY given twice", kw.line, kw.col, kw.text)
                order_by = (var.value, direction)
            elif kw.value == "LIMIT":
                tok = self._expect("integer", "LIMIT count")
                limit = int(tok.value)  # type: ignore[arg-type]
                if limit < 0:
                    raise ParseError("LIMIT must be non-negative", tok.line, tok.col, tok.text)
            elif kw.value == "OFFSET":
                tok = self._expect("integer", "OFFSET count")
                offset = int(tok.value)  # type: ignore[arg-type]
                if offset < 0:
                    raise ParseError("OFFSET must be non-negative", tok.line, tok.col, tok.text)
            else:
                raise ParseError(f"unexpected keyword {kw.value}", kw.line, kw.col, kw.text)

        t = self._peek()
        if t.kind != "eof":
            raise ParseError("trailing content after query", t.line, t.col, t.text)

        query = Query(
            prefixes=self.prefixes,
            select_vars=select_vars,
            patterns=patterns,
            filters=filters,
            distinct=distinct,
            order_by=order_by,
            limit=limit,
            offset=offset,
        )
        self._validate(query)
        return query

    def _validate(self, query: Query) -> None:
        pattern_vars = set()
        for p in query.patterns:
            pattern_vars.update(p.variables())
        if query.select_vars != "*":
            for name in query.select_vars:
                if name not in pattern_vars:
                    raise ParseError(
                        f"selected variable ?{name} does not appear in any pattern", 1, 1, f"?{name}"
                    )
        if query.order_by is not None and query.order_by[0] not in pattern_vars:
            raise ParseError(
                f"ORDER BY variable ?{query.order_by[0]} does not appear in any pattern",
                1, 1, f"?{query.order_by[0]}",
            )

    def _triple_pattern(self) -> TriplePattern:
        s = self._pattern_term(allow_literal=False)
        t = self._peek()
        if t.kind == "a":
            self._take()
            p: object = RDF_TYPE
        else:
            p = self._pattern_term(allow_literal=False)
        o = self._pattern_term(allow_literal=True)
        return TriplePattern(s, p, o)  # type: ignore[arg-type]

    def _pattern_term(self, allow_literal: bool):
        t = self._peek()
        if t.kind == "var":
            self._take()
            return Var(t.value)  # type: ignore[arg-type]
        if t.kind == "iriref":
            self._take()
            raw: str = t.value  # type: ignore[assignment]
            if not _ABSOLUTE_IRI.match(raw):
                raise RelativeIriError(raw, t.line, t.col)
            return Iri(raw)
        if t.kind == "pname":
            self._take()
            prefix, local = t.value  # type: ignore[misc]
            ns = self.prefixes.namespace(prefix)
            if ns is None:
                raise UnknownPrefixError(prefix, t.line, t.col)
            return Iri(ns.value + local)
        if t.kind == "blank":
            self._take()
            return BlankNode(t.value)  # type: ignore[arg-type]
        if allow_literal and t.kind in ("string", "integer", "decimal", "boolean"):
            return self._literal()
        raise ParseError("triple pattern term expected", t.line, t.col, t.text)

    def _literal(self) -> Literal:
        t = self._take()
        if t.kind == "integer":
            return Literal(t.value, XSD_INTEGER)  # type: ignore[arg-type]
        if t.kind == "decimal":
            return Literal(t.value, XSD_DECIMAL)  # type: ignore[arg-type]
        if t.kind == "boolean":
            return Literal(t.value, XSD_BOOLEAN)  # type: ignore[arg-type]
        lexical: str = t.value  # type: ignore[assignment]
        nxt = self._peek()
        if nxt.kind == "langtag":
            self._take()
            try:
                return Literal(lexical, RDF_LANG_STRING, nxt.value)  # type: ignore[arg-type]
            except ValueError as exc:
                raise ParseError(str(exc), nxt.line, nxt.col, nxt.text) from exc
        if nxt.kind == "dt":
            self._take()
            dt_term = self._pattern_term(allow_literal=False)
            if not isinstance(dt_term, Iri):
                raise ParseError("datatype must be an IRI", nxt.line, nxt.col, nxt.text)
            try:
                return Literal(lexical, dt_term)
            except ValueError as exc:
                raise ParseError(str(exc), t.line, t.col, t.text) from exc
        return Literal(lexical, XSD_STRING)

    def _filter(self) -> FilterExpr:
        # FILTER ( ?v op const ) | FILTER regex(?v, "pat") | FILTER ( regex(?v, "pat") )
        outer_paren = False
        if self._peek().kind == "lparen":
            self._take()
            outer_paren = True
        t = self._peek()
        if t.kind == "kw" and t.value == "REGEX":
            expr = self._regex_filter()
        else:
            if not outer_paren:
                raise ParseError("expected '(' after FILTER", t.line, t.col, t.text)
            var = self._expect("var", "FILTER variable")
            op_tok = self._expect("op", "comparison operator")
            if op_tok.value not in _COMPARISON_OPS:
                raise ParseError(f"unsupported operator {op_tok.value}", op_tok.line, op_tok.col, op_tok.text)
            const_tok = self._peek()
            if const_tok.kind == "var":
                raise ParseError(
                    "FILTER right-hand side must be a constant", const_tok.line, const_tok.col, const_tok.text
                )
            const = self._pattern_term(allow_literal=True)
            if not isinstance(const, (Iri, Literal, BlankNode)):
                raise ParseError("FILTER constant expected", const_tok.line, const_tok.col, const_tok.text)
            expr = FilterExpr(op=op_tok.value, left=var.value, right=const)  # type: ignore[arg-type]
        if outer_paren:
            self._expect("rparen", "')' closing FILTER")
        return expr

    def _regex_filter(self) -> FilterExpr:
        self._expect("kw", "regex", "REGEX")
        self._expect("lparen", "'(' after regex")
        var = self._expect("var", "regex variable")
        self._expect("comma", "',' between regex arguments")
        pat_tok = self._expect("string", "regex pattern string")
        self._expect("rparen", "')' closing regex")
        pattern: str = pat_tok.value  # type: ignore[assignment]
        try:
            re.compile(pattern)
        except re.error as exc:
            raise ParseError(f"invalid regex: {exc}", pat_tok.line, pat_tok.col, pat_tok.text) from exc
        return FilterExpr(op="regex", left=var.value, right=pattern)  # type: ignore[arg-type]


def parse_query(text: str) -> Query:
    """Parse query text under the subset grammar."""
    tokens = _QueryTokenizer(text).tokens()
    return _QueryParser(tokens).parse()


# -- evaluation --------------------------------------------------------------


def _pattern_var_names(p: TriplePattern) -> list[str]:
    return p.variables()


def _strip_vars(p: TriplePattern) -> TriplePattern:
    slots = [None if isinstance(s, Var) else s for s in p.slots()]
    return TriplePattern(*slots)


def _substitute(p: TriplePattern, row: dict[str, Term]) -> TriplePattern:
    slots = []
    for s in p.slots():
        if isinstance(s, Var) and s.name in row:
            slots.append(row[s.name])
        else:
            slots.append(s)
    return TriplePattern(*slots)


def _numeric(term: Term):
    if isinstance(term, Literal):
        return term.numeric_value()
    return None


def _passes(f: FilterExpr, row: dict[str, Term]) -> bool:
    value = row.get(f.left)
    if value is None:
        return False
    if f.op == "regex":
        if not isinstance(value, Literal):
            return False
        return re.search(f.right, value.lexical) is not None  # type: ignore[arg-type]
    const = f.right
    if f.op in ("=", "!="):
        ln, rn = _numeric(value), _numeric(const)  # type: ignore[arg-type]
        if ln is not None and rn is not None:
            equal = ln == rn
        else:
            equal = value == const
        return equal if f.op == "=" else not equal
    ln, rn = _numeric(value), _numeric(const)  # type: ignore[arg-type]
    if ln is None or rn is None:
        return False
    if f.op == "<":
        return ln < rn
    if f.op == "<=":
        return ln <= rn
    if f.op == ">":
        return ln > rn
    return ln >= rn


def _order_key(term: Term):
    if isinstance(term, Literal):
        n = term.numeric_value()
        if n is not None:
            # Decimal cannot be tuple-compared against int/float reliably; normalize
            return (0, float(n) if isinstance(n, Decimal) else n, "")
        return (1, term.lexical, term.datatype.value + "\x00" + (term.language or ""))
    if isinstance(term, Iri):
        return (2, term.value, "")
    return (3, term.label, "")


def evaluate(query: Query, graph: Graph) -> ResultSet:
    """Join, filter, order, project, deduplicate, and slice."""
    rows: list[dict[str, Term]] = [{}]
    remaining = list(enumerate(query.patterns))
    bound: set[str] = set()

    while remaining and rows:
        def estimate(item: tuple[int, TriplePattern]):
            idx, pat = item
            unbound = sum(1 for name in _pattern_var_names(pat) if name not in bound)
            return (unbound, graph.count_matching(_strip_vars(pat)), idx)

        remaining.sort(key=estimate)
        idx, pat = remaining.pop(0)
        names = _pattern_var_names(pat)
        new_rows: list[dict[str, Term]] = []
        for row in rows:
            concrete = _substitute(pat, row)
            for t in graph.match(concrete):
                ext = dict(row)
                values = (t.subject, t.predicate, t.object)
                ok = True
                for slot, value in zip(pat.slots(), values):
                    if isinstance(slot, Var):
                        if slot.name in ext and ext[slot.name] != value:
                            ok = False
                            break
                        ext[slot.name] = value
                if ok:
                    new_rows.append(ext)
        rows = new_rows
        bound.update(names)

    for f in query.filters:
        rows = [r for r in rows if _passes(f, r)]

    if query.order_by is not None:
        var, direction = query.order_by
        rows.sort(
            key=lambda r: _order_key(r[var]) if var in r else (4, "", ""),
            reverse=(direction == "desc"),
        )

    if query.select_vars == "*":
        out_vars: list[str] = []
        for p in query.patterns:
            for name in _pattern_var_names(p):
                if name not in out_vars:
                    out_vars.append(name)
    else:
        out_vars = list(query.select_vars)

    projected = [{name: r[name] for name in out_vars if name in r} for r in rows]

    if query.distinct:
        seen = set()
        deduped = []
        for r in projected:
            key = tuple((name, r.get(name)) for name in out_vars)
            if key not in seen:
                seen.add(key)
                deduped.append(r)
        projected = deduped

    start = query.offset or 0
    if start:
        projected = projected[start:]
    if query.limit is not None:
        projected = projected[: query.limit]

    return ResultSet(vars=out_vars, rows=projected)


# -- result serialization ----------------------------------------------------


def _json_term(term: Term) -> dict[str, str]:
    if isinstance(term, Iri):
        return {"type": "uri", "value": term.value}
    if isinstance(term, BlankNode):
        return {"type": "bnode", "value": term.label}
    lit: Literal = term
    obj: dict[str, str] = {"type": "literal", "value": lit.lexical}
    if lit.language is not None:
        obj["xml:lang"] = lit.language
    elif lit.datatype != XSD_STRING:
        obj["datatype"] = lit.datatype.value
    return obj


def _csv_term(term: Term) -> str:
    if isinstance(term, Iri):
        return term.value
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    return term.lexical


def serialize_results(rs: ResultSet, format: str = "sparql-json") -> str:
    """Render a result set as W3C SPARQL JSON or RFC-4180 CSV."""
    if format == "sparql-json":
        payload = {
            "head": {"vars": list(rs.vars)},
            "results": {
                "bindings": [
                    {name: _json_term(row[name]) for name in rs.vars if name in row}
                    for row in rs.rows
                ]
            },
        }
        return json.dumps(payload, indent=2)
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(rs.vars)
        for row in rs.rows:
            writer.writerow([_csv_term(row[name]) if name in row else "" for name in rs.vars])
        return buf.getvalue()
    raise ValueError(f"unknown result format: {format!r}")
