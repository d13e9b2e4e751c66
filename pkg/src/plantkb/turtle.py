"""Turtle reader and writer for the dialect used by the bundled ontologies.

Supported syntax: @prefix/@base and their SPARQL-style PREFIX/BASE forms,
absolute and base-resolved <IRI> references, prefixed names, the ``a``
keyword, predicate lists with ``;``, object lists with ``,``, labeled and
anonymous blank nodes (including ``[ pred obj ; ... ]`` property lists),
quoted strings with the standard single-line escapes, language tags,
``^^`` datatypes, bare integer / decimal / boolean literals, and ``#``
comments.

Out-of-scope constructs are rejected loudly rather than mis-read: RDF
collections ``( ... )``, triple-quoted strings, and numeric literals with
exponents all raise :class:`UnsupportedConstructError` naming the construct.

The writer is deterministic: given equal graphs and prefix maps it emits
byte-identical documents, and any document it emits parses back to an equal
graph.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from urllib.parse import urljoin

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
    term_sort_key,
)

_ABSOLUTE_IRI = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_WORD_CHAR = re.compile(r"[A-Za-z0-9_.\-]")
_PNAME_PREFIX = re.compile(r"^(?:[A-Za-z][A-Za-z0-9_.\-]*)?$")
_LANGTAG = re.compile(r"^[A-Za-z]+(?:-[A-Za-z0-9]+)*$")
_BARE_INTEGER = re.compile(r"^[+-]?[0-9]+$")
_BARE_DECIMAL = re.compile(r"^[+-]?[0-9]*\.[0-9]+$")

_ESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


@dataclass(slots=True)
class _Token:
    kind: str
    value: object
    line: int
    col: int
    text: str


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.i = 0
        self.line = 1
        self.col = 1

    def error(self, message: str, snippet: str = "") -> ParseError:
        return ParseError(message, self.line, self.col, snippet)

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.i < len(self.text):
                if self.text[self.i] == "\n":
                    self.line += 1
                    self.col = 1
                else:
                    self.col += 1
                self.i += 1

    def _peek(self, offset: int = 0) -> str:
        j = self.i + offset
        return self.text[j] if j < len(self.text) else ""

    def tokens(self) -> list[_Token]:
        out = []
        while True:
            tok = self._next()
            out.append(tok)
            if tok.kind == "eof":
                return out

    def _next(self) -> _Token:
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
            return _Token("eof", None, self.line, self.col, "")

        line, col = self.line, self.col
        ch = self.text[self.i]

        if ch == "(":
            raise UnsupportedConstructError("RDF collection", line, col, "(")
        if ch == "<":
            return self._iri(line, col)
        if ch in "\"'":
            return self._string(line, col)
        if ch == "@":
            return self._at_word(line, col)
        if ch == "_" and self._peek(1) == ":":
            return self._blank(line, col)
        if ch.isdigit() or (ch in "+-" and (self._peek(1).isdigit() or self._peek(1) == ".")):
            return self._number(line, col)
        if ch == "." and self._peek(1).isdigit():
            return self._number(line, col)
        if ch == "^" and self._peek(1) == "^":
            self._advance(2)
            return _Token("dt", "^^", line, col, "^^")
        if ch in ".;,[]":
            self._advance()
            kind = {".": "dot", ";": "semi", ",": "comma", "[": "lbracket", "]": "rbracket"}[ch]
            return _Token(kind, ch, line, col, ch)
        if ch == ")":
            raise UnsupportedConstructError("RDF collection", line, col, ")")
        if _WORD_CHAR.match(ch) or ch == ":":
            return self._word_or_pname(line, col)
        raise self.error(f"unexpected character {ch!r}", ch)

    def _iri(self, line: int, col: int) -> _Token:
        start = self.i
        self._advance()
        buf = []
        while True:
            if self.i >= len(self.text):
                raise ParseError("unterminated IRI reference", line, col, self.text[start:start + 20])
            ch = self.text[self.i]
            if ch == ">":
                self._advance()
                return _Token("iriref", "".join(buf), line, col, self.text[start:self.i])
            if ch == "\\":
                buf.append(self._uchar(line, col))
            elif ch in " \t\r\n<\"":
                raise ParseError(f"invalid character {ch!r} in IRI reference", self.line, self.col, ch)
            else:
                buf.append(ch)
                self._advance()

    def _uchar(self, line: int, col: int) -> str:
        # caller is positioned at the backslash
        self._advance()
        kind = self._peek()
        if kind == "u":
            width = 4
        elif kind == "U":
            width = 8
        else:
            raise ParseError(f"invalid escape \\{kind} in IRI reference", self.line, self.col, f"\\{kind}")
        self._advance()
        hexdigits = self.text[self.i:self.i + width]
        if len(hexdigits) < width or any(c not in "0123456789abcdefABCDEF" for c in hexdigits):
            raise ParseError(f"invalid \\{kind} escape", line, col, hexdigits)
        self._advance(width)
        return chr(int(hexdigits, 16))

    def _string(self, line: int, col: int) -> _Token:
        quote = self.text[self.i]
        if self._peek(1) == quote and self._peek(2) == quote:
            raise UnsupportedConstructError("triple-quoted string literal", line, col, quote * 3)
        start = self.i
        self._advance()
        buf = []
        while True:
            if self.i >= len(self.text):
                raise ParseError("unterminated string literal", line, col, self.text[start:start + 20])
            ch = self.text[self.i]
            if ch == quote:
                self._advance()
                return _Token("string", "".join(buf), line, col, self.text[start:self.i])
            if ch == "\n":
                raise ParseError("newline inside single-line string literal", self.line, self.col, "\\n")
            if ch == "\\":
                nxt = self._peek(1)
                if nxt in _ESCAPES:
                    buf.append(_ESCAPES[nxt])
                    self._advance(2)
                elif nxt in "uU":
                    buf.append(self._uchar(line, col))
                else:
                    raise ParseError(f"invalid string escape \\{nxt}", self.line, self.col, f"\\{nxt}")
            else:
                buf.append(ch)
                self._advance()

    def _at_word(self, line: int, col: int) -> _Token:
        start = self.i
        self._advance()
        word_start = self.i
        while self.i < len(self.text) and (self.text[self.i].isalnum() or self.text[self.i] == "-"):
            self._advance()
        word = self.text[word_start:self.i]
        if word == "prefix":
            return _Token("prefix_directive", "@prefix", line, col, "@prefix")
        if word == "base":
            return _Token("base_directive", "@base", line, col, "@base")
        if _LANGTAG.match(word):
            return _Token("langtag", word, line, col, self.text[start:self.i])
        raise ParseError(f"malformed language tag or directive @{word}", line, col, f"@{word}")

    def _blank(self, line: int, col: int) -> _Token:
        start = self.i
        self._advance(2)
        label_start = self.i
        while self.i < len(self.text) and _WORD_CHAR.match(self.text[self.i]):
            self._advance()
        # a trailing dot terminates the statement, not the label
        while self.i > label_start and self.text[self.i - 1] == ".":
            self.i -= 1
            self.col -= 1
        label = self.text[label_start:self.i]
        if not label:
            raise ParseError("blank node label expected after '_:'", line, col, "_:")
        return _Token("blank", label, line, col, self.text[start:self.i])

    def _number(self, line: int, col: int) -> _Token:
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
        if not any(c.isdigit() for c in lexical):
            raise ParseError("digits expected in numeric literal", line, col, lexical)
        return _Token("decimal" if is_decimal else "integer", lexical, line, col, lexical)

    def _word_or_pname(self, line: int, col: int) -> _Token:
        start = self.i
        while self.i < len(self.text) and _WORD_CHAR.match(self.text[self.i]):
            self._advance()
        word = self.text[start:self.i]
        if self._peek() == ":":
            prefix = word
            if not _PNAME_PREFIX.match(prefix):
                raise ParseError(f"malformed prefix label {prefix!r}", line, col, prefix)
            self._advance()
            local_start = self.i
            while self.i < len(self.text) and _WORD_CHAR.match(self.text[self.i]):
                self._advance()
            # trailing dots belong to the statement terminator
            while self.i > local_start and self.text[self.i - 1] == ".":
                self.i -= 1
                self.col -= 1
            local = self.text[local_start:self.i]
            text = self.text[start:self.i]
            return _Token("pname", (prefix, local), line, col, text)
        # trailing dots after a bare word are terminators too
        while self.i > start + 1 and self.text[self.i - 1] == ".":
            self.i -= 1
            self.col -= 1
        word = self.text[start:self.i]
        if word == "a":
            return _Token("a", "a", line, col, word)
        if word in ("true", "false"):
            return _Token("boolean", word, line, col, word)
        if word.lower() == "prefix":
            return _Token("sparql_prefix", word, line, col, word)
        if word.lower() == "base":
            return _Token("sparql_base", word, line, col, word)
        raise ParseError(f"unexpected token {word!r}", line, col, word)


@dataclass(slots=True)
class ParseOutcome:
    """A parsed document: the graph plus the base IRI in effect at the end."""

    graph: Graph
    base_iri: Iri | None

    @property
    def prefixes(self) -> PrefixMap:
        return self.graph.prefix_map


class _Parser:
    def __init__(self, tokens: list[_Token], base: Iri | None):
        self.tokens = tokens
        self.pos = 0
        self.base = base
        self.graph = Graph()
        used = {t.value for t in tokens if t.kind == "blank"}
        self._used_labels: set[str] = set(used)  # type: ignore[arg-type]
        self._anon_counter = 0

    # -- token plumbing ---------------------------------------------------

    def _peek(self) -> _Token:
        return self.tokens[self.pos]

    def _take(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def _expect(self, kind: str, what: str) -> _Token:
        tok = self._peek()
        if tok.kind != kind:
            raise ParseError(f"expected {what}", tok.line, tok.col, tok.text)
        return self._take()

    # -- entry --------------------------------------------------------------

    def parse(self) -> ParseOutcome:
        while self._peek().kind != "eof":
            kind = self._peek().kind
            if kind == "prefix_directive":
                self._prefix_directive(dotted=True)
            elif kind == "base_directive":
                self._base_directive(dotted=True)
            elif kind == "sparql_prefix":
                self._prefix_directive(dotted=False)
            elif kind == "sparql_base":
                self._base_directive(dotted=False)
            else:
                self._triples_statement()
        return ParseOutcome(graph=self.graph, base_iri=self.base)

    def _prefix_directive(self, dotted: bool) -> None:
        self._take()
        tok = self._expect("pname", "prefix label ending in ':'")
        prefix, local = tok.value  # type: ignore[misc]
        if local:
            raise ParseError("prefix declaration label must end with ':'", tok.line, tok.col, tok.text)
        ns_tok = self._expect("iriref", "namespace IRI")
        ns = self._resolve_iri(ns_tok)
        self.graph.prefix_map.bind(prefix, ns)
        if dotted:
            self._expect("dot", "'.' after @prefix directive")

    def _base_directive(self, dotted: bool) -> None:
        self._take()
        tok = self._expect("iriref", "base IRI")
        self.base = self._resolve_iri(tok)
        if dotted:
            self._expect("dot", "'.' after @base directive")

    # -- statements ----------------------------------------------------------

    def _triples_statement(self) -> None:
        tok = self._peek()
        if tok.kind == "lbracket":
            subject = self._bnode_property_list()
            if self._peek().kind != "dot":
                self._predicate_object_list(subject)
        else:
            subject = self._subject()
            self._predicate_object_list(subject)
        self._expect("dot", "'.' at end of statement")

    def _subject(self) -> Iri | BlankNode:
        tok = self._peek()
        if tok.kind in ("iriref", "pname"):
            return self._iri_term()
        if tok.kind == "blank":
            self._take()
            return BlankNode(tok.value)  # type: ignore[arg-type]
        raise ParseError("subject expected (IRI or blank node)", tok.line, tok.col, tok.text)

    def _predicate_object_list(self, subject: Iri | BlankNode) -> None:
        while True:
            predicate = self._verb()
            self._object_list(subject, predicate)
            if self._peek().kind != "semi":
                return
            while self._peek().kind == "semi":
                self._take()
            if self._peek().kind in ("dot", "rbracket", "eof"):
                return

    def _verb(self) -> Iri:
        tok = self._peek()
        if tok.kind == "a":
            self._take()
            return RDF_TYPE
        if tok.kind in ("iriref", "pname"):
            return self._iri_term()
        raise ParseError("predicate expected (IRI or 'a')", tok.line, tok.col, tok.text)

    def _object_list(self, subject: Iri | BlankNode, predicate: Iri) -> None:
        while True:
            obj = self._object()
            self.graph.insert(Triple(subject, predicate, obj))
            if self._peek().kind != "comma":
                return
            self._take()

    def _object(self) -> Term:
        tok = self._peek()
        if tok.kind in ("iriref", "pname"):
            return self._iri_term()
        if tok.kind == "blank":
            self._take()
            return BlankNode(tok.value)  # type: ignore[arg-type]
        if tok.kind == "lbracket":
            return self._bnode_property_list()
        if tok.kind == "string":
            return self._string_literal()
        if tok.kind == "integer":
            self._take()
            return Literal(tok.value, XSD_INTEGER)  # type: ignore[arg-type]
        if tok.kind == "decimal":
            self._take()
            return Literal(tok.value, XSD_DECIMAL)  # type: ignore[arg-type]
        if tok.kind == "boolean":
            self._take()
            return Literal(tok.value, XSD_BOOLEAN)  # type: ignore[arg-type]
        raise ParseError("object expected", tok.line, tok.col, tok.text)

    def _bnode_property_list(self) -> BlankNode:
        open_tok = self._expect("lbracket", "'['")
        node = self._fresh_bnode()
        if self._peek().kind == "rbracket":
            self._take()
            return node
        self._predicate_object_list(node)
        tok = self._peek()
        if tok.kind != "rbracket":
            raise ParseError("']' expected to close blank node property list",
                             open_tok.line, open_tok.col, tok.text)
        self._take()
        return node

    def _fresh_bnode(self) -> BlankNode:
        while True:
            self._anon_counter += 1
            label = f"b{self._anon_counter}"
            if label not in self._used_labels:
                self._used_labels.add(label)
                return BlankNode(label)

    def _string_literal(self) -> Literal:
        tok = self._take()
        lexical: str = tok.value  # type: ignore[assignment]
        nxt = self._peek()
        if nxt.kind == "langtag":
            self._take()
            try:
                return Literal(lexical, RDF_LANG_STRING, nxt.value)  # type: ignore[arg-type]
            except ValueError as exc:
                raise ParseError(str(exc), nxt.line, nxt.col, nxt.text) from exc
        if nxt.kind == "dt":
            self._take()
            dt = self._iri_term()
            try:
                return Literal(lexical, dt)
            except ValueError as exc:
                raise ParseError(str(exc), tok.line, tok.col, tok.text) from exc
        return Literal(lexical, XSD_STRING)

    # -- IRI handling -----------------------------------------------------------

    def _iri_term(self) -> Iri:
        tok = self._take()
        if tok.kind == "iriref":
            return self._resolve_iri(tok)
        if tok.kind == "pname":
            prefix, local = tok.value  # type: ignore[misc]
            ns = self.graph.prefix_map.namespace(prefix)
            if ns is None:
                raise UnknownPrefixError(prefix, tok.line, tok.col)
            return Iri(ns.value + local)
        raise ParseError("IRI expected", tok.line, tok.col, tok.text)

    def _resolve_iri(self, tok: _Token) -> Iri:
        raw: str = tok.value  # type: ignore[assignment]
        if _ABSOLUTE_IRI.match(raw):
            return Iri(raw)
        if self.base is None:
            raise RelativeIriError(raw, tok.line, tok.col)
        return Iri(urljoin(self.base.value, raw))


def parse_turtle(text: str, base: Iri | str | None = None) -> ParseOutcome:
    """Parse a Turtle document into a fresh :class:`Graph`.

    ``base`` seeds relative-IRI resolution; an in-document @base overrides it.
    """
    if isinstance(base, str):
        base = Iri(base)
    tokens = _Tokenizer(text).tokens()
    return _Parser(tokens, base).parse()


# -- serialization ------------------------------------------------------------


def _escape_string(s: str) -> str:
    out = []
    for ch in s:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "\b":
            out.append("\\b")
        elif ch == "\f":
            out.append("\\f")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _render_iri(iri: Iri, pm: PrefixMap) -> str:
    compact = pm.compact(iri)
    if compact is not None:
        return compact
    return f"<{iri.value}>"


def _render_term(term: Term, pm: PrefixMap) -> str:
    if isinstance(term, Iri):
        return _render_iri(term, pm)
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    lit: Literal = term
    if lit.language is not None:
        return f'"{_escape_string(lit.lexical)}"@{lit.language}'
    if lit.datatype == XSD_INTEGER and _BARE_INTEGER.match(lit.lexical):
        return lit.lexical
    if lit.datatype == XSD_DECIMAL and _BARE_DECIMAL.match(lit.lexical):
        return lit.lexical
    if lit.datatype == XSD_BOOLEAN and lit.lexical in ("true", "false"):
        return lit.lexical
    quoted = f'"{_escape_string(lit.lexical)}"'
    if lit.datatype == XSD_STRING:
        return quoted
    return f"{quoted}^^{_render_iri(lit.datatype, pm)}"


def _render_verb(predicate: Iri, pm: PrefixMap) -> str:
    if predicate == RDF_TYPE:
        return "a"
    return _render_iri(predicate, pm)


def serialize_turtle(graph: Graph, prefix_map: PrefixMap | None = None) -> str:
    """Write the graph as Turtle: sorted prefixes, subject-grouped sorted triples."""
    pm = prefix_map if prefix_map is not None else graph.prefix_map
    lines = []
    for prefix, ns in pm.items():
        lines.append(f"@prefix {prefix}: <{ns.value}> .")

    triples = sorted(
        graph,
        key=lambda t: (term_sort_key(t.subject), term_sort_key(t.predicate), term_sort_key(t.object)),
    )
    if lines and triples:
        lines.append("")

    i = 0
    while i < len(triples):
        subject = triples[i].subject
        group = []
        while i < len(triples) and triples[i].subject == subject:
            group.append(triples[i])
            i += 1
        subj_text = _render_term(subject, pm)
        parts = []
        j = 0
        while j < len(group):
            predicate = group[j].predicate
            objs = []
            while j < len(group) and group[j].predicate == predicate:
                objs.append(_render_term(group[j].object, pm))
                j += 1
            parts.append(f"{_render_verb(predicate, pm)} {', '.join(objs)}")
        if len(parts) == 1:
            lines.append(f"{subj_text} {parts[0]} .")
        else:
            lines.append(f"{subj_text} {parts[0]} ;")
            for part in parts[1:-1]:
                lines.append(f"    {part} ;")
            lines.append(f"    {parts[-1]} .")
    return "\n".join(lines) + "\n"
