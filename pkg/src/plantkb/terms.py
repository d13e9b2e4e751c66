"""RDF term and triple model.

A term is exactly one of :class:`Iri`, :class:`BlankNode`, or
:class:`Literal`.  All three are immutable and hashable so they can live in
sets and serve as dictionary keys.  :class:`Var` is not an RDF term; it is a
named placeholder used inside :class:`TriplePattern` by the query layer.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Union

from .errors import MalformedTripleError

_IRI_FORBIDDEN = re.compile(r'[\s<>"]')
_BNODE_LABEL = re.compile(r"^[A-Za-z0-9_](?:[A-Za-z0-9_.-]*[A-Za-z0-9_-])?$")
_LANG_TAG = re.compile(r"^[A-Za-z]+(?:-[A-Za-z0-9]+)*$")

XSD = "http://www.w3.org/2001/XMLSchema#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"


@dataclass(frozen=True, slots=True)
class Iri:
    """An absolute IRI, compared as raw text (no normalization)."""

    value: str

    def __post_init__(self):
        if not self.value:
            raise ValueError("IRI must be non-empty")
        if _IRI_FORBIDDEN.search(self.value):
            raise ValueError(f"IRI contains whitespace, quote, or angle bracket: {self.value!r}")

    def local_name(self) -> str:
        """Fragment after the last '#' or '/', or the whole IRI if neither occurs."""
        for sep in "#/":
            if sep in self.value:
                return self.value.rsplit(sep, 1)[1]
        return self.value

    def __repr__(self) -> str:
        return f"<{self.value}>"


# Vocabulary constants.  Kept here so every module shares one object per IRI.
RDF_TYPE = Iri(RDF + "type")
RDF_LANG_STRING = Iri(RDF + "langString")
RDFS_SUBCLASSOF = Iri(RDFS + "subClassOf")
RDFS_SUBPROPERTYOF = Iri(RDFS + "subPropertyOf")
RDFS_DOMAIN = Iri(RDFS + "domain")
RDFS_RANGE = Iri(RDFS + "range")
RDFS_LABEL = Iri(RDFS + "label")
OWL_CLASS = Iri(OWL + "Class")
OWL_THING = Iri(OWL + "Thing")
OWL_OBJECT_PROPERTY = Iri(OWL + "ObjectProperty")
OWL_DATATYPE_PROPERTY = Iri(OWL + "DatatypeProperty")
OWL_ANNOTATION_PROPERTY = Iri(OWL + "AnnotationProperty")
OWL_TRANSITIVE_PROPERTY = Iri(OWL + "TransitiveProperty")
OWL_SYMMETRIC_PROPERTY = Iri(OWL + "SymmetricProperty")
OWL_INVERSE_OF = Iri(OWL + "inverseOf")
OWL_DISJOINT_WITH = Iri(OWL + "disjointWith")
XSD_STRING = Iri(XSD + "string")
XSD_INTEGER = Iri(XSD + "integer")
XSD_DECIMAL = Iri(XSD + "decimal")
XSD_BOOLEAN = Iri(XSD + "boolean")
XSD_DOUBLE = Iri(XSD + "double")
XSD_FLOAT = Iri(XSD + "float")

_INTEGER_SHAPE = re.compile(r"^[+-]?[0-9]+$")
_DECIMAL_SHAPE = re.compile(r"^[+-]?(?:[0-9]+\.[0-9]*|\.?[0-9]+)$")


@dataclass(frozen=True, slots=True)
class BlankNode:
    """An anonymous node whose label is meaningful within one graph only."""

    label: str

    def __post_init__(self):
        if not _BNODE_LABEL.match(self.label):
            raise ValueError(f"invalid blank node label: {self.label!r}")

    def __repr__(self) -> str:
        return f"_:{self.label}"


@dataclass(frozen=True, slots=True)
class Literal:
    """A data value: lexical form plus datatype, with an optional language tag.

    Identity is the (lexical, datatype, language) triple, so "5"^^xsd:integer
    and "5"^^xsd:string are distinct terms.
    """

    lexical: str
    datatype: Iri = XSD_STRING
    language: str | None = None

    def __post_init__(self):
        if self.language is not None:
            if self.datatype != RDF_LANG_STRING:
                raise ValueError("language tag requires the rdf:langString datatype")
            if not _LANG_TAG.match(self.language):
                raise ValueError(f"malformed language tag: {self.language!r}")
        elif self.datatype == RDF_LANG_STRING:
            raise ValueError("rdf:langString literal requires a language tag")
        if self.datatype in (XSD_INTEGER,) and not _INTEGER_SHAPE.match(self.lexical):
            raise ValueError(f"not a valid xsd:integer lexical form: {self.lexical!r}")
        if self.datatype == XSD_DECIMAL and not _DECIMAL_SHAPE.match(self.lexical):
            raise ValueError(f"not a valid xsd:decimal lexical form: {self.lexical!r}")
        if self.datatype in (XSD_DOUBLE, XSD_FLOAT):
            try:
                float(self.lexical)
            except ValueError:
                raise ValueError(f"not a valid {self.datatype.local_name()} lexical form: {self.lexical!r}") from None

    def numeric_value(self) -> int | Decimal | float | None:
        """Numeric interpretation, or None when this literal is not a number."""
        if self.datatype == XSD_INTEGER:
            return int(self.lexical)
        if self.datatype == XSD_DECIMAL:
            try:
                return Decimal(self.lexical)
            except InvalidOperation:  # pragma: no cover - blocked by __post_init__
                return None
        if self.datatype in (XSD_DOUBLE, XSD_FLOAT):
            value = float(self.lexical)
            return None if value != value else value  # NaN is not orderable
        return None

    def __repr__(self) -> str:
        if self.language:
            return f'"{self.lexical}"@{self.language}'
        if self.datatype == XSD_STRING:
            return f'"{self.lexical}"'
        return f'"{self.lexical}"^^<{self.datatype.value}>'


Term = Union[Iri, BlankNode, Literal]


@dataclass(frozen=True, slots=True)
class Var:
    """A named variable slot in a triple pattern (query layer only)."""

    name: str

    def __post_init__(self):
        if not re.match(r"^[A-Za-z_][A-Za-z0-9_]*$", self.name):
            raise ValueError(f"invalid variable name: {self.name!r}")

    def __repr__(self) -> str:
        return f"?{self.name}"


# A pattern slot: a concrete term, a named variable, or None (anonymous wildcard).
PatternSlot = Union[Iri, BlankNode, Literal, Var, None]


@dataclass(frozen=True, slots=True)
class Triple:
    """One subject-predicate-object statement."""

    subject: Iri | BlankNode
    predicate: Iri
    object: Term

    def __post_init__(self):
        if not isinstance(self.subject, (Iri, BlankNode)):
            raise MalformedTripleError(f"subject must be an IRI or blank node, got {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise MalformedTripleError(f"predicate must be an IRI, got {self.predicate!r}")
        if not isinstance(self.object, (Iri, BlankNode, Literal)):
            raise MalformedTripleError(f"object must be an RDF term, got {self.object!r}")

    def __repr__(self) -> str:
        return f"({self.subject!r} {self.predicate!r} {self.object!r})"


@dataclass(frozen=True, slots=True)
class TriplePattern:
    """A triple with any slot possibly a variable or wildcard.

    A pattern with three concrete slots is a membership test.  The same
    variable appearing in two slots only matches triples carrying the same
    term in both positions.
    """

    subject: PatternSlot = None
    predicate: PatternSlot = None
    object: PatternSlot = None

    def slots(self) -> tuple[PatternSlot, PatternSlot, PatternSlot]:
        return (self.subject, self.predicate, self.object)

    def variables(self) -> list[str]:
        """Variable names in slot order, without duplicates."""
        names: list[str] = []
        for slot in self.slots():
            if isinstance(slot, Var) and slot.name not in names:
                names.append(slot.name)
        return names

    def is_concrete(self) -> bool:
        return all(isinstance(s, (Iri, BlankNode, Literal)) for s in self.slots())


def term_sort_key(term: Term) -> tuple:
    """Total, deterministic order over terms: IRIs, then blank nodes, then literals."""
    if isinstance(term, Iri):
        return (0, term.value, "", "")
    if isinstance(term, BlankNode):
        return (1, term.label, "", "")
    return (2, term.lexical, term.datatype.value, term.language or "")
