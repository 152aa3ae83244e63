"""Reading and writing the ontology and alignment file formats.

Ontology documents (``.ofn``) use a fixed functional-style subset:
``Prefix(name:=<iri>)`` lines followed by one ``Ontology(<iri> item*)``
block whose items are declarations, subclass/equivalence/disjointness
axioms, property domain/range axioms, and ``rdfs:label`` annotations.
Class expressions cover some/all restrictions, data restrictions, and
boolean combinations. The serializer is canonical: declarations first
(classes, object properties, data properties, each sorted), axioms in
stored order, so equal ontologies serialize to identical bytes.

Alignments (``.tsv``) are tab-separated with a ``#source``-prefixed
header; rows are ordered by descending confidence then IRIs, confidences
carry exactly three decimals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple

from .alignment import Alignment, Correspondence
from .errors import AlignmentFormatError, ParseError
from .model import (
    Axiom,
    ClassExpression,
    ComplementOf,
    DataPropertyDomain,
    DataPropertyRange,
    DataSome,
    DisjointClasses,
    EquivalentClasses,
    IntersectionOf,
    Iri,
    Label,
    Named,
    ObjectAll,
    ObjectPropertyDomain,
    ObjectPropertyRange,
    ObjectSome,
    Ontology,
    SubClassOf,
    UnionOf,
)

__all__ = [
    "ParseDiagnostic",
    "parse_ontology",
    "serialize_ontology",
    "parse_alignment",
    "serialize_alignment",
    "ALIGNMENT_HEADER",
]


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    severity: str = "error"  # "error" | "warning"

    def __post_init__(self) -> None:
        if self.line < 1 or self.column < 1:
            raise ValueError("diagnostic positions are 1-based")
        if self.severity not in ("error", "warning"):
            raise ValueError(f"unknown severity {self.severity!r}")


BUILTIN_PREFIXES = {
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
    "owl": "http://www.w3.org/2002/07/owl#",
}
RDFS_LABEL = Iri(BUILTIN_PREFIXES["rdfs"] + "label")

# OWL functional-syntax constructs we recognize but deliberately exclude,
# so the reporter can name them instead of calling them syntax errors.
_UNSUPPORTED_CONSTRUCTS = frozenset(
    """
    AnnotationProperty NamedIndividual Datatype ObjectInverseOf
    DataAllValuesFrom DataHasValue DataMinCardinality DataMaxCardinality
    DataExactCardinality ObjectHasValue ObjectHasSelf ObjectMinCardinality
    ObjectMaxCardinality ObjectExactCardinality ObjectOneOf DataOneOf
    DataComplementOf DataUnionOf DataIntersectionOf DatatypeRestriction
    SubObjectPropertyOf SubDataPropertyOf EquivalentObjectProperties
    EquivalentDataProperties DisjointObjectProperties DisjointDataProperties
    InverseObjectProperties FunctionalObjectProperty FunctionalDataProperty
    InverseFunctionalObjectProperty ReflexiveObjectProperty
    IrreflexiveObjectProperty SymmetricObjectProperty AsymmetricObjectProperty
    TransitiveObjectProperty DatatypeDefinition HasKey SameIndividual
    DifferentIndividuals ClassAssertion ObjectPropertyAssertion
    NegativeObjectPropertyAssertion DataPropertyAssertion
    NegativeDataPropertyAssertion AnnotationPropertyDomain
    AnnotationPropertyRange SubAnnotationPropertyOf Import DisjointUnion
    ObjectPropertyChain
    """.split()
)

_PN_NAME = r"[A-Za-z_][A-Za-z0-9_.\-]*"
_TOKEN_RE = re.compile(
    rf"""
      (?P<ws>\s+)
    | (?P<iriref><[^<>\s]*>)
    | (?P<string>"(?:[^"\\]|\\.)*")
    | (?P<lp>\()
    | (?P<rp>\))
    | (?P<prefixdef>(?:{_PN_NAME})?:=)
    | (?P<pname>(?:{_PN_NAME})?:{_PN_NAME})
    | (?P<name>{_PN_NAME})
    """,
    re.VERBOSE,
)


class _Token(NamedTuple):
    kind: str
    text: str
    line: int
    col: int


def _error(line: int, col: int, message: str) -> ParseError:
    return ParseError([ParseDiagnostic(line, col, message, "error")])


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos] == '"':
                raise _error(line, col, "unterminated string literal")
            raise _error(line, col, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        raw = m.group()
        if kind != "ws":
            tokens.append(_Token(kind, raw, line, col))
        newlines = raw.count("\n")
        if newlines:
            line += newlines
            col = len(raw) - raw.rfind("\n")
        else:
            col += len(raw)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


def _unescape_string(token: _Token) -> str:
    raw = token.text[1:-1]
    out: list[str] = []
    i = 0
    while i < len(raw):
        ch = raw[i]
        if ch == "\\":
            nxt = raw[i + 1]
            if nxt not in ('"', "\\"):
                raise _error(token.line, token.col, f"unsupported escape sequence \\{nxt}")
            out.append(nxt)
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _escape_string(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0
        self.prefixes: dict[str, str] = dict(BUILTIN_PREFIXES)
        self.declared: dict[Iri, tuple[str, _Token]] = {}
        self.usages: list[tuple[Iri, str, _Token]] = []
        self.diagnostics: list[ParseDiagnostic] = []

    # --- token plumbing

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.take()
        if tok.kind != kind:
            raise _error(tok.line, tok.col, f"expected {what}, found {tok.text or 'end of input'!r}")
        return tok

    # --- document structure

    def parse_document(self) -> tuple[Ontology, list[ParseDiagnostic]]:
        while self.peek().kind == "name" and self.peek().text == "Prefix":
            self._parse_prefix()
        head = self.take()
        if head.kind != "name" or head.text != "Ontology":
            raise _error(head.line, head.col, f"expected 'Ontology', found {head.text or 'end of input'!r}")
        self.expect("lp", "'('")
        iri_tok = self.expect("iriref", "ontology IRI")
        onto_iri = Iri(self._strip_iriref(iri_tok))
        if "" not in self.prefixes:
            base = onto_iri.full
            self.prefixes[""] = base if base.endswith(("#", "/")) else base + "#"

        axioms: list[Axiom] = []
        while True:
            tok = self.peek()
            if tok.kind == "rp":
                self.take()
                break
            if tok.kind == "eof":
                raise _error(tok.line, tok.col, "unexpected end of input inside Ontology(...)")
            item = self._parse_item()
            if item is not None:
                axioms.append(item)

        trailing = self.peek()
        if trailing.kind != "eof":
            if trailing.kind == "name" and trailing.text == "Ontology":
                raise _error(trailing.line, trailing.col, "duplicate ontology declaration")
            raise _error(trailing.line, trailing.col, "unexpected content after the ontology block")

        return self._finish(onto_iri, axioms)

    def _parse_prefix(self) -> None:
        self.take()  # Prefix
        self.expect("lp", "'('")
        decl = self.take()
        if decl.kind != "prefixdef":
            raise _error(decl.line, decl.col, "expected a prefix binding like name:=<iri>")
        name = decl.text[:-2]
        iri_tok = self.expect("iriref", "prefix IRI")
        self.expect("rp", "')'")
        self.prefixes[name] = self._strip_iriref(iri_tok)

    def _strip_iriref(self, tok: _Token) -> str:
        inner = tok.text[1:-1]
        if not inner:
            raise _error(tok.line, tok.col, "empty IRI reference")
        return inner

    def _resolve_ref(self, tok: _Token) -> Iri:
        if tok.kind == "iriref":
            return Iri(self._strip_iriref(tok))
        prefix, _, local = tok.text.partition(":")
        if prefix not in self.prefixes:
            raise _error(tok.line, tok.col, f"undefined prefix {prefix + ':'!r}")
        return Iri(self.prefixes[prefix] + local)

    def _take_ref(self, what: str) -> tuple[Iri, _Token]:
        tok = self.take()
        if tok.kind not in ("pname", "iriref"):
            raise _error(tok.line, tok.col, f"expected {what}, found {tok.text or 'end of input'!r}")
        return self._resolve_ref(tok), tok

    def _use(self, iri: Iri, kind: str, tok: _Token) -> Iri:
        self.usages.append((iri, kind, tok))
        return iri

    # --- items

    def _parse_item(self) -> Axiom | None:
        tok = self.take()
        if tok.kind != "name":
            raise _error(tok.line, tok.col, f"expected an axiom or declaration, found {tok.text!r}")
        head = tok.text
        if head == "Declaration":
            self._parse_declaration()
            return None
        if head == "SubClassOf":
            self.expect("lp", "'('")
            sub = self._parse_ce()
            sup = self._parse_ce()
            self.expect("rp", "')'")
            return SubClassOf(sub, sup)
        if head == "EquivalentClasses":
            self.expect("lp", "'('")
            a = self._parse_ce()
            b = self._parse_ce()
            self.expect("rp", "')'")
            return EquivalentClasses(a, b)
        if head == "DisjointClasses":
            return self._parse_disjoint(tok)
        if head == "ObjectPropertyDomain":
            self.expect("lp", "'('")
            prop, ptok = self._take_ref("an object property")
            self._use(prop, "object-property", ptok)
            ce = self._parse_ce()
            self.expect("rp", "')'")
            return ObjectPropertyDomain(prop, ce)
        if head == "ObjectPropertyRange":
            self.expect("lp", "'('")
            prop, ptok = self._take_ref("an object property")
            self._use(prop, "object-property", ptok)
            ce = self._parse_ce()
            self.expect("rp", "')'")
            return ObjectPropertyRange(prop, ce)
        if head == "DataPropertyDomain":
            self.expect("lp", "'('")
            prop, ptok = self._take_ref("a data property")
            self._use(prop, "data-property", ptok)
            ce = self._parse_ce()
            self.expect("rp", "')'")
            return DataPropertyDomain(prop, ce)
        if head == "DataPropertyRange":
            self.expect("lp", "'('")
            prop, ptok = self._take_ref("a data property")
            self._use(prop, "data-property", ptok)
            dt, _ = self._take_ref("a datatype")
            self.expect("rp", "')'")
            return DataPropertyRange(prop, dt)
        if head == "AnnotationAssertion":
            return self._parse_annotation(tok)
        if head == "Ontology":
            raise _error(tok.line, tok.col, "duplicate ontology declaration")
        if head in _UNSUPPORTED_CONSTRUCTS:
            raise _error(tok.line, tok.col, f"unsupported construct '{head}'")
        raise _error(tok.line, tok.col, f"expected an axiom or declaration, found {head!r}")

    def _parse_declaration(self) -> None:
        self.expect("lp", "'('")
        kind_tok = self.expect("name", "an entity kind")
        kinds = {"Class": "class", "ObjectProperty": "object-property", "DataProperty": "data-property"}
        if kind_tok.text not in kinds:
            if kind_tok.text in _UNSUPPORTED_CONSTRUCTS:
                raise _error(kind_tok.line, kind_tok.col, f"unsupported construct '{kind_tok.text}'")
            raise _error(kind_tok.line, kind_tok.col, f"expected Class/ObjectProperty/DataProperty, found {kind_tok.text!r}")
        kind = kinds[kind_tok.text]
        self.expect("lp", "'('")
        iri, tok = self._take_ref("an entity IRI")
        self.expect("rp", "')'")
        self.expect("rp", "')'")
        prior = self.declared.get(iri)
        if prior is not None and prior[0] != kind:
            raise _error(tok.line, tok.col, f"{iri.full} is already declared as a {prior[0]}")
        self.declared.setdefault(iri, (kind, tok))

    def _parse_disjoint(self, head: _Token) -> DisjointClasses:
        self.expect("lp", "'('")
        members: list[Iri] = []
        while True:
            tok = self.peek()
            if tok.kind == "rp":
                self.take()
                break
            if tok.kind == "name":
                raise _error(tok.line, tok.col, "DisjointClasses members must be named classes")
            iri, tok = self._take_ref("a class")
            if iri in members:
                raise _error(tok.line, tok.col, f"duplicate DisjointClasses member {iri.full}")
            members.append(self._use(iri, "class", tok))
        if len(members) < 2:
            raise _error(head.line, head.col, "DisjointClasses requires at least two classes")
        return DisjointClasses(tuple(members))

    def _parse_annotation(self, head: _Token) -> Label:
        self.expect("lp", "'('")
        prop_tok = self.take()
        if prop_tok.kind not in ("pname", "iriref"):
            raise _error(prop_tok.line, prop_tok.col, "expected an annotation property")
        prop = self._resolve_ref(prop_tok)
        if prop != RDFS_LABEL:
            raise _error(prop_tok.line, prop_tok.col, f"unsupported construct 'AnnotationAssertion with {prop.full}'")
        subject, stok = self._take_ref("an annotated entity")
        self._use(subject, "any", stok)
        text_tok = self.expect("string", "a string literal")
        self.expect("rp", "')'")
        return Label(subject, _unescape_string(text_tok))

    # --- class expressions

    def _parse_ce(self) -> ClassExpression:
        tok = self.take()
        if tok.kind in ("pname", "iriref"):
            iri = self._resolve_ref(tok)
            return Named(self._use(iri, "class", tok))
        if tok.kind != "name":
            raise _error(tok.line, tok.col, f"expected a class expression, found {tok.text or 'end of input'!r}")
        head = tok.text
        if head == "ObjectSomeValuesFrom" or head == "ObjectAllValuesFrom":
            self.expect("lp", "'('")
            prop, ptok = self._take_ref("an object property")
            self._use(prop, "object-property", ptok)
            filler = self._parse_ce()
            self.expect("rp", "')'")
            return (ObjectSome if head == "ObjectSomeValuesFrom" else ObjectAll)(prop, filler)
        if head == "DataSomeValuesFrom":
            self.expect("lp", "'('")
            prop, ptok = self._take_ref("a data property")
            self._use(prop, "data-property", ptok)
            dt, _ = self._take_ref("a datatype")
            self.expect("rp", "')'")
            return DataSome(prop, dt)
        if head in ("ObjectUnionOf", "ObjectIntersectionOf"):
            self.expect("lp", "'('")
            operands: list[ClassExpression] = []
            while self.peek().kind != "rp":
                if self.peek().kind == "eof":
                    raise _error(self.peek().line, self.peek().col, "unexpected end of input")
                operands.append(self._parse_ce())
            self.take()
            if len(operands) < 2:
                raise _error(tok.line, tok.col, f"{head} requires at least two operands")
            return (UnionOf if head == "ObjectUnionOf" else IntersectionOf)(tuple(operands))
        if head == "ObjectComplementOf":
            self.expect("lp", "'('")
            operand = self._parse_ce()
            self.expect("rp", "')'")
            return ComplementOf(operand)
        if head in _UNSUPPORTED_CONSTRUCTS:
            raise _error(tok.line, tok.col, f"unsupported construct '{head}'")
        raise _error(tok.line, tok.col, f"expected a class expression, found {head!r}")

    # --- entity resolution

    def _finish(self, onto_iri: Iri, axioms: list[Axiom]) -> tuple[Ontology, list[ParseDiagnostic]]:
        kinds: dict[Iri, str] = {iri: kind for iri, (kind, _) in self.declared.items()}
        errors: list[ParseDiagnostic] = []
        first_use: dict[Iri, _Token] = {}
        concrete: dict[Iri, set[str]] = {}
        annotated: set[Iri] = set()
        for iri, kind, tok in self.usages:
            first_use.setdefault(iri, tok)
            declared_kind = kinds.get(iri)
            if declared_kind is not None:
                if kind != "any" and kind != declared_kind:
                    errors.append(
                        ParseDiagnostic(tok.line, tok.col, f"{iri.full} is declared as a {declared_kind} but used as a {kind}", "error")
                    )
            elif kind == "any":
                annotated.add(iri)
            else:
                concrete.setdefault(iri, set()).add(kind)

        inferred: dict[Iri, str] = {}
        for iri, used_kinds in concrete.items():
            if len(used_kinds) > 1:
                tok = first_use[iri]
                errors.append(
                    ParseDiagnostic(tok.line, tok.col, f"{iri.full} is used both as {' and as a '.join(sorted(used_kinds))}", "error")
                )
            else:
                inferred[iri] = next(iter(used_kinds))
        for iri in annotated:
            inferred.setdefault(iri, "class")  # annotation subjects default to classes

        if errors:
            raise ParseError(errors)

        warnings: list[ParseDiagnostic] = []
        for iri in sorted(inferred, key=lambda i: (first_use[i].line, first_use[i].col)):
            kind = inferred[iri]
            kinds[iri] = kind
            tok = first_use[iri]
            warnings.append(
                ParseDiagnostic(tok.line, tok.col, f"undeclared entity {iri.full} auto-declared as a {kind}", "warning")
            )

        ontology = Ontology(
            iri=onto_iri,
            classes=frozenset(i for i, k in kinds.items() if k == "class"),
            object_properties=frozenset(i for i, k in kinds.items() if k == "object-property"),
            data_properties=frozenset(i for i, k in kinds.items() if k == "data-property"),
            axioms=tuple(axioms),
        )
        return ontology, warnings


def parse_ontology(text: str) -> tuple[Ontology, list[ParseDiagnostic]]:
    """Parse a document; returns the ontology plus warning diagnostics.

    Raises :class:`ParseError` (carrying positioned diagnostics) on syntax
    errors, unsupported constructs, duplicate ontology declarations, and
    entity-kind conflicts. Entities that are referenced but never declared
    are auto-declared with a warning.
    """
    return _Parser(_tokenize(text)).parse_document()


# --- serialization -------------------------------------------------------

_LOCAL_OK = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*$")


class _RefWriter:
    def __init__(self, ontology: Ontology):
        base = ontology.iri.full
        self.default_ns = base if base.endswith(("#", "/")) else base + "#"
        self.by_ns = {v: k for k, v in BUILTIN_PREFIXES.items()}

    def __call__(self, iri: Iri) -> str:
        full = iri.full
        if full.startswith(self.default_ns):
            local = full[len(self.default_ns) :]
            if _LOCAL_OK.fullmatch(local):
                return f":{local}"
        for ns, prefix in self.by_ns.items():
            if full.startswith(ns):
                local = full[len(ns) :]
                if _LOCAL_OK.fullmatch(local):
                    return f"{prefix}:{local}"
        return f"<{full}>"


def _ce_text(ce: ClassExpression, ref) -> str:
    if isinstance(ce, Named):
        return ref(ce.cls)
    if isinstance(ce, ObjectSome):
        return f"ObjectSomeValuesFrom({ref(ce.prop)} {_ce_text(ce.filler, ref)})"
    if isinstance(ce, ObjectAll):
        return f"ObjectAllValuesFrom({ref(ce.prop)} {_ce_text(ce.filler, ref)})"
    if isinstance(ce, DataSome):
        return f"DataSomeValuesFrom({ref(ce.prop)} {ref(ce.datatype)})"
    if isinstance(ce, UnionOf):
        return "ObjectUnionOf(" + " ".join(_ce_text(op, ref) for op in ce.operands) + ")"
    if isinstance(ce, IntersectionOf):
        return "ObjectIntersectionOf(" + " ".join(_ce_text(op, ref) for op in ce.operands) + ")"
    if isinstance(ce, ComplementOf):
        return f"ObjectComplementOf({_ce_text(ce.operand, ref)})"
    raise TypeError(f"not a class expression: {ce!r}")  # pragma: no cover


def _axiom_text(ax: Axiom, ref) -> str:
    if isinstance(ax, SubClassOf):
        return f"SubClassOf({_ce_text(ax.sub, ref)} {_ce_text(ax.sup, ref)})"
    if isinstance(ax, EquivalentClasses):
        return f"EquivalentClasses({_ce_text(ax.a, ref)} {_ce_text(ax.b, ref)})"
    if isinstance(ax, DisjointClasses):
        return "DisjointClasses(" + " ".join(ref(m) for m in ax.members) + ")"
    if isinstance(ax, ObjectPropertyDomain):
        return f"ObjectPropertyDomain({ref(ax.prop)} {_ce_text(ax.domain, ref)})"
    if isinstance(ax, ObjectPropertyRange):
        return f"ObjectPropertyRange({ref(ax.prop)} {_ce_text(ax.range, ref)})"
    if isinstance(ax, DataPropertyDomain):
        return f"DataPropertyDomain({ref(ax.prop)} {_ce_text(ax.domain, ref)})"
    if isinstance(ax, DataPropertyRange):
        return f"DataPropertyRange({ref(ax.prop)} {ref(ax.datatype)})"
    if isinstance(ax, Label):
        return f'AnnotationAssertion(rdfs:label {ref(ax.subject)} "{_escape_string(ax.text)}")'
    raise TypeError(f"not an axiom: {ax!r}")  # pragma: no cover


def serialize_ontology(o: Ontology) -> str:
    """Canonical text for an ontology; parsing it back yields an equal value."""
    ref = _RefWriter(o)
    lines = [f"Prefix(:=<{ref.default_ns}>)", f"Ontology(<{o.iri.full}>"]
    for cls in sorted(o.classes):
        lines.append(f"  Declaration(Class({ref(cls)}))")
    for prop in sorted(o.object_properties):
        lines.append(f"  Declaration(ObjectProperty({ref(prop)}))")
    for prop in sorted(o.data_properties):
        lines.append(f"  Declaration(DataProperty({ref(prop)}))")
    for ax in o.axioms:
        lines.append(f"  {_axiom_text(ax, ref)}")
    lines.append(")")
    return "\n".join(lines) + "\n"


# --- alignment TSV -------------------------------------------------------

ALIGNMENT_HEADER = "#source\ttarget\trelation\tconfidence"


def serialize_alignment(a: Alignment) -> str:
    """Alignment as TSV, rows by descending confidence then (source, target)."""
    rows = [ALIGNMENT_HEADER]
    ordered = sorted(a.correspondences, key=lambda c: (-c.confidence, c.source.full, c.target.full))
    for c in ordered:
        rows.append(f"{c.source.full}\t{c.target.full}\t{c.relation}\t{c.confidence:.3f}")
    return "\n".join(rows) + "\n"


def parse_alignment(text: str) -> Alignment:
    """Parse an alignment TSV; correspondences keep file order.

    The file must start with the exact header; each row carries two
    absolute IRIs, the ``=`` relation, and a confidence in [0, 1]. Entity
    kinds are not recorded in the format and default to ``class``.
    """
    lines = text.splitlines()
    if not lines or lines[0] != ALIGNMENT_HEADER:
        raise AlignmentFormatError(1, f"expected header {ALIGNMENT_HEADER!r}")
    correspondences: list[Correspondence] = []
    for lineno, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise AlignmentFormatError(lineno, f"expected 4 tab-separated fields, found {len(fields)}")
        source, target, relation, conf_text = fields
        if relation != "=":
            raise AlignmentFormatError(lineno, f"unsupported relation {relation!r}")
        try:
            confidence = float(conf_text)
        except ValueError:
            raise AlignmentFormatError(lineno, f"malformed confidence {conf_text!r}") from None
        if not 0.0 <= confidence <= 1.0:
            raise AlignmentFormatError(lineno, f"confidence {conf_text} out of range [0, 1]")
        try:
            correspondences.append(Correspondence(Iri(source), Iri(target), confidence, "class", relation))
        except ValueError as exc:
            raise AlignmentFormatError(lineno, str(exc)) from None
    return Alignment(tuple(correspondences))
