"""Exception types shared across the package."""

from __future__ import annotations


class AxiomAlignError(Exception):
    """Base class for all library errors."""


class UnknownEntityError(AxiomAlignError):
    """An operation referenced an IRI that is not declared in the ontology."""


class KindMismatchError(AxiomAlignError):
    """Two entities of different kinds (class/property) were compared."""


class ParseError(AxiomAlignError):
    """A document could not be parsed; carries positioned diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0]
        super().__init__(f"{first.line}:{first.column}: {first.message}")


class AlignmentFormatError(AxiomAlignError):
    """A TSV alignment file was malformed; carries the offending line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class LexiconFormatError(AxiomAlignError):
    """A synset lexicon file was malformed; carries the offending line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class CardinalityError(AxiomAlignError):
    """An alignment violated the one-to-one requirement of a consumer."""


class ValidationRequiredError(AxiomAlignError):
    """Merging was attempted with an alignment that never passed validation."""
