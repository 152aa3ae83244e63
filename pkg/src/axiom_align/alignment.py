"""Correspondences, alignments, and one-to-one extraction."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .model import Iri

__all__ = ["Correspondence", "Alignment", "extract_one_to_one", "KINDS"]

KINDS = ("class", "object-property", "data-property")

EQUIVALENCE = "="


@dataclass(frozen=True, order=True)
class Correspondence:
    """A scored claim that a source entity equals a target entity."""

    source: Iri
    target: Iri
    confidence: float
    kind: str = "class"
    relation: str = EQUIVALENCE

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence must lie in [0, 1], got {self.confidence}")
        if self.kind not in KINDS:
            raise ValueError(f"unknown correspondence kind {self.kind!r}")

    def pair(self) -> tuple[str, str]:
        return self.source.full, self.target.full


@dataclass(frozen=True)
class Alignment:
    """An ordered collection of correspondences.

    Extracted and validated alignments are duplicate-free and one-to-one;
    raw candidate collections (e.g. freshly parsed files) need not be.
    The ``validated`` flag is set by the validator and required by the
    merger.
    """

    correspondences: tuple[Correspondence, ...] = ()
    validated: bool = field(default=False, compare=False)

    def __iter__(self):
        return iter(self.correspondences)

    def __len__(self) -> int:
        return len(self.correspondences)

    def pairs(self) -> set[tuple[str, str]]:
        return {c.pair() for c in self.correspondences}

    def is_one_to_one(self) -> bool:
        sources = [c.source for c in self.correspondences]
        targets = [c.target for c in self.correspondences]
        return len(set(sources)) == len(sources) and len(set(targets)) == len(targets)


def extract_one_to_one(candidates: Iterable[Correspondence], threshold: float) -> Alignment:
    """Greedy one-to-one selection.

    Candidates are visited in descending confidence (ties broken by
    ascending source then target IRI); anything below the threshold or
    reusing an already-taken entity is discarded.
    """
    ordered = sorted(candidates, key=lambda c: (-c.confidence, c.source.full, c.target.full))
    chosen: list[Correspondence] = []
    used_sources: set[Iri] = set()
    used_targets: set[Iri] = set()
    for cand in ordered:
        if cand.confidence < threshold:
            break
        if cand.source in used_sources or cand.target in used_targets:
            continue
        chosen.append(cand)
        used_sources.add(cand.source)
        used_targets.add(cand.target)
    return Alignment(tuple(chosen))


def sorted_alignment(a: Alignment) -> Alignment:
    """The same alignment in canonical order (descending confidence, then IRIs)."""
    ordered = sorted(a.correspondences, key=lambda c: (-c.confidence, c.source.full, c.target.full))
    return replace(a, correspondences=tuple(ordered))
