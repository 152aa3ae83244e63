"""Building the merged ontology from two sources and a validated alignment.

The first ontology is imported as the merged ontology: its entities keep
their IRIs, mapped second-ontology entities collapse onto their partners,
and unmapped ones move into the merged namespace (fragment preserved,
``_2`` suffix on collision, with a provenance label recording the original
IRI). Second-ontology axioms are translated through that entity map and
appended; structural duplicates are dropped, and every disjointness axiom
of both sources is carried over. Remaining structural clashes are repaired
by rewriting or deleting disjointness axioms, each action logged with the
classes it cured, and a quality report checks coherence, completeness,
and conciseness last.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace

from .alignment import Alignment
from .errors import CardinalityError, ValidationRequiredError
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
    OntologyIndex,
    SubClassOf,
    UnionOf,
    index_for,
)

__all__ = [
    "ConflictEntry",
    "QualityReport",
    "MergeResult",
    "canonicalize",
    "merge",
    "resolve_clashes",
    "verify_merged",
    "conflict_log_text",
]

ACTION_DROPPED = "dropped-axiom"
ACTION_REWRITTEN = "rewritten-axiom"


@dataclass(frozen=True)
class ConflictEntry:
    """One clash-resolution action: the axiom before the action, its
    replacement (None when dropped), and the classes the action cured."""

    action: str
    axiom: Axiom
    replacement: Axiom | None
    cured: tuple[Iri, ...]


@dataclass(frozen=True)
class QualityReport:
    coherent: bool
    unsatisfiable: tuple[Iri, ...]
    incompleteness_findings: tuple[str, ...]
    redundancy_findings: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.coherent != (not self.unsatisfiable):
            raise ValueError("coherent must mirror an empty unsatisfiable list")


@dataclass(frozen=True)
class MergeResult:
    merged: Ontology
    entity_map: dict[Iri, Iri]
    conflict_log: tuple[ConflictEntry, ...]
    quality: QualityReport | None = None


def canonicalize(alignment: Alignment, o1: Ontology, o2: Ontology) -> dict[Iri, Iri]:
    """Total entity map: O1 entities to themselves, mapped O2 entities to
    their partners, unmapped O2 entities to fresh IRIs in the merged
    namespace (original fragment, ``_2``/``_3``... on collision)."""
    if not alignment.is_one_to_one():
        raise CardinalityError("alignment must be one-to-one before merging")
    entity_map: dict[Iri, Iri] = {e: e for e in o1.entities()}
    mapped = {c.target: c.source for c in alignment}

    base = o1.iri.full
    namespace = base if base.endswith(("#", "/")) else base + "#"
    taken = {e.full for e in o1.entities()}

    for entity in sorted(o2.entities()):
        partner = mapped.get(entity)
        if partner is not None:
            entity_map[entity] = partner
            continue
        candidate = namespace + entity.fragment
        suffix = 2
        while candidate in taken:
            candidate = f"{namespace}{entity.fragment}_{suffix}"
            suffix += 1
        taken.add(candidate)
        entity_map[entity] = Iri(candidate)
    return entity_map


def _translate_expr(expr: ClassExpression, emap: dict[Iri, Iri]) -> ClassExpression:
    if isinstance(expr, Named):
        return Named(emap.get(expr.cls, expr.cls))
    if isinstance(expr, ObjectSome):
        return ObjectSome(emap.get(expr.prop, expr.prop), _translate_expr(expr.filler, emap))
    if isinstance(expr, ObjectAll):
        return ObjectAll(emap.get(expr.prop, expr.prop), _translate_expr(expr.filler, emap))
    if isinstance(expr, DataSome):
        return DataSome(emap.get(expr.prop, expr.prop), expr.datatype)
    if isinstance(expr, UnionOf):
        return UnionOf(tuple(_translate_expr(op, emap) for op in expr.operands))
    if isinstance(expr, IntersectionOf):
        return IntersectionOf(tuple(_translate_expr(op, emap) for op in expr.operands))
    if isinstance(expr, ComplementOf):
        return ComplementOf(_translate_expr(expr.operand, emap))
    raise TypeError(f"not a class expression: {expr!r}")  # pragma: no cover


def translate_axiom(ax: Axiom, emap: dict[Iri, Iri]) -> Axiom:
    """Rewrite every entity IRI of an axiom through the entity map."""
    if isinstance(ax, SubClassOf):
        return SubClassOf(_translate_expr(ax.sub, emap), _translate_expr(ax.sup, emap))
    if isinstance(ax, EquivalentClasses):
        return EquivalentClasses(_translate_expr(ax.a, emap), _translate_expr(ax.b, emap))
    if isinstance(ax, DisjointClasses):
        return DisjointClasses(tuple(emap.get(m, m) for m in ax.members))
    if isinstance(ax, ObjectPropertyDomain):
        return ObjectPropertyDomain(emap.get(ax.prop, ax.prop), _translate_expr(ax.domain, emap))
    if isinstance(ax, ObjectPropertyRange):
        return ObjectPropertyRange(emap.get(ax.prop, ax.prop), _translate_expr(ax.range, emap))
    if isinstance(ax, DataPropertyDomain):
        return DataPropertyDomain(emap.get(ax.prop, ax.prop), _translate_expr(ax.domain, emap))
    if isinstance(ax, DataPropertyRange):
        return DataPropertyRange(emap.get(ax.prop, ax.prop), ax.datatype)
    if isinstance(ax, Label):
        return Label(emap.get(ax.subject, ax.subject), ax.text)
    raise TypeError(f"not an axiom: {ax!r}")  # pragma: no cover


def merge(o1: Ontology, o2: Ontology, alignment: Alignment) -> MergeResult:
    """Merge two ontologies under a validated alignment."""
    if not alignment.validated:
        raise ValidationRequiredError("alignment must pass validate() before merging")
    entity_map = canonicalize(alignment, o1, o2)

    axioms: list[Axiom] = list(o1.axioms)
    seen: set[Axiom] = set(axioms)
    mapped_targets = {c.target for c in alignment}
    renamed = {
        e: entity_map[e]
        for e in sorted(o2.entities())
        if e not in mapped_targets and entity_map[e] != e
    }
    for ax in o2.axioms:
        translated = translate_axiom(ax, entity_map)
        if translated not in seen:
            axioms.append(translated)
            seen.add(translated)
    for original, fresh in renamed.items():
        provenance = Label(fresh, f"renamed from {original.full}")
        if provenance not in seen:
            axioms.append(provenance)
            seen.add(provenance)

    merged = Ontology(
        iri=o1.iri,
        classes=frozenset(entity_map[e] for e in o1.classes | o2.classes),
        object_properties=frozenset(entity_map[e] for e in o1.object_properties | o2.object_properties),
        data_properties=frozenset(entity_map[e] for e in o1.data_properties | o2.data_properties),
        axioms=tuple(axioms),
    )

    merged, conflict_log = resolve_clashes(merged)
    result = MergeResult(merged=merged, entity_map=entity_map, conflict_log=conflict_log)
    quality = verify_merged(result, o1, o2, alignment)
    return MergeResult(merged=merged, entity_map=entity_map, conflict_log=conflict_log, quality=quality)


def _unsatisfiable_classes(o: Ontology) -> list[Iri]:
    idx = index_for(o)
    return sorted(c for c in o.classes if idx.is_unsatisfiable(c))


def _witnessing_axiom(idx: OntologyIndex, o: Ontology, cls: Iri) -> DisjointClasses:
    anc = idx.ancestors_or_self(cls)
    for ax in o.axioms:
        if isinstance(ax, DisjointClasses) and sum(1 for m in ax.members if m in anc) >= 2:
            return ax
    raise AssertionError(f"no witnessing disjointness axiom for {cls.full}")  # pragma: no cover


def _without_member(o: Ontology, axiom: DisjointClasses, member: Iri) -> tuple[Ontology, Axiom | None]:
    remaining = tuple(m for m in axiom.members if m != member)
    replacement = DisjointClasses(remaining) if len(remaining) >= 2 else None
    new_axioms = []
    replaced = False
    for ax in o.axioms:
        if not replaced and ax == axiom:
            replaced = True
            if replacement is not None:
                new_axioms.append(replacement)
            continue
        new_axioms.append(ax)
    return replace(o, axioms=tuple(new_axioms)), replacement


def resolve_clashes(merged: Ontology) -> tuple[Ontology, tuple[ConflictEntry, ...]]:
    """Rewrite or delete disjointness axioms until no class is structurally
    unsatisfiable.

    Each round takes the first unsatisfiable class, its first witnessing
    disjointness axiom, and removes the member whose removal cures the most
    currently-unsatisfiable classes (ties: lexicographic member). An axiom
    that would fall below two members is deleted. Every action is logged
    with the cured classes; each round removes one member occurrence, so
    the loop terminates.
    """
    log: list[ConflictEntry] = []
    current = merged
    while True:
        unsat = _unsatisfiable_classes(current)
        if not unsat:
            break
        idx = index_for(current)
        axiom = _witnessing_axiom(idx, current, unsat[0])

        best: tuple[int, str] | None = None
        best_member = None
        best_result: tuple[Ontology, Axiom | None] | None = None
        for member in sorted(axiom.members):
            candidate, replacement = _without_member(current, axiom, member)
            cured = len(unsat) - len(_unsatisfiable_classes(candidate))
            key = (-cured, member.full)
            if best is None or key < best:
                best = key
                best_member = member
                best_result = (candidate, replacement)

        candidate, replacement = best_result  # type: ignore[misc]
        cured_classes = tuple(sorted(set(unsat) - set(_unsatisfiable_classes(candidate))))
        log.append(
            ConflictEntry(
                action=ACTION_REWRITTEN if replacement is not None else ACTION_DROPPED,
                axiom=axiom,
                replacement=replacement,
                cured=cured_classes,
            )
        )
        current = candidate
    return current, tuple(log)


def verify_merged(
    result: MergeResult,
    o1: Ontology,
    o2: Ontology,
    alignment: Alignment,
) -> QualityReport:
    """Check coherence, completeness, and conciseness of a merge result.

    Completeness requires the entity map to cover both sources and every
    source disjointness axiom to survive translation into the merged
    ontology; an axiom that was rewritten or deleted during clash
    resolution is reported as an incompleteness finding pointing at the
    log entry. Conciseness flags structurally identical axiom duplicates.
    """
    merged = result.merged
    unsat = tuple(_unsatisfiable_classes(merged))

    incompleteness: list[str] = []
    source_entities = o1.entities() | o2.entities()
    missing = sorted(e.full for e in source_entities if e not in result.entity_map)
    for entity in missing:
        incompleteness.append(f"entity {entity} missing from the entity map")

    merged_axioms = set(merged.axioms)
    logged = {entry.axiom: entry for entry in result.conflict_log}
    for origin, ontology in (("first source", o1), ("second source", o2)):
        for ax in ontology.axioms:
            if not isinstance(ax, DisjointClasses):
                continue
            translated = translate_axiom(ax, result.entity_map)
            if translated in merged_axioms:
                continue
            entry = logged.get(translated)
            if entry is not None:
                incompleteness.append(
                    f"disjointness from the {origin} was {entry.action} during clash resolution: "
                    + _axiom_label(translated)
                )
            else:
                incompleteness.append(
                    f"disjointness from the {origin} is missing without a log entry: " + _axiom_label(translated)
                )

    counts = Counter(merged.axioms)
    redundancy = tuple(
        f"axiom appears {n} times: {_axiom_label(ax)}" for ax, n in sorted(counts.items(), key=lambda kv: repr(kv[0])) if n > 1
    )

    return QualityReport(
        coherent=not unsat,
        unsatisfiable=unsat,
        incompleteness_findings=tuple(incompleteness),
        redundancy_findings=redundancy,
    )


def _axiom_label(ax: Axiom) -> str:
    from .ofn import _axiom_text  # local import to avoid a cycle

    return _axiom_text(ax, lambda iri: f"<{iri.full}>")


def conflict_log_text(log: tuple[ConflictEntry, ...]) -> str:
    """Text form of the conflict log: ACTION axiom JUSTIFICATION per line."""
    lines = []
    for entry in log:
        action = "REWRITE" if entry.action == ACTION_REWRITTEN else "DROP"
        line = f"{action} {_axiom_label(entry.axiom)}"
        if entry.replacement is not None:
            line += f" -> {_axiom_label(entry.replacement)}"
        cured = ", ".join(i.full for i in entry.cured) or "none"
        line += f" cures: {cured}"
        lines.append(line)
    return "\n".join(lines) + ("\n" if lines else "")
