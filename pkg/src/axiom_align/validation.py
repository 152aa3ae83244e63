"""Validation of candidate mappings against coherence criteria.

Each correspondence is tested in a virtual merge: the union of both
subclass graphs with every class correspondence added as a bidirectional
subclass edge. Three detectors run over it - disjointness clashes
(classes whose merged ancestors contain two disjoint classes),
circularity (mixed subclass/correspondence cycles), and redundancy
(duplicate or equivalence-implied correspondences). Validation repairs
iteratively by dropping the lowest-confidence implicated correspondence
until no mapping-attributable clash remains; cycles are reported as
warnings by default because a correspondence is an equivalence by intent.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import networkx as nx

from .alignment import Alignment, Correspondence
from .errors import UnknownEntityError
from .model import (
    DisjointClasses,
    EquivalentClasses,
    Iri,
    Named,
    Ontology,
    SubClassOf,
    index_for,
)

__all__ = [
    "Rejection",
    "Clash",
    "ValidationReport",
    "VirtualMergeClosure",
    "virtual_merge_closure",
    "detect_disjointness_clashes",
    "detect_circularity",
    "detect_redundancy",
    "validate",
    "report_text",
    "rejections_tsv",
]

REASON_CLASH = "disjointness-clash"
REASON_CIRCULARITY = "circularity"
REASON_REDUNDANCY = "redundancy"


@dataclass(frozen=True)
class Rejection:
    correspondence: Correspondence
    reason: str
    detail: str = ""


@dataclass(frozen=True)
class Clash:
    """An unsatisfiable class, a witnessing disjoint pair, and the blamed mappings."""

    cls: Iri
    disjoint_pair: tuple[Iri, Iri]
    implicated: tuple[Correspondence, ...]


@dataclass(frozen=True)
class ValidationReport:
    accepted: Alignment
    rejected: tuple[Rejection, ...]
    warnings: tuple[str, ...] = ()


class VirtualMergeClosure:
    """Union subclass graph of two ontologies plus correspondence edges."""

    def __init__(self, o1: Ontology, o2: Ontology, alignment: Alignment):
        idx1, idx2 = index_for(o1), index_for(o2)
        for corr in alignment:
            if corr.source not in o1.entities():
                raise UnknownEntityError(f"{corr.source.full} is not declared in {o1.iri.full}")
            if corr.target not in o2.entities():
                raise UnknownEntityError(f"{corr.target.full} is not declared in {o2.iri.full}")

        self.nodes: set[Iri] = set(o1.classes) | set(o2.classes)
        self.parents: dict[Iri, set[Iri]] = {c: set() for c in self.nodes}
        # directed edge -> is it (purely) a correspondence edge
        self.corr_edges: dict[tuple[Iri, Iri], Correspondence] = {}
        self.subclass_edges: set[tuple[Iri, Iri]] = set()
        self.disjoint_axioms: list[tuple[Iri, ...]] = list(idx1.disjoint_axioms) + list(idx2.disjoint_axioms)

        for ontology in (o1, o2):
            for ax in ontology.axioms:
                if isinstance(ax, SubClassOf) and isinstance(ax.sub, Named) and isinstance(ax.sup, Named):
                    self._add_edge(ax.sub.cls, ax.sup.cls)
                elif isinstance(ax, EquivalentClasses) and isinstance(ax.a, Named) and isinstance(ax.b, Named):
                    self._add_edge(ax.a.cls, ax.b.cls)
                    self._add_edge(ax.b.cls, ax.a.cls)

        for corr in alignment:
            if corr.kind != "class":
                continue
            for u, v in ((corr.source, corr.target), (corr.target, corr.source)):
                self.parents[u].add(v)
                if (u, v) not in self.subclass_edges:
                    self.corr_edges.setdefault((u, v), corr)

        self._ancestors: dict[Iri, frozenset[Iri]] = {}

    def _add_edge(self, sub: Iri, sup: Iri) -> None:
        self.parents[sub].add(sup)
        self.subclass_edges.add((sub, sup))
        self.corr_edges.pop((sub, sup), None)

    def ancestors_or_self(self, c: Iri) -> frozenset[Iri]:
        cached = self._ancestors.get(c)
        if cached is not None:
            return cached
        seen: set[Iri] = {c}
        queue = deque(self.parents[c])
        while queue:
            p = queue.popleft()
            if p in seen:
                continue
            seen.add(p)
            queue.extend(self.parents[p] - seen)
        result = frozenset(seen)
        self._ancestors[c] = result
        return result

    def superclass_closure(self, c: Iri) -> frozenset[Iri]:
        if c not in self.parents:
            raise UnknownEntityError(f"{c.full} is not a class of the virtual merge")
        return frozenset(self.ancestors_or_self(c) - {c})

    def disjoint_pairs_closure(self) -> frozenset[frozenset[Iri]]:
        down: dict[Iri, set[Iri]] = {c: {c} for c in self.nodes}
        for c in self.nodes:
            for a in self.ancestors_or_self(c):
                down.setdefault(a, {a}).add(c)
        pairs: set[frozenset[Iri]] = set()
        for members in self.disjoint_axioms:
            for i, mi in enumerate(members):
                for mj in members[i + 1 :]:
                    for x in down.get(mi, ()):
                        for y in down.get(mj, ()):
                            if x != y:
                                pairs.add(frozenset((x, y)))
        return frozenset(pairs)


def virtual_merge_closure(o1: Ontology, o2: Ontology, alignment: Alignment) -> VirtualMergeClosure:
    """Build the merged closure structure for an alignment."""
    return VirtualMergeClosure(o1, o2, alignment)


def detect_disjointness_clashes(closure: VirtualMergeClosure) -> list[Clash]:
    """Classes whose merged ancestor set contains a disjoint pair.

    A correspondence is implicated when one of its edges lies on an
    ancestry path from the clashing class to either side of the pair.
    """
    clashes: list[Clash] = []
    for c in sorted(closure.nodes):
        anc = closure.ancestors_or_self(c)
        witness: tuple[Iri, Iri] | None = None
        for members in closure.disjoint_axioms:
            present = sorted(m for m in members if m in anc)
            if len(present) >= 2:
                witness = (present[0], present[1])
                break
        if witness is None:
            continue
        implicated: set[Correspondence] = set()
        for (u, v), corr in closure.corr_edges.items():
            if u not in anc:
                continue
            reachable_from_v = closure.ancestors_or_self(v)
            if witness[0] in reachable_from_v or witness[1] in reachable_from_v:
                implicated.add(corr)
        ordered = tuple(sorted(implicated, key=lambda c_: (c_.source.full, c_.target.full)))
        clashes.append(Clash(c, witness, ordered))
    return clashes


def detect_circularity(closure: VirtualMergeClosure) -> list[tuple[Iri, ...]]:
    """Mixed subclass/correspondence cycles across the two ontologies.

    Strongly connected components of size >= 2 count only when they
    contain at least one correspondence edge and at least one ordinary
    subclass edge; a pure equivalence pair is intended, not circular.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(closure.nodes)
    graph.add_edges_from(closure.subclass_edges)
    graph.add_edges_from(closure.corr_edges)
    cycles: list[tuple[Iri, ...]] = []
    for component in nx.strongly_connected_components(graph):
        if len(component) < 2:
            continue
        inside_corr = inside_sub = False
        for u in component:
            for v in closure.parents[u] & component:
                if (u, v) in closure.subclass_edges:
                    inside_sub = True
                if (u, v) in closure.corr_edges:
                    inside_corr = True
        if inside_corr and inside_sub:
            cycles.append(tuple(sorted(component)))
    cycles.sort()
    return cycles


def detect_redundancy(a: Alignment, o1: Ontology, o2: Ontology) -> list[Correspondence]:
    """Duplicate rows beyond the first, plus equivalence-implied repeats.

    When two correspondences link declared-equivalent classes to the same
    counterpart, the lower-confidence one is redundant (ties keep the
    lexicographically smaller pair).
    """
    flagged: list[Correspondence] = []
    flagged_ids: set[int] = set()
    seen: set[tuple[str, str]] = set()
    for corr in a:
        if corr.pair() in seen:
            flagged.append(corr)
            flagged_ids.add(id(corr))
        else:
            seen.add(corr.pair())

    groups1 = index_for(o1).equivalence_groups()
    groups2 = index_for(o2).equivalence_groups()
    by_group: dict[tuple[frozenset[Iri], frozenset[Iri]], list[Correspondence]] = {}
    for corr in a:
        if id(corr) in flagged_ids or corr.kind != "class":
            continue
        g1 = groups1.get(corr.source, frozenset((corr.source,)))
        g2 = groups2.get(corr.target, frozenset((corr.target,)))
        by_group.setdefault((g1, g2), []).append(corr)
    for members in by_group.values():
        if len(members) < 2:
            continue
        members.sort(key=lambda c: (-c.confidence, c.source.full, c.target.full))
        flagged.extend(members[1:])
    return flagged


def _mapped_clashes(clashes: list[Clash]) -> list[Clash]:
    return [c for c in clashes if c.implicated]


def validate(
    a: Alignment,
    o1: Ontology,
    o2: Ontology,
    strict_cycles: bool = False,
) -> ValidationReport:
    """Split an alignment into accepted and rejected correspondences.

    Redundant correspondences go first; then disjointness repair removes
    the lowest-confidence implicated correspondence (ties: lexicographic
    source/target) and repeats until the virtual merge has no clash that
    any correspondence can be blamed for. Pre-existing clashes inside a
    single source are warnings, not rejections. Cycles warn unless
    ``strict_cycles`` asks for rejection.
    """
    rejected: list[Rejection] = []
    warnings: list[str] = []

    redundant = detect_redundancy(a, o1, o2)
    redundant_ids = {id(c) for c in redundant}
    for corr in redundant:
        rejected.append(Rejection(corr, REASON_REDUNDANCY, "duplicate or equivalence-implied"))
    remaining = [c for c in a if id(c) not in redundant_ids]

    while True:
        closure = virtual_merge_closure(o1, o2, Alignment(tuple(remaining)))
        clashes = detect_disjointness_clashes(closure)
        blamable = _mapped_clashes(clashes)
        if not blamable:
            for clash in clashes:
                warnings.append(
                    f"pre-existing unsatisfiable class {clash.cls.full} "
                    f"(disjoint {clash.disjoint_pair[0].full} / {clash.disjoint_pair[1].full}); "
                    "source defect, no correspondence implicated"
                )
            break
        victims = sorted(
            {corr for clash in blamable for corr in clash.implicated},
            key=lambda c: (c.confidence, c.source.full, c.target.full),
        )
        victim = victims[0]
        first = next(cl for cl in blamable if victim in cl.implicated)
        rejected.append(
            Rejection(
                victim,
                REASON_CLASH,
                f"makes {first.cls.full} unsatisfiable "
                f"(disjoint {first.disjoint_pair[0].full} / {first.disjoint_pair[1].full})",
            )
        )
        remaining = [c for c in remaining if c is not victim]

    closure = virtual_merge_closure(o1, o2, Alignment(tuple(remaining)))
    cycles = detect_circularity(closure)
    if strict_cycles:
        while cycles:
            in_cycles: set[Correspondence] = set()
            for component in cycles:
                inside = set(component)
                for (u, v), corr in closure.corr_edges.items():
                    if u in inside and v in inside:
                        in_cycles.add(corr)
            victim = sorted(in_cycles, key=lambda c: (c.confidence, c.source.full, c.target.full))[0]
            rejected.append(Rejection(victim, REASON_CIRCULARITY, "participates in a subclass cycle"))
            remaining = [c for c in remaining if c is not victim]
            closure = virtual_merge_closure(o1, o2, Alignment(tuple(remaining)))
            cycles = detect_circularity(closure)
    else:
        for component in cycles:
            warnings.append(
                "subclass cycle treated as equivalence: " + ", ".join(i.full for i in component)
            )

    return ValidationReport(
        accepted=Alignment(tuple(remaining), validated=True),
        rejected=tuple(rejected),
        warnings=tuple(warnings),
    )


def report_text(report: ValidationReport) -> str:
    """Human-readable validation summary."""
    lines = [f"accepted: {len(report.accepted)}", f"rejected: {len(report.rejected)}"]
    for r in report.rejected:
        c = r.correspondence
        lines.append(f"  REJECT {c.source.full} = {c.target.full} ({c.confidence:.3f}) [{r.reason}] {r.detail}")
    for w in report.warnings:
        lines.append(f"  WARN {w}")
    return "\n".join(lines) + "\n"


def rejections_tsv(report: ValidationReport) -> str:
    """Machine-readable rejections: source, target, confidence, reason."""
    lines = ["source\ttarget\tconfidence\treason"]
    for r in report.rejected:
        c = r.correspondence
        lines.append(f"{c.source.full}\t{c.target.full}\t{c.confidence:.3f}\t{r.reason}")
    return "\n".join(lines) + "\n"
