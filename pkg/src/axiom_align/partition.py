"""Disjointness-induced partitioning of the matching search space.

Classes appearing in disjointness axioms whose ancestors appear in none
are partition roots; every class belongs to the partition of its unique
root ancestor, and classes with zero or several root ancestors fall into
the residual group. Matching then compares classes only across paired
partitions (plus residual cross terms), which shrinks the workload well
below the full cross product whenever at least two partitions pair up on
both sides.

A class that finds nothing acceptable inside its planned comparisons gets
a two-stage fallback: first the partitions paired with its siblings, then
whatever targets remain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .model import Iri, Ontology, index_for
from .similarity import MatcherConfig, base_concept_similarity
from .text import Lexicon

__all__ = [
    "Partition",
    "ComparisonPlan",
    "PAIRING_THRESHOLD",
    "extract_partitions",
    "pair_partitions",
    "build_plan",
    "full_plan",
    "fallback_lookup",
]

# Partition roots pair up on a permissive name threshold or on synonymy.
PAIRING_THRESHOLD = 0.6


@dataclass(frozen=True)
class Partition:
    """A disjointness-rooted concept group; ``root`` is None for the residual."""

    root: Iri | None
    members: frozenset[Iri]

    @property
    def is_residual(self) -> bool:
        return self.root is None


@dataclass
class ComparisonPlan:
    """The class-comparison workload implied by a set of partition pairings.

    ``planned_count`` is the sum of paired-partition cross products plus
    the residual/unpaired pool cross term; ``executed_count`` grows beyond
    it only through fallback comparisons and never exceeds the exhaustive
    product.
    """

    pairs: list[tuple[Iri, Iri]]
    paired_partitions: list[tuple[Partition, Partition]]
    source_pool: frozenset[Iri]
    target_pool: frozenset[Iri]
    source_classes: frozenset[Iri]
    target_classes: frozenset[Iri]
    planned_count: int = 0
    executed_count: int = 0

    @property
    def exhaustive_count(self) -> int:
        return len(self.source_classes) * len(self.target_classes)

    def planned_targets_for(self, c: Iri) -> frozenset[Iri]:
        for p, q in self.paired_partitions:
            if c in p.members:
                return q.members
        if c in self.source_pool:
            return self.target_pool
        return frozenset()


def extract_partitions(o: Ontology) -> list[Partition]:
    """Partition the ontology's classes around its disjointness roots.

    Returned non-residual partitions are sorted by root IRI; the residual
    partition (possibly empty) always comes last.
    """
    idx = index_for(o)
    in_disjoint: set[Iri] = set()
    for members in idx.disjoint_axioms:
        in_disjoint.update(members)
    roots = {c for c in in_disjoint if not (idx.superclasses(c) & in_disjoint)}

    assignments: dict[Iri, list[Iri]] = {}
    for c in o.classes:
        anc = idx.ancestors_or_self(c)
        assignments[c] = sorted(anc & roots)

    buckets: dict[Iri, set[Iri]] = {r: set() for r in roots}
    residual: set[Iri] = set()
    for c, root_ancestors in assignments.items():
        if len(root_ancestors) == 1:
            buckets[root_ancestors[0]].add(c)
        else:
            residual.add(c)

    partitions = [Partition(root, frozenset(members)) for root, members in sorted(buckets.items())]
    partitions.append(Partition(None, frozenset(residual)))
    return partitions


def pair_partitions(
    parts1: Sequence[Partition],
    parts2: Sequence[Partition],
    o1: Ontology,
    o2: Ontology,
    lexicon: Lexicon,
    cfg: MatcherConfig | None = None,
) -> list[tuple[Partition, Partition]]:
    """Greedy one-to-one pairing of non-residual partitions by root similarity.

    A pairing is eligible when the roots' best name evidence reaches the
    pairing threshold or they are synonyms; unpaired partitions (and both
    residuals) are left for the fallback pool.
    """
    cfg = cfg or MatcherConfig()
    scored: list[tuple[float, str, str, Partition, Partition]] = []
    for p in parts1:
        if p.is_residual:
            continue
        for q in parts2:
            if q.is_residual:
                continue
            uri, lab, syn = base_concept_similarity(p.root, q.root, o1, o2, lexicon)
            score = round(max(uri, lab, cfg.synonym_confidence * syn), 9)
            if score >= PAIRING_THRESHOLD or syn == 1:
                scored.append((score, p.root.full, q.root.full, p, q))
    scored.sort(key=lambda item: (-item[0], item[1], item[2]))

    pairings: list[tuple[Partition, Partition]] = []
    used1: set[Iri] = set()
    used2: set[Iri] = set()
    for _, _, _, p, q in scored:
        if p.root in used1 or q.root in used2:
            continue
        pairings.append((p, q))
        used1.add(p.root)
        used2.add(q.root)
    return pairings


def build_plan(
    o1: Ontology,
    o2: Ontology,
    pairings: Sequence[tuple[Partition, Partition]],
) -> ComparisonPlan:
    """Turn partition pairings into an explicit list of class comparisons."""
    paired_sources: set[Iri] = set()
    paired_targets: set[Iri] = set()
    pairs: list[tuple[Iri, Iri]] = []
    for p, q in pairings:
        paired_sources.update(p.members)
        paired_targets.update(q.members)
        for c in sorted(p.members):
            for d in sorted(q.members):
                pairs.append((c, d))
    source_pool = frozenset(o1.classes - paired_sources)
    target_pool = frozenset(o2.classes - paired_targets)
    for c in sorted(source_pool):
        for d in sorted(target_pool):
            pairs.append((c, d))
    return ComparisonPlan(
        pairs=pairs,
        paired_partitions=list(pairings),
        source_pool=source_pool,
        target_pool=target_pool,
        source_classes=frozenset(o1.classes),
        target_classes=frozenset(o2.classes),
        planned_count=len(pairs),
        executed_count=len(pairs),
    )


def full_plan(o1: Ontology, o2: Ontology) -> ComparisonPlan:
    """The exhaustive plan used when partitioning is disabled."""
    pairs = [(c, d) for c in sorted(o1.classes) for d in sorted(o2.classes)]
    return ComparisonPlan(
        pairs=pairs,
        paired_partitions=[],
        source_pool=frozenset(o1.classes),
        target_pool=frozenset(o2.classes),
        source_classes=frozenset(o1.classes),
        target_classes=frozenset(o2.classes),
        planned_count=len(pairs),
        executed_count=len(pairs),
    )


def fallback_stages(plan: ComparisonPlan, c: Iri) -> tuple[list[Iri], list[Iri]]:
    """Target candidates for a class left unmatched by its planned pairs.

    Stage 1: members of target partitions paired with the class's sibling
    partitions. Stage 2: every remaining target class. Neither repeats a
    comparison the plan already contains.
    """
    planned = plan.planned_targets_for(c)
    stage1: set[Iri] = set()
    for p, q in plan.paired_partitions:
        if c not in p.members:
            stage1.update(q.members)
    stage1 -= planned
    stage2 = plan.target_classes - planned - stage1
    return sorted(stage1), sorted(stage2)


def fallback_lookup(
    plan: ComparisonPlan,
    c: Iri,
    score: Callable[[Iri, Iri], float],
    threshold: float,
) -> list[tuple[Iri, Iri, float]]:
    """Run the sibling-then-upward fallback for one unmatched class.

    Scores stage-1 targets first and stops there when any candidate reaches
    the threshold; otherwise continues with stage 2. Every comparison made
    is added to the plan's executed count.
    """
    stage1, stage2 = fallback_stages(plan, c)
    results: list[tuple[Iri, Iri, float]] = []
    for stage in (stage1, stage2):
        hit = False
        for d in stage:
            conf = score(c, d)
            plan.executed_count += 1
            results.append((c, d, conf))
            if conf >= threshold:
                hit = True
        if hit:
            break
    return results
