"""Two-pass matching pipeline over a partitioned comparison plan.

Pass 1 computes name/label/synonym similarities for every planned class
pair and for the full property cross product, and freezes a provisional
entity context from the pairs that clear the threshold on base evidence
alone. Pass 2 re-scores the class pairs with axiomatic similarity and the
inheritance bonus, both of which consult that context. Classes that end
pass 2 without any acceptable candidate get the partitioner's fallback
comparisons. A final greedy extraction yields the one-to-one alignment.

Pair scoring is independent per pair and may run on a thread pool
(``MatcherConfig.workers``); results are keyed and sorted before
extraction, so the outcome does not depend on scheduling order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence

from .alignment import Alignment, Correspondence, extract_one_to_one
from .model import Iri, Ontology, index_for
from .partition import (
    ComparisonPlan,
    build_plan,
    extract_partitions,
    fallback_lookup,
    full_plan,
    pair_partitions,
)
from .similarity import (
    MatchContext,
    MatcherConfig,
    SimilarityVector,
    aggregate,
    base_concept_similarity,
    inheritance_boost,
    sim_axiomatic,
    sim_property,
)
from .text import Lexicon, default_lexicon

__all__ = ["match_ontologies"]


def _score_pairs(pairs: Sequence, score_one: Callable, workers: int) -> dict:
    """Score pairs sequentially or on a thread pool; results keyed by pair."""
    if workers <= 1 or len(pairs) < 64:
        return {pair: score_one(pair) for pair in pairs}
    results: dict = {}
    chunk = max(64, len(pairs) // (workers * 8))
    chunks = [pairs[i : i + chunk] for i in range(0, len(pairs), chunk)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(lambda ch: [(p, score_one(p)) for p in ch], chunks):
            results.update(part)
    return results


def match_ontologies(
    o1: Ontology,
    o2: Ontology,
    cfg: MatcherConfig | None = None,
    lexicon: Lexicon | None = None,
) -> tuple[Alignment, ComparisonPlan]:
    """Match two ontologies; returns the extracted alignment and the executed plan."""
    cfg = cfg or MatcherConfig()
    lexicon = lexicon or default_lexicon()
    idx1, idx2 = index_for(o1), index_for(o2)

    if cfg.partitioning:
        parts1 = extract_partitions(o1)
        parts2 = extract_partitions(o2)
        pairings = pair_partitions(parts1, parts2, o1, o2, lexicon, cfg)
        plan = build_plan(o1, o2, pairings)
    else:
        plan = full_plan(o1, o2)

    # pass 1: base evidence for planned class pairs
    def base_of(pair):
        return base_concept_similarity(pair[0], pair[1], o1, o2, lexicon)

    base_scores = _score_pairs(plan.pairs, base_of, cfg.workers)

    provisional = [
        Correspondence(s, t, round(min(1.0, max(uri, lab, cfg.synonym_confidence * syn)), 9), "class")
        for (s, t), (uri, lab, syn) in base_scores.items()
    ]
    context = MatchContext(
        class_map={c.source: c.target for c in extract_one_to_one(provisional, cfg.threshold)}
    )

    # properties always use the full same-kind cross product
    prop_pairs = [
        (p1, p2, kind)
        for kind, side1, side2 in (
            ("object-property", sorted(o1.object_properties), sorted(o2.object_properties)),
            ("data-property", sorted(o1.data_properties), sorted(o2.data_properties)),
        )
        for p1 in side1
        for p2 in side2
    ]

    def prop_score(item):
        p1, p2, _ = item
        return sim_property(p1, p2, o1, o2, context, cfg, lexicon)

    prop_scores = _score_pairs(prop_pairs, prop_score, cfg.workers)
    prop_candidates = [
        Correspondence(p1, p2, min(1.0, conf), kind)
        for (p1, p2, kind), conf in prop_scores.items()
    ]
    context.prop_map = {
        c.source: c.target for c in extract_one_to_one(prop_candidates, cfg.threshold)
    }

    # pass 2: axiomatic evidence and inheritance bonus
    def full_confidence(s: Iri, t: Iri) -> float:
        uri, lab, syn = base_scores.get((s, t)) or base_concept_similarity(s, t, o1, o2, lexicon)
        if idx1.inherited(s) or idx2.inherited(t):
            axm = sim_axiomatic(s, t, o1, o2, context)
        else:
            axm = None
        boost = inheritance_boost(s, t, o1, o2, context, cfg)
        return aggregate(SimilarityVector(uri, lab, syn, axm, boost), cfg)

    final_scores = _score_pairs(plan.pairs, lambda pair: full_confidence(*pair), cfg.workers)

    best: dict[Iri, float] = {}
    for (s, _), conf in final_scores.items():
        if conf > best.get(s, -1.0):
            best[s] = conf

    class_candidates = [
        Correspondence(s, t, conf, "class") for (s, t), conf in final_scores.items()
    ]

    # fallback for source classes whose planned comparisons all fell short
    if cfg.partitioning:
        for c in sorted(o1.classes):
            if best.get(c, 0.0) >= cfg.threshold:
                continue
            for s, t, conf in fallback_lookup(plan, c, full_confidence, cfg.threshold):
                class_candidates.append(Correspondence(s, t, conf, "class"))

    alignment = extract_one_to_one(class_candidates + prop_candidates, cfg.threshold)
    return alignment, plan
