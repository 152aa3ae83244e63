"""Per-pair similarity measures and their aggregation into confidences.

The measures mirror the matcher stages: string similarity over normalized
names and labels, binary synonym similarity from the lexicon, axiomatic
similarity over inherited restriction expressions, property similarity
with domain/range agreement, and an inheritance bonus when the parents of
a candidate pair are already mapped.

Everything here is a pure function of immutable snapshots, a lexicon, and
a :class:`MatchContext`, so pair scores may be computed concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import KindMismatchError, UnknownEntityError
from .model import (
    ClassExpression,
    ComplementOf,
    DataSome,
    IntersectionOf,
    Iri,
    Named,
    ObjectAll,
    ObjectSome,
    Ontology,
    UnionOf,
    index_for,
)
from .text import Lexicon, TermTokens, normalize_term, synonyms

__all__ = [
    "MatcherConfig",
    "SimilarityVector",
    "MatchContext",
    "levenshtein",
    "sim_string",
    "base_concept_similarity",
    "sim_axiomatic",
    "sim_property",
    "inheritance_boost",
    "aggregate",
]


@dataclass(frozen=True)
class MatcherConfig:
    """Weights and thresholds of the matcher; all values are configurable.

    Defaults make axiomatic evidence decisive only alongside lexical
    evidence: a perfect name match alone scores w_base, and crossing the
    acceptance threshold from there takes axiom agreement or a mapped
    parent pair.
    """

    w_base: float = 0.7
    w_axm: float = 0.3
    boost: float = 0.10
    synonym_confidence: float = 0.95
    threshold: float = 0.80
    partitioning: bool = True
    workers: int = 1

    def __post_init__(self) -> None:
        if abs(self.w_base + self.w_axm - 1.0) > 1e-9:
            raise ValueError("w_base + w_axm must equal 1")
        if not 0.0 < self.threshold <= 1.0:
            raise ValueError("threshold must lie in (0, 1]")
        if not 0.0 <= self.boost <= 0.5:
            raise ValueError("boost must lie in [0, 0.5]")
        if not 0.0 <= self.synonym_confidence <= 1.0:
            raise ValueError("synonym confidence must lie in [0, 1]")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class SimilarityVector:
    """Component similarities for one candidate pair.

    ``sim_axm`` is ``None`` when axiomatic evidence does not apply: for
    properties, and for class pairs where neither side carries any
    restriction axiom.
    """

    sim_uri: float
    sim_lab: float
    sim_syn: int
    sim_axm: float | None = None
    inherit_boost: float = 0.0

    def __post_init__(self) -> None:
        for name in ("sim_uri", "sim_lab"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.sim_syn not in (0, 1):
            raise ValueError("sim_syn must be 0 or 1")
        if self.sim_axm is not None and not 0.0 <= self.sim_axm <= 1.0:
            raise ValueError("sim_axm must lie in [0, 1]")
        if self.inherit_boost < 0.0:
            raise ValueError("inherit_boost must be non-negative")


@dataclass
class MatchContext:
    """Provisional entity mappings that seed the 'mapped in context' tests."""

    class_map: dict[Iri, Iri] = field(default_factory=dict)
    prop_map: dict[Iri, Iri] = field(default_factory=dict)

    def class_mapped(self, a: Iri, b: Iri) -> bool:
        return self.class_map.get(a) == b

    def prop_mapped(self, a: Iri, b: Iri) -> bool:
        return self.prop_map.get(a) == b


_norm = lru_cache(maxsize=None)(normalize_term)


def levenshtein(a: str, b: str) -> int:
    """Edit distance (insert/delete/substitute, unit costs)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def sim_string(a: TermTokens, b: TermTokens) -> float:
    """max(normalized Levenshtein over hyphen-joined tokens, token-set Jaccard).

    Covers character-level variation (typos, affixes) and token-level
    variation (shared words in different arrangements). Two empty terms
    count as identical.
    """
    if not a and not b:
        return 1.0
    joined_a, joined_b = "-".join(a), "-".join(b)
    longest = max(len(joined_a), len(joined_b))
    lev = 1.0 - levenshtein(joined_a, joined_b) / longest if longest else 1.0
    set_a, set_b = set(a), set(b)
    union = set_a | set_b
    jaccard = len(set_a & set_b) / len(union) if union else 1.0
    return max(lev, jaccard)


def base_concept_similarity(
    e1: Iri,
    e2: Iri,
    o1: Ontology,
    o2: Ontology,
    lexicon: Lexicon,
) -> tuple[float, float, int]:
    """(sim_uri, sim_lab, sim_syn) for two entities of the same kind.

    sim_uri compares normalized IRI fragments; sim_lab takes the best label
    pair (0 when either side is unlabeled); sim_syn fires when the
    fragments or any label pair are lexicon synonyms.
    """
    kind1, kind2 = o1.kind_of(e1), o2.kind_of(e2)
    if kind1 != kind2:
        raise KindMismatchError(f"{e1.full} is a {kind1} but {e2.full} is a {kind2}")
    idx1, idx2 = index_for(o1), index_for(o2)
    frag1, frag2 = _norm(e1.fragment), _norm(e2.fragment)
    sim_uri = sim_string(frag1, frag2)
    labels1 = [_norm(t) for t in idx1.labels(e1)]
    labels2 = [_norm(t) for t in idx2.labels(e2)]
    sim_lab = max((sim_string(l1, l2) for l1 in labels1 for l2 in labels2), default=0.0)
    syn = synonyms(lexicon, frag1, frag2) or any(
        synonyms(lexicon, l1, l2) for l1 in labels1 for l2 in labels2
    )
    return sim_uri, sim_lab, int(syn)


def _iri_like(a: Iri, b: Iri, mapped) -> bool:
    return _norm(a.fragment) == _norm(b.fragment) or mapped(a, b)


def expressions_match(x: ClassExpression, y: ClassExpression, context: MatchContext) -> bool:
    """Structural match: same constructor, like properties, matching fillers."""
    if isinstance(x, Named) and isinstance(y, Named):
        return _iri_like(x.cls, y.cls, context.class_mapped)
    if isinstance(x, ObjectSome) and isinstance(y, ObjectSome):
        return _iri_like(x.prop, y.prop, context.prop_mapped) and expressions_match(x.filler, y.filler, context)
    if isinstance(x, ObjectAll) and isinstance(y, ObjectAll):
        return _iri_like(x.prop, y.prop, context.prop_mapped) and expressions_match(x.filler, y.filler, context)
    if isinstance(x, DataSome) and isinstance(y, DataSome):
        return _iri_like(x.prop, y.prop, context.prop_mapped) and _datatype_like(x.datatype, y.datatype)
    if isinstance(x, UnionOf) and isinstance(y, UnionOf):
        return _operands_match(x.operands, y.operands, context)
    if isinstance(x, IntersectionOf) and isinstance(y, IntersectionOf):
        return _operands_match(x.operands, y.operands, context)
    if isinstance(x, ComplementOf) and isinstance(y, ComplementOf):
        return expressions_match(x.operand, y.operand, context)
    return False


def _datatype_like(a: Iri, b: Iri) -> bool:
    return a == b or _norm(a.fragment) == _norm(b.fragment)


def _operands_match(xs, ys, context: MatchContext) -> bool:
    if len(xs) != len(ys):
        return False
    edges = [[expressions_match(x, y, context) for y in ys] for x in xs]
    return _max_matching(edges) == len(xs)


def _max_matching(edges: list[list[bool]]) -> int:
    """Maximum bipartite matching size (Kuhn's augmenting paths)."""
    if not edges:
        return 0
    n_right = len(edges[0])
    match_right: list[int | None] = [None] * n_right

    def try_assign(i: int, seen: list[bool]) -> bool:
        for j in range(n_right):
            if edges[i][j] and not seen[j]:
                seen[j] = True
                if match_right[j] is None or try_assign(match_right[j], seen):
                    match_right[j] = i
                    return True
        return False

    size = 0
    for i in range(len(edges)):
        if try_assign(i, [False] * n_right):
            size += 1
    return size


def sim_axiomatic(
    c1: Iri,
    c2: Iri,
    o1: Ontology,
    o2: Ontology,
    context: MatchContext | None = None,
) -> float:
    """Share of inherited restriction expressions that pair up structurally.

    The two classes' inherited expression sets are matched one-to-one
    (maximum bipartite matching) and the match size is divided by the
    larger set; two empty sets score 0.
    """
    context = context or MatchContext()
    a1 = sorted(index_for(o1).inherited(c1), key=repr)
    a2 = sorted(index_for(o2).inherited(c2), key=repr)
    if not a1 or not a2:
        return 0.0
    edges = [[expressions_match(x, y, context) for y in a2] for x in a1]
    return _max_matching(edges) / max(len(a1), len(a2))


def _ranges_score(declared1, declared2, match) -> float:
    if not declared1 or not declared2:
        return 0.5
    for d1 in declared1:
        for d2 in declared2:
            if match(d1, d2):
                return 1.0
    return 0.0


def sim_property(
    p1: Iri,
    p2: Iri,
    o1: Ontology,
    o2: Ontology,
    context: MatchContext | None = None,
    cfg: MatcherConfig | None = None,
    lexicon: Lexicon | None = None,
) -> float:
    """Property confidence: 0.6 * name evidence + 0.2 * domain + 0.2 * range.

    Domain/range agreement scores 1 when declared expressions match (or are
    mapped in context), 0.5 when either side leaves them undeclared, else 0
    - so a perfect name with agreeing signatures reaches 1.0.
    """
    context = context or MatchContext()
    cfg = cfg or MatcherConfig()
    kind1, kind2 = o1.kind_of(p1), o2.kind_of(p2)
    if kind1 != kind2:
        raise KindMismatchError(f"{p1.full} is a {kind1} but {p2.full} is a {kind2}")
    if kind1 == "class":
        raise KindMismatchError(f"{p1.full} is a class, not a property")
    idx1, idx2 = index_for(o1), index_for(o2)

    if lexicon is None:
        sim_uri = sim_string(_norm(p1.fragment), _norm(p2.fragment))
        labels1 = [_norm(t) for t in idx1.labels(p1)]
        labels2 = [_norm(t) for t in idx2.labels(p2)]
        sim_lab = max((sim_string(l1, l2) for l1 in labels1 for l2 in labels2), default=0.0)
        syn = 0
    else:
        sim_uri, sim_lab, syn = base_concept_similarity(p1, p2, o1, o2, lexicon)
    name_evidence = max(sim_uri, sim_lab, cfg.synonym_confidence * syn)

    def expr_match(d1, d2):
        return expressions_match(d1, d2, context)

    if kind1 == "object-property":
        domain = _ranges_score(idx1.object_domains(p1), idx2.object_domains(p2), expr_match)
        rng = _ranges_score(idx1.object_ranges(p1), idx2.object_ranges(p2), expr_match)
    else:
        domain = _ranges_score(idx1.data_domains(p1), idx2.data_domains(p2), expr_match)
        rng = _ranges_score(idx1.data_ranges(p1), idx2.data_ranges(p2), _datatype_like)
    # rounding keeps float dust away from threshold comparisons
    return round(0.6 * name_evidence + 0.2 * domain + 0.2 * rng, 9)


def inheritance_boost(
    c1: Iri,
    c2: Iri,
    o1: Ontology,
    o2: Ontology,
    context: MatchContext,
    cfg: MatcherConfig | None = None,
) -> float:
    """The configured bonus when some direct parents of the pair are mapped."""
    cfg = cfg or MatcherConfig()
    idx1, idx2 = index_for(o1), index_for(o2)
    supers2 = idx2.direct_superclasses(c2)
    for parent1 in idx1.direct_superclasses(c1):
        mapped = context.class_map.get(parent1)
        if mapped is not None and mapped in supers2:
            return cfg.boost
    return 0.0


def aggregate(v: SimilarityVector, cfg: MatcherConfig | None = None) -> float:
    """Collapse a similarity vector into a confidence in [0, 1].

    base is the best of uri, label, and discounted synonym evidence. With
    axiomatic evidence present the confidence is the weighted base/axiom
    sum plus the inheritance bonus; without it (sim_axm is None) the base
    stands alone so that name-identical pairs are not penalized for having
    no axioms to compare.
    """
    cfg = cfg or MatcherConfig()
    base = max(v.sim_uri, v.sim_lab, cfg.synonym_confidence * v.sim_syn)
    if v.sim_axm is None:
        return round(min(1.0, base + v.inherit_boost), 9)
    return round(min(1.0, cfg.w_base * base + cfg.w_axm * v.sim_axm + v.inherit_boost), 9)
