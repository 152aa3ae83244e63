"""Ontology alignment and merging.

The pipeline: parse two ontologies, partition their classes around
disjointness axioms to shrink the comparison space, score candidate pairs
on names, labels, synonyms, axioms, and inheritance, extract a one-to-one
alignment, validate it against coherence criteria, and emit a merged
ontology with a conflict log and quality report.
"""

from .alignment import Alignment, Correspondence, extract_one_to_one
from .errors import (
    AlignmentFormatError,
    AxiomAlignError,
    CardinalityError,
    KindMismatchError,
    LexiconFormatError,
    ParseError,
    UnknownEntityError,
    ValidationRequiredError,
)
from .evaluation import EvalScores, evaluate
from .matching import match_ontologies
from .merge import (
    ConflictEntry,
    MergeResult,
    QualityReport,
    canonicalize,
    conflict_log_text,
    merge,
    resolve_clashes,
    verify_merged,
)
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
    disjoint_pairs_closure,
    index_for,
    inherited_axioms,
    is_unsatisfiable_structural,
    superclass_closure,
)
from .ofn import (
    ParseDiagnostic,
    parse_alignment,
    parse_ontology,
    serialize_alignment,
    serialize_ontology,
)
from .partition import (
    ComparisonPlan,
    Partition,
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
    sim_string,
)
from .text import (
    Lexicon,
    default_lexicon,
    lemmatize,
    load_lexicon,
    normalize_term,
    split_term,
    synonyms,
)
from .validation import (
    Clash,
    Rejection,
    ValidationReport,
    detect_circularity,
    detect_disjointness_clashes,
    detect_redundancy,
    report_text,
    rejections_tsv,
    validate,
    virtual_merge_closure,
)

__version__ = "0.1.0"
