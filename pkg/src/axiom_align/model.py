"""Core ontology model.

Entities, class expressions, axioms, and the structural closures
(superclasses, disjoint pairs, inherited restrictions) that the matching,
validation, and merging stages consume.

Ontology values are immutable snapshots: every operation here is a pure
function of its inputs, so a snapshot can be shared freely between
concurrent workers. Closure computations are cached per snapshot through
:func:`index_for`.

"Unsatisfiable" is decided structurally: a class is unsatisfiable when its
ancestor set (including itself) contains two classes declared disjoint,
propagated down the subclass hierarchy. This is not a full tableau
reasoner, but it is deterministic and covers the disjointness clashes the
pipeline cares about.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Union

from .errors import UnknownEntityError

__all__ = [
    "Iri",
    "Named",
    "ObjectSome",
    "ObjectAll",
    "DataSome",
    "UnionOf",
    "IntersectionOf",
    "ComplementOf",
    "ClassExpression",
    "SubClassOf",
    "EquivalentClasses",
    "DisjointClasses",
    "ObjectPropertyDomain",
    "ObjectPropertyRange",
    "DataPropertyDomain",
    "DataPropertyRange",
    "Label",
    "Axiom",
    "Ontology",
    "OntologyIndex",
    "index_for",
    "superclass_closure",
    "disjoint_pairs_closure",
    "is_unsatisfiable_structural",
    "inherited_axioms",
]


@dataclass(frozen=True, order=True)
class Iri:
    """An absolute IRI plus its local fragment.

    The fragment is the text after the last ``#`` or ``/`` (the whole IRI
    when neither occurs); it is derived, so it does not participate in
    equality or ordering.
    """

    full: str
    fragment: str = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.full or any(ch.isspace() for ch in self.full):
            raise ValueError(f"IRI must be non-empty and contain no whitespace: {self.full!r}")
        cut = max(self.full.rfind("#"), self.full.rfind("/"))
        object.__setattr__(self, "fragment", self.full[cut + 1 :] if cut >= 0 else self.full)

    def __str__(self) -> str:
        return self.full


# --- class expressions -------------------------------------------------


@dataclass(frozen=True)
class Named:
    cls: Iri


@dataclass(frozen=True)
class ObjectSome:
    prop: Iri
    filler: "ClassExpression"


@dataclass(frozen=True)
class ObjectAll:
    prop: Iri
    filler: "ClassExpression"


@dataclass(frozen=True)
class DataSome:
    prop: Iri
    datatype: Iri


@dataclass(frozen=True)
class UnionOf:
    operands: tuple["ClassExpression", ...]

    def __post_init__(self) -> None:
        if len(self.operands) < 2:
            raise ValueError("UnionOf requires at least two operands")


@dataclass(frozen=True)
class IntersectionOf:
    operands: tuple["ClassExpression", ...]

    def __post_init__(self) -> None:
        if len(self.operands) < 2:
            raise ValueError("IntersectionOf requires at least two operands")


@dataclass(frozen=True)
class ComplementOf:
    operand: "ClassExpression"


ClassExpression = Union[Named, ObjectSome, ObjectAll, DataSome, UnionOf, IntersectionOf, ComplementOf]


# --- axioms ------------------------------------------------------------


@dataclass(frozen=True)
class SubClassOf:
    sub: ClassExpression
    sup: ClassExpression


@dataclass(frozen=True)
class EquivalentClasses:
    a: ClassExpression
    b: ClassExpression


@dataclass(frozen=True)
class DisjointClasses:
    members: tuple[Iri, ...]

    def __post_init__(self) -> None:
        if len(self.members) < 2:
            raise ValueError("DisjointClasses requires at least two members")
        if len(set(self.members)) != len(self.members):
            raise ValueError("DisjointClasses members must be pairwise distinct")


@dataclass(frozen=True)
class ObjectPropertyDomain:
    prop: Iri
    domain: ClassExpression


@dataclass(frozen=True)
class ObjectPropertyRange:
    prop: Iri
    range: ClassExpression


@dataclass(frozen=True)
class DataPropertyDomain:
    prop: Iri
    domain: ClassExpression


@dataclass(frozen=True)
class DataPropertyRange:
    prop: Iri
    datatype: Iri


@dataclass(frozen=True)
class Label:
    subject: Iri
    text: str


Axiom = Union[
    SubClassOf,
    EquivalentClasses,
    DisjointClasses,
    ObjectPropertyDomain,
    ObjectPropertyRange,
    DataPropertyDomain,
    DataPropertyRange,
    Label,
]

def _expr_refs(expr: ClassExpression) -> Iterator[tuple[Iri, str]]:
    if isinstance(expr, Named):
        yield expr.cls, "class"
    elif isinstance(expr, (ObjectSome, ObjectAll)):
        yield expr.prop, "object-property"
        yield from _expr_refs(expr.filler)
    elif isinstance(expr, DataSome):
        yield expr.prop, "data-property"
        yield expr.datatype, "datatype"
    elif isinstance(expr, (UnionOf, IntersectionOf)):
        for op in expr.operands:
            yield from _expr_refs(op)
    elif isinstance(expr, ComplementOf):
        yield from _expr_refs(expr.operand)
    else:  # pragma: no cover - exhaustive by construction
        raise TypeError(f"not a class expression: {expr!r}")


def referenced_entities(axiom: Axiom) -> Iterator[tuple[Iri, str]]:
    """Yield every (IRI, expected-kind) reference an axiom makes."""
    if isinstance(axiom, SubClassOf):
        yield from _expr_refs(axiom.sub)
        yield from _expr_refs(axiom.sup)
    elif isinstance(axiom, EquivalentClasses):
        yield from _expr_refs(axiom.a)
        yield from _expr_refs(axiom.b)
    elif isinstance(axiom, DisjointClasses):
        for m in axiom.members:
            yield m, "class"
    elif isinstance(axiom, (ObjectPropertyDomain, ObjectPropertyRange)):
        yield axiom.prop, "object-property"
        dom = axiom.domain if isinstance(axiom, ObjectPropertyDomain) else axiom.range
        yield from _expr_refs(dom)
    elif isinstance(axiom, DataPropertyDomain):
        yield axiom.prop, "data-property"
        yield from _expr_refs(axiom.domain)
    elif isinstance(axiom, DataPropertyRange):
        yield axiom.prop, "data-property"
        yield axiom.datatype, "datatype"
    elif isinstance(axiom, Label):
        yield axiom.subject, "any"
    else:  # pragma: no cover
        raise TypeError(f"not an axiom: {axiom!r}")


@dataclass(frozen=True)
class Ontology:
    """An immutable ontology snapshot.

    Entity sets are pairwise disjoint and every IRI referenced by an axiom
    must be declared (datatype positions are exempt); construction fails
    otherwise. Axiom order is preserved.
    """

    iri: Iri
    classes: frozenset[Iri]
    object_properties: frozenset[Iri]
    data_properties: frozenset[Iri]
    axioms: tuple[Axiom, ...]

    def __post_init__(self) -> None:
        if self.classes & self.object_properties or self.classes & self.data_properties or self.object_properties & self.data_properties:
            raise ValueError("entity sets must be pairwise disjoint")
        declared = self.classes | self.object_properties | self.data_properties
        kind_sets = {
            "class": self.classes,
            "object-property": self.object_properties,
            "data-property": self.data_properties,
        }
        for ax in self.axioms:
            for iri, kind in referenced_entities(ax):
                if kind == "datatype":
                    continue
                if kind == "any":
                    if iri not in declared:
                        raise ValueError(f"axiom references undeclared entity {iri.full}")
                elif iri not in kind_sets[kind]:
                    raise ValueError(f"axiom references {iri.full}, not declared as a {kind}")

    def entities(self) -> frozenset[Iri]:
        return self.classes | self.object_properties | self.data_properties

    def kind_of(self, iri: Iri) -> str:
        if iri in self.classes:
            return "class"
        if iri in self.object_properties:
            return "object-property"
        if iri in self.data_properties:
            return "data-property"
        raise UnknownEntityError(f"{iri.full} is not declared in {self.iri.full}")


class OntologyIndex:
    """Cached structural views over one ontology snapshot.

    Builds the named-subclass graph once and memoizes closures; all reads
    afterwards are lock-free and side-effect free apart from the memo
    dictionaries, which only ever gain entries for the same keys, so
    concurrent use is safe.
    """

    def __init__(self, ontology: Ontology):
        self.ontology = ontology
        self._parents: dict[Iri, set[Iri]] = {c: set() for c in ontology.classes}
        self._children: dict[Iri, set[Iri]] = {c: set() for c in ontology.classes}
        self._direct_supers: dict[Iri, set[Iri]] = {c: set() for c in ontology.classes}
        self._restrictions: dict[Iri, list[ClassExpression]] = {c: [] for c in ontology.classes}
        self._labels: dict[Iri, list[str]] = {}
        self._obj_domains: dict[Iri, list[ClassExpression]] = {}
        self._obj_ranges: dict[Iri, list[ClassExpression]] = {}
        self._data_domains: dict[Iri, list[ClassExpression]] = {}
        self._data_ranges: dict[Iri, list[Iri]] = {}
        self.disjoint_axioms: list[tuple[Iri, ...]] = []
        self._equiv_pairs: list[tuple[Iri, Iri]] = []

        for ax in ontology.axioms:
            if isinstance(ax, SubClassOf) and isinstance(ax.sub, Named):
                if isinstance(ax.sup, Named):
                    self._parents[ax.sub.cls].add(ax.sup.cls)
                    self._children[ax.sup.cls].add(ax.sub.cls)
                    self._direct_supers[ax.sub.cls].add(ax.sup.cls)
                else:
                    self._restrictions[ax.sub.cls].append(ax.sup)
            elif isinstance(ax, EquivalentClasses) and isinstance(ax.a, Named) and isinstance(ax.b, Named):
                # equivalence behaves as subclass in both directions
                self._parents[ax.a.cls].add(ax.b.cls)
                self._parents[ax.b.cls].add(ax.a.cls)
                self._children[ax.a.cls].add(ax.b.cls)
                self._children[ax.b.cls].add(ax.a.cls)
                self._equiv_pairs.append((ax.a.cls, ax.b.cls))
            elif isinstance(ax, DisjointClasses):
                self.disjoint_axioms.append(ax.members)
            elif isinstance(ax, Label):
                self._labels.setdefault(ax.subject, []).append(ax.text)
            elif isinstance(ax, ObjectPropertyDomain):
                self._obj_domains.setdefault(ax.prop, []).append(ax.domain)
            elif isinstance(ax, ObjectPropertyRange):
                self._obj_ranges.setdefault(ax.prop, []).append(ax.range)
            elif isinstance(ax, DataPropertyDomain):
                self._data_domains.setdefault(ax.prop, []).append(ax.domain)
            elif isinstance(ax, DataPropertyRange):
                self._data_ranges.setdefault(ax.prop, []).append(ax.datatype)

        self._superclasses: dict[Iri, frozenset[Iri]] = {}
        self._descendants: dict[Iri, frozenset[Iri]] = {}
        self._inherited: dict[Iri, frozenset[ClassExpression]] = {}
        self._disjoint_pairs: frozenset[frozenset[Iri]] | None = None

    def _require_class(self, c: Iri) -> None:
        if c not in self._parents:
            raise UnknownEntityError(f"{c.full} is not a declared class of {self.ontology.iri.full}")

    def superclasses(self, c: Iri) -> frozenset[Iri]:
        """Transitive, non-reflexive named superclass set of ``c``."""
        self._require_class(c)
        cached = self._superclasses.get(c)
        if cached is not None:
            return cached
        seen: set[Iri] = set()
        queue = deque(self._parents[c])
        while queue:
            p = queue.popleft()
            if p in seen:
                continue
            seen.add(p)
            queue.extend(self._parents[p] - seen)
        seen.discard(c)
        result = frozenset(seen)
        self._superclasses[c] = result
        return result

    def ancestors_or_self(self, c: Iri) -> frozenset[Iri]:
        return self.superclasses(c) | {c}

    def descendants_or_self(self, c: Iri) -> frozenset[Iri]:
        self._require_class(c)
        cached = self._descendants.get(c)
        if cached is not None:
            return cached
        seen: set[Iri] = {c}
        queue = deque(self._children[c])
        while queue:
            k = queue.popleft()
            if k in seen:
                continue
            seen.add(k)
            queue.extend(self._children[k] - seen)
        result = frozenset(seen)
        self._descendants[c] = result
        return result

    def direct_superclasses(self, c: Iri) -> frozenset[Iri]:
        self._require_class(c)
        return frozenset(self._direct_supers[c])

    def disjoint_pairs(self) -> frozenset[frozenset[Iri]]:
        """All unordered class pairs made disjoint by some axiom, propagated downwards."""
        if self._disjoint_pairs is None:
            pairs: set[frozenset[Iri]] = set()
            for members in self.disjoint_axioms:
                for i, mi in enumerate(members):
                    di = self.descendants_or_self(mi)
                    for mj in members[i + 1 :]:
                        for x in di:
                            for y in self.descendants_or_self(mj):
                                if x != y:
                                    pairs.add(frozenset((x, y)))
            self._disjoint_pairs = frozenset(pairs)
        return self._disjoint_pairs

    def is_unsatisfiable(self, c: Iri) -> bool:
        """True iff two distinct members of one disjointness axiom are ancestors of ``c``.

        Equivalent to testing whether ``ancestors_or_self(c)`` contains a
        pair from :meth:`disjoint_pairs`, but needs no pair materialization:
        if two ancestors x, y of c have disjoint ancestors d_x != d_y taken
        from one axiom, then d_x and d_y are themselves ancestors of c.
        """
        anc = self.ancestors_or_self(c)
        for members in self.disjoint_axioms:
            hits = 0
            for m in members:
                if m in anc:
                    hits += 1
                    if hits >= 2:
                        return True
        return False

    def inherited(self, c: Iri) -> frozenset[ClassExpression]:
        """Restriction-style superclass expressions of ``c`` and its ancestors."""
        cached = self._inherited.get(c)
        if cached is not None:
            return cached
        exprs: set[ClassExpression] = set()
        for cls in self.ancestors_or_self(c):
            exprs.update(self._restrictions[cls])
        result = frozenset(exprs)
        self._inherited[c] = result
        return result

    def labels(self, e: Iri) -> tuple[str, ...]:
        return tuple(self._labels.get(e, ()))

    def object_domains(self, p: Iri) -> tuple[ClassExpression, ...]:
        return tuple(self._obj_domains.get(p, ()))

    def object_ranges(self, p: Iri) -> tuple[ClassExpression, ...]:
        return tuple(self._obj_ranges.get(p, ()))

    def data_domains(self, p: Iri) -> tuple[ClassExpression, ...]:
        return tuple(self._data_domains.get(p, ()))

    def data_ranges(self, p: Iri) -> tuple[Iri, ...]:
        return tuple(self._data_ranges.get(p, ()))

    def equivalence_groups(self) -> dict[Iri, frozenset[Iri]]:
        """Map each class to its declared-equivalence group (reflexive closure)."""
        parent: dict[Iri, Iri] = {}

        def find(x: Iri) -> Iri:
            root = x
            while parent.get(root, root) != root:
                root = parent[root]
            while parent.get(x, x) != x:
                parent[x], x = root, parent[x]
            return root

        for a, b in self._equiv_pairs:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        groups: dict[Iri, set[Iri]] = {}
        for c in self.ontology.classes:
            groups.setdefault(find(c), set()).add(c)
        return {c: frozenset(groups[find(c)]) for c in self.ontology.classes}


def index_for(ontology: Ontology) -> OntologyIndex:
    """Return the cached structural index for a snapshot, building it on first use.

    The index is stored on the instance itself (content hashing of a large
    snapshot is far too slow for per-pair lookups) and shares its lifetime.
    """
    idx = ontology.__dict__.get("_index")
    if idx is None:
        idx = OntologyIndex(ontology)
        object.__setattr__(ontology, "_index", idx)
    return idx


def superclass_closure(o: Ontology, c: Iri) -> frozenset[Iri]:
    """Named superclasses of ``c`` reachable through subclass/equivalence axioms."""
    return index_for(o).superclasses(c)


def disjoint_pairs_closure(o: Ontology) -> frozenset[frozenset[Iri]]:
    """Every unordered pair of classes that some disjointness axiom separates."""
    return index_for(o).disjoint_pairs()


def is_unsatisfiable_structural(o: Ontology, c: Iri) -> bool:
    """True when ``c`` inherits from two classes declared disjoint."""
    return index_for(o).is_unsatisfiable(c)


def inherited_axioms(o: Ontology, c: Iri) -> frozenset[ClassExpression]:
    """Restriction expressions asserted on ``c`` or any of its superclasses.

    Bare named superclasses are the hierarchy itself and are excluded.
    """
    return index_for(o).inherited(c)
