"""Entity-name normalization and the synonym lexicon.

Ontology vocabularies are small, regular, and dominated by noun plurals
and -ing/-ed property names, so instead of a heavyweight NLP stack this
module uses a rule lemmatizer (suffix stripping plus an irregular-form
table) and a plain-text synset file. The contract that matters downstream
is lemma equality and synset membership, not linguistic completeness.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping

from .errors import LexiconFormatError

__all__ = [
    "TermTokens",
    "split_term",
    "lemmatize",
    "normalize_term",
    "Lexicon",
    "load_lexicon",
    "parse_lexicon",
    "default_lexicon",
    "synonyms",
    "DEFAULT_EXCEPTIONS",
]

# Ordered lowercase lemma tokens for one entity name or label.
TermTokens = tuple[str, ...]

_CHUNKS = re.compile(r"[A-Za-z]+|[0-9]+")

# Irregular forms the suffix rules cannot reach.
DEFAULT_EXCEPTIONS: dict[str, str] = {
    "wrote": "write",
    "written": "write",
    "sent": "send",
    "held": "hold",
    "taught": "teach",
    "made": "make",
    "gave": "give",
    "given": "give",
    "taken": "take",
    "took": "take",
    "found": "find",
    "chose": "choose",
    "chosen": "choose",
    "went": "go",
    "done": "do",
    "did": "do",
    "men": "man",
    "women": "woman",
    "children": "child",
    "people": "person",
    "feet": "foot",
    "criteria": "criterion",
    "indices": "index",
    "theses": "thesis",
    "analyses": "analysis",
    # plurale tantum: no singular in this sense
    "proceedings": "proceedings",
    "news": "news",
}

# Stems that lost a silent 'e' to -ing/-ed stripping.
_SILENT_E_STEMS = frozenset(
    "writ mak tak us hav giv receiv provid chang manag creat updat organiz "
    "invit schedul revis remov stor declin rat dat not valu".split()
)

_VOWELS = "aeiou"
_KEEP_DOUBLE = "lsz"


def split_term(raw: str) -> list[str]:
    """Split an entity name into lowercase words.

    Boundaries: any non-alphanumeric character, digit/letter transitions,
    and camelCase transitions. A trailing single capital sticks to the word
    before it ("PhD" stays one word) while acronym runs and capitalized
    words split off ("parseXML", "ConferenceMember").
    """
    words: list[str] = []
    for chunk in _CHUNKS.findall(raw):
        if chunk.isdigit():
            words.append(chunk)
        else:
            words.extend(piece.lower() for piece in _camel_split(chunk))
    return words


def _camel_split(chunk: str) -> list[str]:
    n = len(chunk)
    bounds = [0]
    for i in range(1, n):
        prev, cur = chunk[i - 1], chunk[i]
        if cur.isupper() and prev.islower():
            run = 1
            while i + run < n and chunk[i + run].isupper():
                run += 1
            if run >= 2 or i + run < n:  # acronym, or a capital starting a new word
                bounds.append(i)
        elif cur.islower() and prev.isupper() and i >= 2 and chunk[i - 2].isupper():
            bounds.append(i - 1)  # HTTPServer -> HTTP|Server
    bounds.append(n)
    return [chunk[a:b] for a, b in zip(bounds, bounds[1:]) if a < b]


def lemmatize(word: str, exceptions: Mapping[str, str] | None = None) -> str:
    """Reduce a lowercase word to its base form.

    The exceptions table wins over everything; words of length <= 3 are
    otherwise left alone; then the first matching suffix rule applies:
    ies->y, sses->ss, plural -s (but not -ss/-us/-is), and -ing/-ed with
    doubled-consonant undo and silent-e restoration.
    """
    table = DEFAULT_EXCEPTIONS if exceptions is None else exceptions
    if word in table:
        return table[word]
    if len(word) <= 3:
        return word
    if word.endswith("ies"):
        return word[:-3] + "y"
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("s") and not word.endswith(("ss", "us", "is")):
        return word[:-1]
    for suffix in ("ing", "ed"):
        if not word.endswith(suffix):
            continue
        stem = word[: -len(suffix)]
        if len(stem) < 2:
            continue
        if stem[-1] == stem[-2] and stem[-1] not in _VOWELS and stem[-1] not in _KEEP_DOUBLE:
            stem = stem[:-1]
        elif stem in _SILENT_E_STEMS:
            stem += "e"
        return stem
    return word


def normalize_term(raw: str, exceptions: Mapping[str, str] | None = None) -> TermTokens:
    """Split a raw name and lemmatize every token."""
    return tuple(lemmatize(w, exceptions) for w in split_term(raw))


class Lexicon:
    """Immutable collection of synonym sets with a lemma index."""

    def __init__(self, synsets: Iterable[Iterable[str]]):
        self.synsets: tuple[frozenset[str], ...] = tuple(frozenset(s) for s in synsets)
        index: dict[str, set[int]] = {}
        for i, synset in enumerate(self.synsets):
            for lemma in synset:
                index.setdefault(lemma, set()).add(i)
        self._index: dict[str, frozenset[int]] = {k: frozenset(v) for k, v in index.items()}

    def synset_ids(self, lemma: str) -> frozenset[int]:
        return self._index.get(lemma, frozenset())

    def share_synset(self, a: str, b: str) -> bool:
        return bool(self._index.get(a, frozenset()) & self._index.get(b, frozenset()))

    def __len__(self) -> int:
        return len(self.synsets)


_LEMMA_RE = re.compile(r"[a-z0-9]+$")


def parse_lexicon(text: str) -> Lexicon:
    """Parse lexicon text: '#' comment lines, one comma-separated synset per line."""
    synsets = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        lemmas = [piece.strip() for piece in stripped.split(",")]
        for lemma in lemmas:
            if not _LEMMA_RE.fullmatch(lemma):
                raise LexiconFormatError(lineno, f"invalid lemma {lemma!r} (need lowercase letters/digits)")
        synsets.append(lemmas)
    return Lexicon(synsets)


def load_lexicon(path) -> Lexicon:
    with open(path, encoding="utf-8") as handle:
        return parse_lexicon(handle.read())


def default_lexicon() -> Lexicon:
    """The conference-domain lexicon bundled with the package."""
    from importlib import resources

    text = resources.files("axiom_align").joinpath("data/lexicon.txt").read_text("utf-8")
    return parse_lexicon(text)


def synonyms(lex: Lexicon, a: TermTokens, b: TermTokens) -> bool:
    """True when two distinct terms mean the same thing per the lexicon.

    Single-token (or concatenated) forms match through a shared synset or
    plain equality; multi-token terms additionally match positionally when
    they have the same length. Identical token lists are lexical, not
    synonymous.
    """
    a, b = tuple(a), tuple(b)
    if a == b:
        return False
    joined_a, joined_b = "".join(a), "".join(b)
    if joined_a and joined_a == joined_b:
        return True
    if lex.share_synset(joined_a, joined_b):
        return True
    if len(a) == len(b) and a and b:
        return all(x == y or lex.share_synset(x, y) for x, y in zip(a, b))
    return False
