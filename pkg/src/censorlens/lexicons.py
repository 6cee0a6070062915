"""Loaders for the lexical resources used by feature extraction.

A resource directory holds::

    dict.tsv          segmenter dictionary (word, freq per million, tags)
    liwc.tsv          hierarchical category lexicon
    thesaurus.tsv     word -> semantic classes 1..12
    verb_classes.tsv  verb -> verb class 1..5
    char_freq.tsv     character -> percent[, raw count]
    word_freq.tsv     word -> percent[, raw count]
    positive.txt      positive sentiment words
    negative.txt      negative sentiment words
    idioms.txt        one idiom per line
    negations.txt     negation words (optional)
    embeddings.txt    word2vec text format
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from importlib import resources as importlib_resources
from pathlib import Path
from typing import Mapping, Optional

import numpy as np

from .segmenter import IDIOM, SegmenterDict, load_dict

logger = logging.getLogger(__name__)

N_SEMANTIC_CLASSES = 12
VERB_CLASSES = {
    1: "Actions",
    2: "Psychology",
    3: "Human activities",
    4: "States and phenomena",
    5: "Relations",
}


class ResourceError(ValueError):
    pass


@dataclass(frozen=True)
class Category:
    id: str
    name: str
    parent: Optional[str] = None


class CategoryLexicon:
    """LIWC-style lexicon whose categories form a forest.

    File format: ``#cat<TAB>id<TAB>name<TAB>parent_id|-`` header lines, an
    optional ``#count<TAB>N`` declaring the category count, then
    ``word<TAB>id[,id...]`` entries.
    """

    def __init__(self, categories: Mapping[str, Category], words: Mapping[str, frozenset]):
        self.categories = dict(categories)
        missing_parents = sorted(c.id for c in self.categories.values()
                                 if c.parent is not None and c.parent not in self.categories)
        if missing_parents:
            raise ResourceError(f"categories with unknown parent: {missing_parents}")
        self._ancestors = {cid: self._walk_up(cid) for cid in self.categories}
        offenders = sorted(w for w, ids in words.items() if not set(ids) <= self.categories.keys())
        if offenders:
            raise ResourceError(f"words referencing unknown categories: {offenders}")
        self.words = {w: frozenset(ids) for w, ids in words.items()}
        self._closure = {w: frozenset().union(*(self._ancestors[c] for c in ids))
                         for w, ids in self.words.items()}

    def _walk_up(self, cid: str) -> frozenset:
        seen = []
        cur: Optional[str] = cid
        while cur is not None:
            if cur in seen:
                raise ResourceError(f"category cycle through {' -> '.join(seen + [cur])}")
            seen.append(cur)
            cur = self.categories[cur].parent
        return frozenset(seen)

    @property
    def category_ids(self) -> list[str]:
        return list(self.categories)

    def ancestors(self, cid: str) -> frozenset:
        """The category itself plus every ancestor."""
        return self._ancestors[cid]

    def closure(self, word: str) -> frozenset:
        return self._closure.get(word, frozenset())

    def depth(self) -> int:
        return max((len(a) for a in self._ancestors.values()), default=0)


def load_category_lexicon(path) -> CategoryLexicon:
    categories: dict[str, Category] = {}
    words: dict[str, frozenset] = {}
    declared = None
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if parts[0] == "#cat":
                if len(parts) != 4:
                    raise ResourceError(f"{path}:{lineno}: malformed category header")
                _, cid, name, parent = parts
                if cid in categories:
                    raise ResourceError(f"{path}:{lineno}: duplicate category id {cid}")
                categories[cid] = Category(cid, name, None if parent == "-" else parent)
            elif parts[0] == "#count":
                declared = int(parts[1])
            elif line.startswith("#"):
                continue
            else:
                if len(parts) != 2:
                    raise ResourceError(f"{path}:{lineno}: expected word<TAB>ids")
                ids = frozenset(i.strip() for i in parts[1].split(",") if i.strip())
                words[parts[0]] = words.get(parts[0], frozenset()) | ids
    if declared is not None and declared != len(categories):
        raise ResourceError(f"{path}: header declares {declared} categories, found {len(categories)}")
    return CategoryLexicon(categories, words)


@dataclass(frozen=True)
class Thesaurus:
    classes: Mapping[str, frozenset] = field(default_factory=dict)
    verb_classes: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for word, ids in self.classes.items():
            if not ids:
                raise ResourceError(f"thesaurus word {word!r} has no class")
            bad = [c for c in ids if not 1 <= c <= N_SEMANTIC_CLASSES]
            if bad:
                raise ResourceError(f"thesaurus word {word!r} has classes outside 1..12: {bad}")
        for word, vc in self.verb_classes.items():
            if vc not in VERB_CLASSES:
                raise ResourceError(f"verb {word!r} has class {vc} outside 1..5")

    def lookup(self, word: str) -> frozenset:
        return self.classes.get(word, frozenset())


def _read_tsv(path, ncols_min: int = 2):
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < ncols_min:
                raise ResourceError(f"{path}:{lineno}: expected at least {ncols_min} columns")
            yield lineno, parts


def load_thesaurus(path, verb_path=None) -> Thesaurus:
    classes = {}
    for _, parts in _read_tsv(path):
        classes[parts[0]] = frozenset(int(c) for c in parts[1].split(",") if c.strip())
    verbs = {}
    if verb_path is not None:
        verbs = {parts[0]: int(parts[1]) for _, parts in _read_tsv(verb_path)}
    return Thesaurus(classes, verbs)


@dataclass(frozen=True)
class FrequencyTable:
    """Token frequencies as percent of a reference corpus.

    Tokens that are absent, or whose raw count is below ``floor_threshold``,
    are reported as ``floor_value`` percent.
    """

    percent: Mapping[str, float] = field(default_factory=dict)
    counts: Mapping[str, int] = field(default_factory=dict)
    floor_threshold: int = 50
    floor_value: float = 0.0001

    def __post_init__(self):
        if self.floor_value <= 0:
            raise ResourceError("floor_value must be positive")
        if any(v < 0 for v in self.percent.values()):
            raise ResourceError("negative frequency in table")

    def lookup(self, token: str) -> float:
        pct = self.percent.get(token)
        if pct is None or pct <= 0:
            return self.floor_value
        count = self.counts.get(token)
        if count is not None and count < self.floor_threshold:
            return self.floor_value
        return pct


def load_frequency_table(path, floor_threshold: int = 50, floor_value: float = 0.0001) -> FrequencyTable:
    percent, counts = {}, {}
    for _, parts in _read_tsv(path):
        percent[parts[0]] = float(parts[1])
        if len(parts) > 2 and parts[2].strip():
            counts[parts[0]] = int(parts[2])
    return FrequencyTable(percent, counts, floor_threshold, floor_value)


class EmbeddingTable:
    def __init__(self, words: list[str], vectors: np.ndarray):
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] != len(words):
            raise ResourceError("embedding matrix shape does not match vocabulary")
        self.words = list(words)
        self.vectors = vectors
        self.index = {w: i for i, w in enumerate(words)}

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def get(self, word: str) -> Optional[np.ndarray]:
        i = self.index.get(word)
        return None if i is None else self.vectors[i]


def load_embeddings(path) -> EmbeddingTable:
    """word2vec text format: ``vocab_size dim`` header then ``word f1 ... fdim``."""
    with Path(path).open(encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ResourceError(f"{path}:1: expected 'vocab_size dim' header")
        size, dim = int(header[0]), int(header[1])
        words, rows = [], []
        for lineno, line in enumerate(fh, 2):
            parts = line.rstrip().split(" ")
            if not parts or parts == [""]:
                continue
            if len(parts) - 1 != dim:
                raise ResourceError(f"{path}:{lineno}: expected {dim} values, got {len(parts) - 1}")
            words.append(parts[0])
            rows.append([float(x) for x in parts[1:]])
    if len(words) != size:
        raise ResourceError(f"{path}: header declares {size} words, found {len(words)}")
    return EmbeddingTable(words, np.array(rows, dtype=np.float64).reshape(len(words), dim))


@dataclass(frozen=True)
class SentimentLexicon:
    positive: frozenset
    negative: frozenset
    smoothing: float = 1.0

    def __post_init__(self):
        if self.smoothing <= 0:
            raise ResourceError("sentiment smoothing must be positive")
        both = self.positive & self.negative
        if both:
            raise ResourceError(f"words in both sentiment lists: {sorted(both)}")


def load_word_list(path) -> frozenset:
    with Path(path).open(encoding="utf-8") as fh:
        return frozenset(line.strip() for line in fh if line.strip() and not line.startswith("#"))


RESOURCE_FILES = {
    "dict": "dict.tsv",
    "liwc": "liwc.tsv",
    "thesaurus": "thesaurus.tsv",
    "verb_classes": "verb_classes.tsv",
    "char_freq": "char_freq.tsv",
    "word_freq": "word_freq.tsv",
    "positive": "positive.txt",
    "negative": "negative.txt",
    "idioms": "idioms.txt",
    "embeddings": "embeddings.txt",
}
OPTIONAL_FILES = {"negations": "negations.txt"}


@dataclass
class Resources:
    segmenter_dict: SegmenterDict
    liwc: CategoryLexicon
    thesaurus: Thesaurus
    char_freq: FrequencyTable
    word_freq: FrequencyTable
    sentiment: SentimentLexicon
    idioms: frozenset
    embeddings: EmbeddingTable
    negations: frozenset = frozenset()
    digests: dict = field(default_factory=dict)

    @classmethod
    def load(cls, directory) -> "Resources":
        directory = Path(directory)
        if not directory.is_dir():
            raise FileNotFoundError(f"resource directory not found: {directory}")
        paths = {k: directory / name for k, name in RESOURCE_FILES.items()}
        missing = [str(p) for p in paths.values() if not p.is_file()]
        if missing:
            raise FileNotFoundError(f"missing resource files: {', '.join(missing)}")
        neg_path = directory / OPTIONAL_FILES["negations"]
        idioms = load_word_list(paths["idioms"])
        res = cls(
            # idioms are merged in so they segment as single tokens
            segmenter_dict=load_dict(paths["dict"]).with_words(idioms, IDIOM),
            liwc=load_category_lexicon(paths["liwc"]),
            thesaurus=load_thesaurus(paths["thesaurus"], paths["verb_classes"]),
            char_freq=load_frequency_table(paths["char_freq"]),
            word_freq=load_frequency_table(paths["word_freq"]),
            sentiment=SentimentLexicon(load_word_list(paths["positive"]),
                                       load_word_list(paths["negative"])),
            idioms=idioms,
            embeddings=load_embeddings(paths["embeddings"]),
            negations=load_word_list(neg_path) if neg_path.is_file() else frozenset(),
        )
        if neg_path.is_file():
            paths["negations"] = neg_path
        res.digests = {p.name: hashlib.sha256(p.read_bytes()).hexdigest()
                       for p in sorted(paths.values())}
        return res


def demo_resource_dir() -> Path:
    """Directory of the small bundled demo resources."""
    return Path(str(importlib_resources.files("censorlens") / "data" / "demo"))
