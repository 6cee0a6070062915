"""Feature families, the feature registry, and standardization.

Token-level features only look at *word* tokens; whitespace and punctuation
tokens produced by the segmenter are ignored.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .corpus import Post
from .lexicons import (CategoryLexicon, EmbeddingTable, FrequencyTable, Resources,
                       SentimentLexicon, Thesaurus)
from .segmenter import (IDIOM, NOUN, PRONOUN_1ST, VERB, MaxMatchSegmenter, Segmenter, Token,
                        sentence_split)

FAMILIES = ("liwc", "crie", "sentiment", "semantic", "freqread", "embedding", "social")

CRIE_FEATURES = (
    "word_count",
    "sentence_count",
    "mean_sentence_length",
    "verb_count",
    "first_person_pronoun_count",
    "idiom_count",
    "idioms_per_sentence",
    "content_word_categories",
    "complex_semantic_categories",
    "negation_count",
    "mean_word_length",
    "type_token_ratio",
)
SENTIMENT_FEATURES = ("positive", "negative")
FREQREAD_FEATURES = ("avg_char_freq", "avg_word_freq", "readability")
CONTENT_TAGS = frozenset({VERB, NOUN, IDIOM})


def words_of(tokens: Sequence[Token]) -> list[Token]:
    return [t for t in tokens if t.is_word]


def liwc_features(tokens: Sequence[Token], lexicon: CategoryLexicon) -> dict[str, float]:
    """Percentage of words falling in each category (ancestors included)."""
    words = words_of(tokens)
    counts = dict.fromkeys(lexicon.category_ids, 0)
    for tok in words:
        for cid in lexicon.closure(tok.surface):
            counts[cid] += 1
    n = len(words)
    return {cid: (100.0 * c / n if n else 0.0) for cid, c in counts.items()}


def crie_features(tokens: Sequence[Token], sentences: Sequence, resources) -> dict[str, float]:
    """Descriptive readability statistics.

    ``resources`` needs ``idioms``, ``thesaurus`` and ``negations``.
    """
    words = words_of(tokens)
    n_words = len(words)
    n_sent = len(sentences)
    thesaurus: Thesaurus = resources.thesaurus
    idioms = sum(1 for t in words if t.pos == IDIOM or t.surface in resources.idioms)
    content_classes = set()
    complex_words = 0
    for t in words:
        classes = thesaurus.lookup(t.surface)
        if t.pos in CONTENT_TAGS:
            content_classes |= classes
        if len(classes) >= 2:
            complex_words += 1
    return {
        "word_count": float(n_words),
        "sentence_count": float(n_sent),
        "mean_sentence_length": n_words / n_sent if n_sent else 0.0,
        "verb_count": float(sum(1 for t in words if t.pos == VERB)),
        "first_person_pronoun_count": float(sum(1 for t in words if t.pos == PRONOUN_1ST)),
        "idiom_count": float(idioms),
        "idioms_per_sentence": idioms / n_sent if n_sent else 0.0,
        "content_word_categories": float(len(content_classes)),
        "complex_semantic_categories": float(complex_words),
        "negation_count": float(sum(1 for t in words if t.surface in resources.negations)),
        "mean_word_length": sum(len(t.surface) for t in words) / n_words if n_words else 0.0,
        "type_token_ratio": len({t.surface for t in words}) / n_words if n_words else 0.0,
    }


def sentiment(tokens: Sequence[Token], lex: SentimentLexicon) -> tuple[float, float]:
    """Smoothed (positive, negative) scores summing to one."""
    p = n = 0
    for t in words_of(tokens):
        if t.surface in lex.positive:
            p += 1
        elif t.surface in lex.negative:
            n += 1
    eps = lex.smoothing
    pos = (p + eps) / (p + n + 2 * eps)
    return pos, 1.0 - pos


def semantic_ambiguity(tokens: Sequence[Token], thesaurus: Thesaurus) -> float:
    """Words per distinct semantic class; 0 when no word has a class."""
    words = words_of(tokens)
    classes = set()
    for t in words:
        classes |= thesaurus.lookup(t.surface)
    return len(words) / len(classes) if classes else 0.0


def freq_readability(tokens: Sequence[Token], char_table: FrequencyTable,
                     word_table: FrequencyTable, thesaurus: Thesaurus) -> dict[str, float]:
    words = words_of(tokens)
    if not words:
        return dict.fromkeys(FREQREAD_FEATURES, 0.0)
    chars = [ch for t in words for ch in t.surface]
    avg_char = math.fsum(char_table.lookup(ch) for ch in chars) / len(chars)
    avg_word = math.fsum(word_table.lookup(t.surface) for t in words) / len(words)
    ambiguity = semantic_ambiguity(tokens, thesaurus)
    return {
        "avg_char_freq": avg_char,
        "avg_word_freq": avg_word,
        "readability": (avg_char + avg_word + ambiguity) / 3.0,
    }


def embedding_average(tokens: Sequence[Token], table: EmbeddingTable) -> np.ndarray:
    """Mean vector of in-vocabulary words; zeros if there are none.

    Rows are summed in vocabulary order so any permutation of ``tokens``
    gives a bit-identical result.
    """
    rows = sorted(table.index[t.surface] for t in words_of(tokens) if t.surface in table)
    if not rows:
        return np.zeros(table.dim)
    return table.vectors[rows].sum(axis=0) / len(rows)


@dataclass(frozen=True)
class FeatureDescriptor:
    name: str
    family: str
    source: str = ""


class FeatureRegistry:
    def __init__(self, descriptors: Sequence[FeatureDescriptor]):
        self.descriptors = list(descriptors)
        self.names = [d.name for d in self.descriptors]
        if len(set(self.names)) != len(self.names):
            dupes = sorted({n for n in self.names if self.names.count(n) > 1})
            raise ValueError(f"duplicate feature names: {dupes}")
        bad = {d.family for d in self.descriptors} - set(FAMILIES)
        if bad:
            raise ValueError(f"unknown feature families: {sorted(bad)}")
        self.index = {n: i for i, n in enumerate(self.names)}

    def __len__(self) -> int:
        return len(self.descriptors)

    def __iter__(self):
        return iter(self.descriptors)

    def family_indices(self, *families: str) -> list[int]:
        return [i for i, d in enumerate(self.descriptors) if d.family in families]

    @classmethod
    def from_names(cls, names: Sequence[str]) -> "FeatureRegistry":
        """Rebuild a registry from ``family:name`` column headers."""
        return cls([FeatureDescriptor(n, n.split(":", 1)[0] if ":" in n else "social")
                    for n in names])


def build_registry(resources: Resources) -> FeatureRegistry:
    descs = []
    for cid, cat in resources.liwc.categories.items():
        descs.append(FeatureDescriptor(f"liwc:{cat.name}", "liwc", "liwc.tsv"))
    descs += [FeatureDescriptor(f"crie:{n}", "crie", "segmenter+thesaurus") for n in CRIE_FEATURES]
    descs += [FeatureDescriptor(f"sentiment:{n}", "sentiment", "positive.txt+negative.txt")
              for n in SENTIMENT_FEATURES]
    descs.append(FeatureDescriptor("semantic:ambiguity", "semantic", "thesaurus.tsv"))
    descs += [FeatureDescriptor(f"freqread:{n}", "freqread", "char_freq.tsv+word_freq.tsv")
              for n in FREQREAD_FEATURES]
    width = len(str(resources.embeddings.dim - 1))
    descs += [FeatureDescriptor(f"embedding:{i:0{width}d}", "embedding", "embeddings.txt")
              for i in range(resources.embeddings.dim)]
    descs.append(FeatureDescriptor("social:follower_count", "social", "post"))
    return FeatureRegistry(descs)


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    registry: FeatureRegistry

    def __post_init__(self):
        if len(self.values) != len(self.registry):
            raise ValueError("feature vector length does not match registry")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite feature value")

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.registry.names, self.values.tolist()))


class FeatureExtractor:
    """Binds resources, a segmenter and the registry for repeated extraction."""

    def __init__(self, resources: Resources, segmenter: Optional[Segmenter] = None):
        self.resources = resources
        self.segmenter = segmenter or MaxMatchSegmenter(resources.segmenter_dict)
        self.registry = build_registry(resources)

    def families(self, text: str) -> dict[str, list[float]]:
        res = self.resources
        tokens = self.segmenter.segment(text)
        sentences = sentence_split(text)
        liwc = liwc_features(tokens, res.liwc)
        return {
            "liwc": [liwc[cid] for cid in res.liwc.category_ids],
            "crie": list(crie_features(tokens, sentences, res).values()),
            "sentiment": list(sentiment(tokens, res.sentiment)),
            "semantic": [semantic_ambiguity(tokens, res.thesaurus)],
            "freqread": list(freq_readability(tokens, res.char_freq, res.word_freq,
                                              res.thesaurus).values()),
            "embedding": embedding_average(tokens, res.embeddings).tolist(),
        }

    def extract(self, post: Post) -> FeatureVector:
        fam = self.families(post.text)
        values = [v for family in FAMILIES[:-1] for v in fam[family]]
        values.append(float(post.follower_count))
        return FeatureVector(np.array(values, dtype=np.float64), self.registry)

    def matrix(self, posts: Sequence[Post]) -> np.ndarray:
        if not posts:
            return np.zeros((0, len(self.registry)))
        return np.vstack([self.extract(p).values for p in posts])


def extract_all(post: Post, resources: Resources) -> FeatureVector:
    return FeatureExtractor(resources).extract(post)


class Standardizer:
    """Per-column z-scoring with population standard deviation.

    Zero-variance columns map to 0.
    """

    def __init__(self, mean: np.ndarray, std: np.ndarray):
        self.mean = np.asarray(mean, dtype=np.float64)
        self.std = np.asarray(std, dtype=np.float64)
        if np.any(self.std < 0):
            raise ValueError("negative standard deviation")

    @classmethod
    def fit(cls, matrix) -> "Standardizer":
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] == 0 or matrix.shape[1] == 0:
            raise ValueError("cannot fit a standardizer on an empty matrix")
        mean = matrix.mean(axis=0)
        std = np.sqrt(((matrix - mean) ** 2).mean(axis=0))
        # the mean of a constant column can be off by one ulp; force exact zero
        const = np.all(matrix == matrix[0], axis=0)
        std[const] = 0.0
        return cls(mean, std)

    def transform(self, matrix) -> np.ndarray:
        matrix = np.asarray(matrix, dtype=np.float64)
        safe = np.where(self.std > 0, self.std, 1.0)
        out = (matrix - self.mean) / safe
        out[..., self.std == 0] = 0.0
        return out

    def inverse_transform(self, matrix) -> np.ndarray:
        return np.asarray(matrix, dtype=np.float64) * self.std + self.mean

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "Standardizer":
        return cls(np.array(d["mean"], dtype=np.float64), np.array(d["std"], dtype=np.float64))


def fit_standardizer(matrix) -> Standardizer:
    return Standardizer.fit(matrix)


def apply_standardizer(standardizer: Standardizer, matrix) -> np.ndarray:
    return standardizer.transform(matrix)


@dataclass
class FeatureTable:
    """Contents of a feature CSV: matrix plus label and post id columns."""

    names: list[str]
    matrix: np.ndarray
    labels: list[str]
    post_ids: list[str]

    def columns(self, names: Sequence[str]) -> np.ndarray:
        index = {n: i for i, n in enumerate(self.names)}
        missing = [n for n in names if n not in index]
        if missing:
            raise KeyError(f"features not in table: {missing}")
        return self.matrix[:, [index[n] for n in names]]


def write_feature_csv(path, names: Sequence[str], matrix: np.ndarray,
                      labels: Sequence[str], post_ids: Sequence[str]) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([*names, "label", "post_id"])
        for row, label, pid in zip(matrix, labels, post_ids):
            writer.writerow([repr(float(v)) for v in row] + [label, pid])


def read_feature_csv(path) -> FeatureTable:
    with Path(path).open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[-2:] != ["label", "post_id"]:
            raise ValueError(f"{path}: last columns must be label, post_id")
        rows = list(reader)
    names = header[:-2]
    matrix = np.array([[float(v) for v in r[:-2]] for r in rows], dtype=np.float64).reshape(len(rows), len(names))
    return FeatureTable(names, matrix, [r[-2] for r in rows], [r[-1] for r in rows])
