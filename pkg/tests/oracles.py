"""Slow, obviously-correct reference computations used to check the fast code."""

from fractions import Fraction
from itertools import combinations
from pathlib import Path

import numpy as np

from censorlens.segmenter import OTHER, Token


def read_freq_file(path):
    """Raw (percent, count) per token straight from a frequency TSV."""
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        count = int(parts[2]) if len(parts) > 2 and parts[2].strip() else None
        out[parts[0]] = (float(parts[1]), count)
    return out


def floored(raw, token, threshold=50, floor=0.0001):
    if token not in raw:
        return floor
    pct, count = raw[token]
    if pct <= 0 or (count is not None and count < threshold):
        return floor
    return pct


def is_word(surface):
    return any(ch.isalnum() for ch in surface)


def sentiment(surfaces, positive, negative, eps=1.0):
    p = sum(1 for s in surfaces if s in positive)
    n = sum(1 for s in surfaces if s in negative)
    return (p + eps) / (p + n + 2 * eps), (n + eps) / (p + n + 2 * eps)


def semantic_ambiguity(surfaces, classes):
    words = [s for s in surfaces if is_word(s)]
    union = set()
    for w in words:
        for c in classes.get(w, ()):
            union.add(c)
    return len(words) / len(union) if union else 0.0


def avg_char_freq(surfaces, raw_chars):
    chars = [ch for s in surfaces if is_word(s) for ch in s]
    if not chars:
        return 0.0
    return float(sum(Fraction(floored(raw_chars, ch)) for ch in chars) / len(chars))


def avg_word_freq(surfaces, raw_words):
    words = [s for s in surfaces if is_word(s)]
    if not words:
        return 0.0
    return float(sum(Fraction(floored(raw_words, w)) for w in words) / len(words))


def readability(surfaces, raw_chars, raw_words, classes):
    return (avg_char_freq(surfaces, raw_chars) + avg_word_freq(surfaces, raw_words)
            + semantic_ambiguity(surfaces, classes)) / 3


def embedding_average(surfaces, vectors: dict, dim):
    hits = [vectors[s] for s in surfaces if is_word(s) and s in vectors]
    if not hits:
        return [0.0] * dim
    return [float(sum(Fraction(v[j]) for v in hits) / len(hits)) for j in range(dim)]


def tokens_from(surfaces, tags=None):
    out, pos = [], 0
    for s in surfaces:
        out.append(Token(s, pos, pos + len(s), (tags or {}).get(s, OTHER)))
        pos += len(s)
    return out


def random_surfaces(rng: np.random.Generator, vocab, extra="哈哦，。！ ", max_len=30):
    pool = list(vocab) + list(extra)
    n = int(rng.integers(0, max_len + 1))
    return [pool[int(i)] for i in rng.integers(len(pool), size=n)]


def fleiss_kappa_pairs(batch, categories=("Yes", "No")):
    """Kappa from explicit rater-pair agreement, for a single rater count."""
    agreements = []
    for ratings in batch:
        pairs = list(combinations(ratings, 2))
        agreements.append(Fraction(sum(a == b for a, b in pairs), len(pairs)))
    p_bar = sum(agreements) / len(agreements)
    total = sum(len(r) for r in batch)
    p_e = sum((Fraction(sum(r.count(c) for r in batch), total)) ** 2 for c in categories)
    return float((p_bar - p_e) / (1 - p_e))
