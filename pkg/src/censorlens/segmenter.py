"""Dictionary-driven Chinese word segmentation with coarse POS tags."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Protocol

VERB = "verb"
NOUN = "noun"
PRONOUN_1ST = "pronoun-1st"
IDIOM = "idiom"
OTHER = "other"

# highest priority first; idioms must win so idiom features see them
TAG_PRIORITY = (IDIOM, VERB, PRONOUN_1ST, NOUN, OTHER)
KNOWN_TAGS = frozenset(TAG_PRIORITY)

SENTENCE_TERMINATORS = "。！？；!?;\n"
_SENTENCE_RE = re.compile(f"[^{re.escape(SENTENCE_TERMINATORS)}]*[{re.escape(SENTENCE_TERMINATORS)}]?")


@dataclass(frozen=True)
class Token:
    surface: str
    start: int
    end: int
    pos: str = OTHER
    dict_frequency: Optional[float] = None

    @property
    def is_word(self) -> bool:
        """False for whitespace/punctuation tokens, which no feature counts."""
        return any(ch.isalnum() for ch in self.surface)


def pick_tag(tags: Iterable[str]) -> str:
    tags = set(tags)
    for tag in TAG_PRIORITY:
        if tag in tags:
            return tag
    return OTHER


@dataclass(frozen=True)
class SegmenterDict:
    """word -> (frequency per million, coarse tags)."""

    entries: Mapping[str, tuple[float, frozenset]] = field(default_factory=dict)

    def __post_init__(self):
        for word, (freq, tags) in self.entries.items():
            if not word:
                raise ValueError("empty dictionary entry")
            if freq < 0:
                raise ValueError(f"negative frequency for {word!r}")
            unknown = set(tags) - KNOWN_TAGS
            if unknown:
                raise ValueError(f"unknown tags {sorted(unknown)} for {word!r}")
        object.__setattr__(self, "max_len", max((len(w) for w in self.entries), default=1))

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def with_words(self, words: Iterable[str], tag: str) -> "SegmenterDict":
        """Copy with extra entries carrying ``tag`` (existing entries gain it)."""
        merged = dict(self.entries)
        for w in words:
            freq, tags = merged.get(w, (0.0, frozenset()))
            merged[w] = (freq, frozenset(tags | {tag}))
        return SegmenterDict(merged)


def load_dict(path) -> SegmenterDict:
    """Read ``word<TAB>freq_per_million<TAB>tag[,tag...]`` lines."""
    entries = {}
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise ValueError(f"{path}:{lineno}: expected word<TAB>freq[<TAB>tags]")
            tags = frozenset(t.strip() for t in parts[2].split(",") if t.strip()) if len(parts) > 2 else frozenset()
            entries[parts[0]] = (float(parts[1]), tags)
    return SegmenterDict(entries)


class Segmenter(Protocol):
    def segment(self, text: str) -> list[Token]: ...


class MaxMatchSegmenter:
    """Forward maximum matching: at each position take the longest entry."""

    def __init__(self, dictionary: SegmenterDict):
        self.dictionary = dictionary

    def segment(self, text: str) -> list[Token]:
        entries = self.dictionary.entries
        max_len = self.dictionary.max_len
        tokens = []
        i, n = 0, len(text)
        while i < n:
            for size in range(min(max_len, n - i), 0, -1):
                word = text[i:i + size]
                entry = entries.get(word)
                if entry is not None:
                    tokens.append(Token(word, i, i + size, pick_tag(entry[1]), entry[0]))
                    i += size
                    break
            else:
                tokens.append(Token(text[i], i, i + 1))
                i += 1
        return tokens


def segment(text: str, dictionary: SegmenterDict) -> list[Token]:
    return MaxMatchSegmenter(dictionary).segment(text)


def sentence_split(text: str) -> list[tuple[int, int]]:
    """(start, end) spans of sentences; blank segments are dropped."""
    spans = []
    for m in _SENTENCE_RE.finditer(text):
        body = m.group().rstrip(SENTENCE_TERMINATORS)
        if body.strip():
            spans.append((m.start(), m.end()))
    return spans
