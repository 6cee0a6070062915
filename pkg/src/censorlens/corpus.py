"""Post data model, corpus ingestion, deduplication and balancing.

Corpus files are UTF-8 JSON Lines, one post per line::

    {"id": "p1", "text": "...", "published_at": 1535500800, "author_id": "u9",
     "follower_count": 120, "topic": "democracy", "keywords": ["民主"],
     "status": "censored"}

``status`` is optional; records without it are ``pending`` until the decoder
labels them.
"""

from __future__ import annotations

import enum
import json
import logging
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

logger = logging.getLogger(__name__)

# Posts matching any of these are not text-only (links, images, reposts).
DEFAULT_REJECT_PATTERNS: tuple[str, ...] = (
    r"https?://",
    r"\bwww\.",
    r"t\.cn/",
    r"\[(?:图片|视频|img|image|video)\]",
    r"//@",
    r"转发微博",
)


class CensorshipStatus(str, enum.Enum):
    UNCENSORED = "uncensored"
    CENSORED = "censored"
    USER_DELETED = "user_deleted"
    PENDING = "pending"


# class index used by the classifier; censored is the positive class
LABEL_INDEX = {CensorshipStatus.UNCENSORED: 0, CensorshipStatus.CENSORED: 1}
LABEL_NAMES = ("uncensored", "censored")


class CorpusError(ValueError):
    """Raised for corpus-level failures (no valid records, unbalanceable input)."""


@dataclass(frozen=True)
class Post:
    id: str
    text: str
    published_at: float
    author_id: str = ""
    follower_count: int = 0
    topic: str = ""
    keywords: tuple[str, ...] = ()
    status: CensorshipStatus = CensorshipStatus.PENDING

    def __post_init__(self):
        if self.follower_count < 0:
            raise ValueError(f"post {self.id}: follower_count must be >= 0")

    def with_status(self, status: CensorshipStatus) -> "Post":
        return replace(self, status=status)

    def to_record(self) -> dict:
        published = self.published_at
        if float(published).is_integer():
            published = int(published)
        return {
            "id": self.id,
            "text": self.text,
            "published_at": published,
            "author_id": self.author_id,
            "follower_count": self.follower_count,
            "topic": self.topic,
            "keywords": list(self.keywords),
            "status": self.status.value,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Post":
        """Build a post from a decoded JSON record; raises ValueError/KeyError/TypeError."""
        if not isinstance(rec, dict):
            raise TypeError("record is not an object")
        text = rec["text"]
        if not isinstance(text, str):
            raise TypeError("text must be a string")
        keywords = rec.get("keywords", [])
        if isinstance(keywords, str) or not isinstance(keywords, list):
            raise TypeError("keywords must be an array")
        followers = rec.get("follower_count", 0)
        if isinstance(followers, bool) or not isinstance(followers, int):
            raise TypeError("follower_count must be an integer")
        status = rec.get("status")
        return cls(
            id=str(rec["id"]),
            text=text,
            published_at=float(rec["published_at"]),
            author_id=str(rec.get("author_id", "")),
            follower_count=followers,
            topic=str(rec.get("topic", "")),
            keywords=tuple(str(k) for k in keywords),
            status=CensorshipStatus(status) if status is not None else CensorshipStatus.PENDING,
        )


@dataclass(frozen=True)
class Corpus:
    posts: tuple[Post, ...]
    provenance: str = ""
    # per-reason skip counts from ingestion; not part of identity
    skipped: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "posts", tuple(self.posts))

    def __len__(self) -> int:
        return len(self.posts)

    def __iter__(self):
        return iter(self.posts)

    def count(self, status: CensorshipStatus) -> int:
        return sum(1 for p in self.posts if p.status is status)

    def labelled(self) -> "Corpus":
        """Only censored and uncensored posts (the classification dataset)."""
        keep = [p for p in self.posts
                if p.status in (CensorshipStatus.CENSORED, CensorshipStatus.UNCENSORED)]
        return Corpus(keep, self.provenance)


def normalize_text(text: str) -> str:
    """Canonical form used for duplicate detection."""
    return unicodedata.normalize("NFC", text.strip())


def is_text_only(text: str, patterns: Sequence[str] = DEFAULT_REJECT_PATTERNS) -> bool:
    return not any(re.search(p, text, flags=re.IGNORECASE) for p in patterns)


def build_corpus(posts: Iterable[Post], provenance: str = "",
                 reject_patterns: Sequence[str] = DEFAULT_REJECT_PATTERNS) -> Corpus:
    """Apply the text-only filter and dedup to already-parsed posts."""
    skipped: Counter = Counter()
    seen_ids: set[str] = set()
    seen_texts: set[str] = set()
    kept = []
    for post in posts:
        norm = normalize_text(post.text)
        if not norm:
            skipped["empty_text"] += 1
        elif not is_text_only(post.text, reject_patterns):
            skipped["not_text_only"] += 1
        elif post.id in seen_ids:
            skipped["duplicate_id"] += 1
        elif norm in seen_texts:
            skipped["duplicate_text"] += 1
        else:
            seen_ids.add(post.id)
            seen_texts.add(norm)
            kept.append(post)
    return Corpus(kept, provenance, dict(skipped))


def ingest(path, provenance: str = "",
           reject_patterns: Sequence[str] = DEFAULT_REJECT_PATTERNS) -> Corpus:
    """Read a JSON Lines corpus file.

    Malformed records are skipped and tallied in ``Corpus.skipped``; a
    :class:`CorpusError` is raised only when nothing valid remains.
    """
    path = Path(path)
    posts = []
    malformed = 0
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                posts.append(Post.from_record(json.loads(line)))
            except (ValueError, KeyError, TypeError) as exc:
                malformed += 1
                logger.debug("%s:%d skipped: %s", path, lineno, exc)
    corpus = build_corpus(posts, provenance or path.stem, reject_patterns)
    if malformed:
        corpus.skipped["malformed"] = malformed
    if not corpus.posts:
        raise CorpusError(f"{path}: no valid records")
    if corpus.skipped:
        logger.info("%s: kept %d posts, skipped %s", path, len(corpus), corpus.skipped)
    return corpus


def write_corpus(corpus: Corpus, path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for post in corpus.posts:
            fh.write(json.dumps(post.to_record(), ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def balance(corpus: Corpus, seed: int) -> Corpus:
    """Downsample the larger label so censored and uncensored counts match.

    Only censored/uncensored posts are kept. The minority label is retained in
    full and the original order is preserved, so the result is a subset of the
    input and balancing a balanced corpus is a no-op.
    """
    cens = [i for i, p in enumerate(corpus.posts) if p.status is CensorshipStatus.CENSORED]
    unc = [i for i, p in enumerate(corpus.posts) if p.status is CensorshipStatus.UNCENSORED]
    if not cens or not unc:
        raise CorpusError(
            f"cannot balance: {len(cens)} censored, {len(unc)} uncensored posts")
    rng = np.random.default_rng(seed)
    if len(unc) > len(cens):
        unc = sorted(rng.choice(unc, size=len(cens), replace=False).tolist())
    elif len(cens) > len(unc):
        cens = sorted(rng.choice(cens, size=len(unc), replace=False).tolist())
    keep = sorted(cens + unc)
    return Corpus([corpus.posts[i] for i in keep], corpus.provenance)


def topic_summary(corpus: Corpus) -> list[tuple[str, int, int]]:
    """Rows of (topic, censored count, uncensored count) in first-seen topic order."""
    rows: dict[str, list[int]] = {}
    for post in corpus.posts:
        row = rows.setdefault(post.topic, [0, 0])
        if post.status is CensorshipStatus.CENSORED:
            row[0] += 1
        elif post.status is CensorshipStatus.UNCENSORED:
            row[1] += 1
    return [(topic, c, u) for topic, (c, u) in rows.items()]
