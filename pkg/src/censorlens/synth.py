"""Synthetic posts with a planted censorship signal.

Censored posts draw more negative-sentiment words, verbs and idioms;
uncensored posts draw more positive words and money/leisure/reward
vocabulary. Word pools come from whatever resources are loaded.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .corpus import CensorshipStatus, Corpus, Post
from .decoder import Fate
from .lexicons import Resources
from .segmenter import NOUN, OTHER, PRONOUN_1ST, VERB, pick_tag

POOLS = ("function", "noun", "verb", "pronoun", "idiom", "positive", "negative", "neutral")
NEUTRAL_CATEGORIES = ("money", "leisure", "reward")

# pool mixture per label
CENSORED_MIX = {"function": 0.22, "noun": 0.22, "verb": 0.22, "pronoun": 0.05,
                "idiom": 0.08, "positive": 0.03, "negative": 0.13, "neutral": 0.05}
UNCENSORED_MIX = {"function": 0.25, "noun": 0.25, "verb": 0.12, "pronoun": 0.05,
                  "idiom": 0.02, "positive": 0.12, "negative": 0.04, "neutral": 0.15}
TERMINATORS = "。。。！？"


class TextGenerator:
    def __init__(self, resources: Resources, censored_mix: Optional[dict] = None,
                 uncensored_mix: Optional[dict] = None):
        self.pools = self._pools(resources)
        empty = [name for name, words in self.pools.items() if not words]
        if empty:
            raise ValueError(f"resources give no words for pools: {empty}")
        self.mixes = {True: self._normalize(censored_mix or CENSORED_MIX),
                      False: self._normalize(uncensored_mix or UNCENSORED_MIX)}

    @staticmethod
    def _normalize(mix: dict) -> np.ndarray:
        w = np.array([mix.get(name, 0.0) for name in POOLS], dtype=np.float64)
        return w / w.sum()

    @staticmethod
    def _pools(res: Resources) -> dict[str, list[str]]:
        sentiment = res.sentiment.positive | res.sentiment.negative
        neutral_ids = {cid for cid, cat in res.liwc.categories.items() if cat.name in NEUTRAL_CATEGORIES}
        pools = {name: [] for name in POOLS}
        for word, (_, tags) in sorted(res.segmenter_dict.entries.items()):
            if word in res.idioms:
                continue
            if word in res.sentiment.positive:
                pools["positive"].append(word)
            elif word in res.sentiment.negative:
                pools["negative"].append(word)
            elif res.liwc.words.get(word, frozenset()) & neutral_ids:
                pools["neutral"].append(word)
            else:
                tag = pick_tag(tags)
                if tag == VERB:
                    pools["verb"].append(word)
                elif tag == NOUN:
                    pools["noun"].append(word)
                elif tag == PRONOUN_1ST:
                    pools["pronoun"].append(word)
                elif tag == OTHER and word not in sentiment:
                    pools["function"].append(word)
        pools["idiom"] = sorted(w for w in res.idioms if w not in sentiment)
        return pools

    def text(self, rng: np.random.Generator, censored: bool) -> str:
        mix = self.mixes[censored]
        sentences = []
        for _ in range(int(rng.integers(1, 5))):
            n_words = int(rng.integers(4, 11))
            picks = rng.choice(len(POOLS), size=n_words, p=mix)
            words = []
            for k in picks:
                pool = self.pools[POOLS[k]]
                words.append(pool[int(rng.integers(len(pool)))])
            sentences.append("".join(words) + TERMINATORS[int(rng.integers(len(TERMINATORS)))])
        return "".join(sentences)

    def sim_text(self, rng: np.random.Generator, fate: Fate) -> str:
        """Text callback for the platform simulator: system deletions look censored."""
        return self.text(rng, fate is Fate.SYSTEM_DELETE)


def synthetic_corpus(resources: Resources, n_censored: int, n_uncensored: int, seed: int,
                     topics=("topic",)) -> Corpus:
    """Labelled corpus with unique texts; censored posts come first."""
    gen = TextGenerator(resources)
    rng = np.random.default_rng(seed)
    posts, seen = [], set()
    for label, count in ((CensorshipStatus.CENSORED, n_censored),
                         (CensorshipStatus.UNCENSORED, n_uncensored)):
        made = 0
        while made < count:
            text = gen.text(rng, label is CensorshipStatus.CENSORED)
            if text in seen:
                continue
            seen.add(text)
            posts.append(Post(
                id=f"syn{len(posts):06d}", text=text, published_at=1_535_500_800.0 + len(posts),
                author_id=f"u{int(rng.integers(10_000)):05d}",
                follower_count=int(rng.lognormal(5.0, 1.5)),
                topic=topics[int(rng.integers(len(topics)))], status=label,
            ))
            made += 1
    return Corpus(posts, "synthetic")
