"""Random-subset wrapper feature selection ("best features set")."""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .cv import cv_accuracy
from .mlp import MlpConfig

logger = logging.getLogger(__name__)

# small, cheap scorer so many subsets can be tried
SELECTION_CONFIG = MlpConfig(hidden_layers=(30,), epochs=100)


@dataclass
class FeatureSet:
    names: list[str]
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.names:
            raise ValueError("a feature set cannot be empty")

    def save(self, path, **extra) -> None:
        payload = {"features": self.names, "provenance": self.provenance, **extra}
        Path(path).write_text(json.dumps(payload, indent=1, ensure_ascii=False) + "\n",
                              encoding="utf-8")

    @classmethod
    def load(cls, path) -> "FeatureSet":
        d = json.loads(Path(path).read_text(encoding="utf-8"))
        if isinstance(d, list):
            return cls(list(d))
        return cls(list(d["features"]), d.get("provenance", {}))


def select_features(matrix, labels, trials: int, subset_size: int, seed: int,
                    names: Optional[Sequence[str]] = None, sample_size: Optional[int] = None,
                    folds: int = 3, config: MlpConfig = SELECTION_CONFIG) -> FeatureSet:
    """Score random feature subsets and keep the features whose subsets did best.

    Each trial draws ``sample_size`` features (default ``subset_size``)
    without replacement and scores them by ``folds``-fold CV accuracy of a
    small MLP. A feature's score is the mean over the trials that included
    it; never-sampled features rank last and ties keep column order.
    """
    X = np.asarray(matrix, dtype=np.float64)
    y = np.asarray(labels)
    n_features = X.shape[1]
    names = list(names) if names is not None else [str(i) for i in range(n_features)]
    if len(names) != n_features:
        raise ValueError("names must match the number of columns")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 1 <= subset_size <= n_features:
        raise ValueError(f"subset_size must be in 1..{n_features}")
    if len(np.unique(y)) < 2:
        raise ValueError("feature selection needs two label classes")
    sample_size = sample_size or subset_size
    if not 1 <= sample_size <= n_features:
        raise ValueError(f"sample_size must be in 1..{n_features}")

    root = np.random.SeedSequence(seed)
    totals = np.zeros(n_features)
    hits = np.zeros(n_features, dtype=np.int64)
    trial_scores = []
    for t, child in enumerate(root.spawn(trials)):
        rng = np.random.default_rng(child)
        cols = np.sort(rng.choice(n_features, size=sample_size, replace=False))
        trial_seed = int(rng.integers(2**31))
        score = cv_accuracy(X[:, cols], y, folds, config, trial_seed)
        totals[cols] += score
        hits[cols] += 1
        trial_scores.append(score)
        logger.debug("trial %d: %d features, accuracy %.4f", t, len(cols), score)

    with np.errstate(invalid="ignore", divide="ignore"):
        mean = np.where(hits > 0, totals / np.maximum(hits, 1), -np.inf)
    ranked = sorted(range(n_features), key=lambda j: -mean[j])
    chosen = ranked[:subset_size]
    run_id = hashlib.sha256(
        json.dumps([seed, trials, subset_size, sample_size, folds, list(X.shape)]).encode()
    ).hexdigest()[:12]
    provenance = {
        "run_id": run_id,
        "seed": seed,
        "trials": trials,
        "sample_size": sample_size,
        "folds": folds,
        "best_trial_accuracy": max(trial_scores),
        "scores": {names[j]: (float(mean[j]) if hits[j] else None) for j in chosen},
    }
    return FeatureSet([names[j] for j in chosen], provenance)
