"""Stratified fold assignment shared by evaluation and feature selection."""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from .features import Standardizer
from .mlp import MlpConfig, predict_proba, train


def stratified_folds(labels, k: int, seed: int) -> list[np.ndarray]:
    """Disjoint, covering folds with per-fold label counts within one of even.

    Indices are shuffled within each label, concatenated label by label and
    dealt round-robin, so the leftover rows of one label land in different
    folds than those of the next and fold sizes differ by at most one.
    """
    labels = np.asarray(labels)
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = np.random.default_rng(seed)
    classes, counts = np.unique(labels, return_counts=True)
    if np.any(counts < k):
        raise ValueError(f"each label needs at least {k} instances, got {dict(zip(classes.tolist(), counts.tolist()))}")
    order = np.concatenate([rng.permutation(np.flatnonzero(labels == c)) for c in classes])
    assignment = np.empty(len(labels), dtype=np.int64)
    assignment[order] = np.arange(len(order)) % k
    return [np.flatnonzero(assignment == f) for f in range(k)]


FitPredict = Callable[[np.ndarray, np.ndarray, np.ndarray, int], np.ndarray]


def mlp_fit_predict(config: MlpConfig) -> FitPredict:
    """Fit a standardizer and MLP on the training rows, predict the test rows."""
    def fit_predict(X_train, y_train, X_test, seed):
        std = Standardizer.fit(X_train)
        model = train(std.transform(X_train), y_train, config.replace(seed=seed), standardizer=std)
        return predict_proba(model, X_test).argmax(axis=1)
    return fit_predict


def cross_val_predict(X, y, folds: list[np.ndarray], fit_predict: FitPredict,
                      seed: int) -> np.ndarray:
    """Out-of-fold predictions; fold ``f`` trains with a seed derived from ``seed``."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    preds = np.empty(len(y), dtype=np.int64)
    fold_seeds = np.random.SeedSequence(seed).generate_state(len(folds))
    all_idx = np.arange(len(y))
    for test_idx, fold_seed in zip(folds, fold_seeds):
        train_idx = np.setdiff1d(all_idx, test_idx)
        preds[test_idx] = fit_predict(X[train_idx], y[train_idx], X[test_idx], int(fold_seed))
    return preds


def cv_accuracy(X, y, k: int, config: MlpConfig, seed: int,
                fit_predict: Optional[FitPredict] = None) -> float:
    folds = stratified_folds(y, k, seed)
    preds = cross_val_predict(X, y, folds, fit_predict or mlp_fit_predict(config), seed)
    return float(np.mean(preds == np.asarray(y)))
