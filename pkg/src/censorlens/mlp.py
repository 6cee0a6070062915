"""Multilayer perceptron trained with mini-batch SGD, momentum and early stopping.

Hidden units are logistic sigmoids, the output layer is a two-way softmax
and the loss is mean cross-entropy. Everything is plain numpy so runs are
bit-reproducible for a fixed seed.
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from .features import Standardizer

logger = logging.getLogger(__name__)

N_CLASSES = 2


class TrainingError(RuntimeError):
    pass


@dataclass(frozen=True)
class MlpConfig:
    hidden_layers: tuple[int, ...] = (20, 20, 20)
    epochs: int = 800
    learning_rate: float = 0.3
    momentum: float = 0.2
    batch_size: int = 100
    validation_threshold: int = 20
    validation_fraction: float = 0.1
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "hidden_layers", tuple(int(h) for h in self.hidden_layers))
        if any(h < 1 for h in self.hidden_layers):
            raise ValueError("hidden layer sizes must be positive")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be > 0")
        if not 0 <= self.momentum < 1:
            raise ValueError("momentum must be in [0, 1)")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if not 0 <= self.validation_fraction < 1:
            raise ValueError("validation_fraction must be in [0, 1)")

    def replace(self, **changes) -> "MlpConfig":
        return MlpConfig(**{**asdict(self), **changes})


@dataclass
class MlpModel:
    sizes: list[int]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    config: MlpConfig = field(default_factory=MlpConfig)
    standardizer: Optional[Standardizer] = None
    feature_names: Optional[list[str]] = None
    history: dict = field(default_factory=dict)

    def __post_init__(self):
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (self.sizes[i], self.sizes[i + 1]) or b.shape != (self.sizes[i + 1],):
                raise ValueError(f"layer {i} shape mismatch")

    @property
    def n_inputs(self) -> int:
        return self.sizes[0]

    def params(self) -> list[np.ndarray]:
        return [p for pair in zip(self.weights, self.biases) for p in pair]

    def to_dict(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "weights": [w.tolist() for w in self.weights],
            "biases": [b.tolist() for b in self.biases],
            "config": {**asdict(self.config), "hidden_layers": list(self.config.hidden_layers)},
            "standardizer": self.standardizer.to_dict() if self.standardizer else None,
            "feature_names": self.feature_names,
            "history": self.history,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MlpModel":
        return cls(
            sizes=list(d["sizes"]),
            weights=[np.array(w, dtype=np.float64).reshape(d["sizes"][i], d["sizes"][i + 1])
                     for i, w in enumerate(d["weights"])],
            biases=[np.array(b, dtype=np.float64) for b in d["biases"]],
            config=MlpConfig(**d["config"]),
            standardizer=Standardizer.from_dict(d["standardizer"]) if d.get("standardizer") else None,
            feature_names=d.get("feature_names"),
            history=d.get("history", {}),
        )

    def save(self, path, **extra) -> None:
        Path(path).write_text(json.dumps({**self.to_dict(), **extra}, indent=1) + "\n",
                              encoding="utf-8")

    @classmethod
    def load(cls, path) -> "MlpModel":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def _forward(weights, biases, X):
    """Activations per layer (input first) and output log-probabilities."""
    acts = [X]
    a = X
    for w, b in zip(weights[:-1], biases[:-1]):
        a = sigmoid(a @ w + b)
        acts.append(a)
    z = a @ weights[-1] + biases[-1]
    z = z - z.max(axis=1, keepdims=True)
    log_p = z - np.log(np.exp(z).sum(axis=1, keepdims=True))
    return acts, log_p


def _loss(log_p: np.ndarray, y: np.ndarray) -> float:
    return float(-log_p[np.arange(len(y)), y].mean())


def _backward(weights, acts, log_p, y):
    m = len(y)
    delta = np.exp(log_p)
    delta[np.arange(m), y] -= 1.0
    delta /= m
    grads_w = [None] * len(weights)
    grads_b = [None] * len(weights)
    for layer in range(len(weights) - 1, -1, -1):
        a_prev = acts[layer]
        grads_w[layer] = a_prev.T @ delta
        grads_b[layer] = delta.sum(axis=0)
        if layer > 0:
            delta = (delta @ weights[layer].T) * a_prev * (1.0 - a_prev)
    return grads_w, grads_b


def loss_and_gradients(model: MlpModel, X: np.ndarray, y: np.ndarray):
    """Mean cross-entropy and its gradients w.r.t. (weights, biases)."""
    acts, log_p = _forward(model.weights, model.biases, np.asarray(X, dtype=np.float64))
    y = np.asarray(y, dtype=np.int64)
    gw, gb = _backward(model.weights, acts, log_p, y)
    return _loss(log_p, y), gw, gb


def init_model(sizes: Sequence[int], rng: np.random.Generator,
               config: Optional[MlpConfig] = None) -> MlpModel:
    """Weights uniform in +/- 1/sqrt(fan_in), biases zero."""
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = 1.0 / np.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MlpModel(list(sizes), weights, biases, config or MlpConfig())


def _validation_split(y: np.ndarray, fraction: float, rng: np.random.Generator):
    """Stratified (train_idx, val_idx); val_idx is empty when the split is unusable."""
    all_idx = np.arange(len(y))
    if fraction <= 0:
        return all_idx, all_idx[:0]
    val = []
    for cls in np.unique(y):
        idx = rng.permutation(np.flatnonzero(y == cls))
        n_val = int(round(fraction * len(idx)))
        if n_val >= len(idx):
            n_val = len(idx) - 1
        val.extend(idx[:n_val].tolist())
    if not val:
        return all_idx, all_idx[:0]
    val = np.sort(np.array(val, dtype=np.int64))
    train = np.setdiff1d(all_idx, val)
    return train, val


def train(X, y, config: MlpConfig = MlpConfig(), standardizer: Optional[Standardizer] = None,
          feature_names: Optional[list[str]] = None) -> MlpModel:
    """Fit an MLP on (already standardized) rows ``X`` with 0/1 labels ``y``.

    A stratified ``validation_fraction`` of the rows is held out; training
    stops after ``validation_threshold`` epochs without a new best validation
    loss and the best-epoch parameters are returned. ``standardizer`` is only
    attached to the model so that :func:`predict` can take raw vectors.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or len(X) != len(y):
        raise ValueError("X must be 2-D with one row per label")
    classes = np.unique(y)
    if len(classes) < 2:
        raise TrainingError("training data has a single class")
    if not set(classes.tolist()) <= {0, 1}:
        raise ValueError("labels must be 0/1")
    y = y.astype(np.int64)

    rng = np.random.default_rng(config.seed)
    model = init_model([X.shape[1], *config.hidden_layers, N_CLASSES], rng, config)
    model.standardizer = standardizer
    model.feature_names = list(feature_names) if feature_names is not None else None
    train_idx, val_idx = _validation_split(y, config.validation_fraction, rng)
    Xt, yt = X[train_idx], y[train_idx]
    Xv, yv = X[val_idx], y[val_idx]

    params = model.params()
    velocity = [np.zeros_like(p) for p in params]
    best_val, best_epoch, best_params = np.inf, 0, None
    stale = 0
    train_losses, val_losses = [], []
    n = len(yt)
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, config.batch_size):
            batch = order[start:start + config.batch_size]
            acts, log_p = _forward(model.weights, model.biases, Xt[batch])
            total += _loss(log_p, yt[batch]) * len(batch)
            gw, gb = _backward(model.weights, acts, log_p, yt[batch])
            grads = [g for pair in zip(gw, gb) for g in pair]
            for p, v, g in zip(params, velocity, grads):
                v *= config.momentum
                v -= config.learning_rate * g
                p += v
        train_loss = total / n
        if not np.isfinite(train_loss):
            raise TrainingError(f"loss became {train_loss} at epoch {epoch}")
        train_losses.append(train_loss)
        if len(val_idx):
            _, log_p = _forward(model.weights, model.biases, Xv)
            val_loss = _loss(log_p, yv)
            val_losses.append(val_loss)
            if val_loss < best_val:
                best_val, best_epoch = val_loss, epoch
                best_params = [p.copy() for p in params]
                stale = 0
            else:
                stale += 1
                if stale >= config.validation_threshold:
                    break

    if best_params is not None:
        for p, best in zip(params, best_params):
            p[...] = best
    else:
        best_epoch = len(train_losses)
    model.history = {
        "epochs_run": len(train_losses),
        "best_epoch": best_epoch,
        "best_validation_loss": None if best_params is None else best_val,
        "train_loss": train_losses,
        "validation_loss": val_losses,
    }
    return model


def predict_proba(model: MlpModel, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.n_inputs:
        raise ValueError(f"expected {model.n_inputs} features, got {X.shape[1]}")
    if model.standardizer is not None:
        X = model.standardizer.transform(X)
    _, log_p = _forward(model.weights, model.biases, X)
    return np.exp(log_p)


def predict(model: MlpModel, vector) -> tuple[int, np.ndarray]:
    vector = np.asarray(vector, dtype=np.float64)
    if vector.ndim != 1:
        raise ValueError("predict takes a single feature vector")
    probs = predict_proba(model, vector[None, :])[0]
    return int(np.argmax(probs)), probs


def gradient_check(model: MlpModel, batch, h: float = 1e-5,
                   grad_fn: Optional[Callable] = None) -> float:
    """Max relative error between analytic and central-difference gradients.

    ``grad_fn(model, X, y) -> (weight_grads, bias_grads)`` replaces backprop
    as the analytic side, which lets tests check the checker.
    """
    X, y = batch
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if grad_fn is None:
        _, gw, gb = loss_and_gradients(model, X, y)
    else:
        gw, gb = grad_fn(model, X, y)
    analytic = [g for pair in zip(gw, gb) for g in pair]
    worst = 0.0
    for p, g in zip(model.params(), analytic):
        flat = p.reshape(-1)
        gflat = np.asarray(g).reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            up = _loss(_forward(model.weights, model.biases, X)[1], y)
            flat[i] = orig - h
            down = _loss(_forward(model.weights, model.biases, X)[1], y)
            flat[i] = orig
            numeric = (up - down) / (2 * h)
            denom = max(abs(numeric) + abs(gflat[i]), 1e-8)
            worst = max(worst, abs(numeric - gflat[i]) / denom)
    return worst
