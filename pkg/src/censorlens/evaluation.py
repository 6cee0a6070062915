"""Cross-validated evaluation, class-mean feature reports, verb-class analysis
and inter-annotator agreement."""

from __future__ import annotations

import csv
import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence
from xml.sax.saxutils import escape

import numpy as np

from .corpus import LABEL_NAMES, CensorshipStatus, Corpus
from .cv import FitPredict, cross_val_predict, mlp_fit_predict, stratified_folds
from .lexicons import VERB_CLASSES, Thesaurus
from .mlp import MlpConfig
from .segmenter import VERB, Segmenter

# reference figures reported alongside our own numbers
RECORDED_BASELINES = {"human": 23.83, "svm_naive_bayes_logistic": 65.0}


@dataclass
class EvalReport:
    accuracy: float
    precision: dict
    recall: dict
    folds: int
    n: int
    confusion: list
    config: dict
    majority_baseline: float
    features: str = ""
    dataset: str = ""
    recorded_baselines: dict = field(default_factory=lambda: dict(RECORDED_BASELINES))
    aggregation: str = "pooled"

    def to_dict(self) -> dict:
        return asdict(self)

    def table(self) -> str:
        """Plain-text table with dataset, epochs, hidden layers, features, A, P, R."""
        hidden = ",".join(str(h) for h in self.config.get("hidden_layers", []))
        p = " ".join(f"{lbl[0]}: {self.precision[lbl]:.2f}" for lbl in ("censored", "uncensored"))
        r = " ".join(f"{lbl[0]}: {self.recall[lbl]:.2f}" for lbl in ("censored", "uncensored"))
        rows = [
            ("dataset", "N", "H", "features", "A", "P", "R"),
            ("majority class baseline", "", "", "", f"{self.majority_baseline:.2f}", "", ""),
            (self.dataset or "-", str(self.config.get("epochs", "")), hidden,
             self.features or "-", f"{self.accuracy:.2f}", p, r),
        ]
        widths = [max(len(row[i]) for row in rows) for i in range(7)]
        lines = [" | ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
        lines.insert(1, "-+-".join("-" * w for w in widths))
        header = f"# {self.folds}-fold CV, {self.n} posts, metrics pooled over folds (c = censored, u = uncensored)"
        return header + "\n" + "\n".join(lines) + "\n"


def majority_baseline(labels) -> float:
    labels = list(labels)
    if not labels:
        raise ValueError("no labels")
    return 100.0 * Counter(labels).most_common(1)[0][1] / len(labels)


def metrics(y_true, y_pred) -> tuple[float, dict, dict, list]:
    """Accuracy, per-label precision and recall (percent), 2x2 confusion matrix."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    confusion = np.zeros((2, 2), dtype=np.int64)
    np.add.at(confusion, (y_true, y_pred), 1)
    precision, recall = {}, {}
    for idx, name in enumerate(LABEL_NAMES):
        predicted = confusion[:, idx].sum()
        actual = confusion[idx, :].sum()
        precision[name] = float(100.0 * confusion[idx, idx] / predicted) if predicted else 0.0
        recall[name] = float(100.0 * confusion[idx, idx] / actual) if actual else 0.0
    accuracy = 100.0 * np.trace(confusion) / len(y_true)
    return float(accuracy), precision, recall, confusion.tolist()


def kfold_cv(matrix, labels, k: int, config: MlpConfig, seed: int,
             fit_predict: Optional[FitPredict] = None, features: str = "",
             dataset: str = "") -> EvalReport:
    """Stratified k-fold CV with a standardizer fit inside every training fold."""
    y = np.asarray(labels, dtype=np.int64)
    folds = stratified_folds(y, k, seed)
    preds = cross_val_predict(matrix, y, folds, fit_predict or mlp_fit_predict(config), seed)
    accuracy, precision, recall, confusion = metrics(y, preds)
    cfg = {**asdict(config), "hidden_layers": list(config.hidden_layers)}
    return EvalReport(accuracy, precision, recall, k, len(y), confusion, cfg,
                      majority_baseline(y.tolist()), features, dataset)


@dataclass
class FeatureClassReport:
    rows: list  # (name, censored mean, uncensored mean, difference)
    parallel: dict  # label -> values over the top features

    def write_csv(self, path) -> None:
        with Path(path).open("w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["rank", "feature", "censored_mean", "uncensored_mean", "difference"])
            for i, (name, c, u, d) in enumerate(self.rows, 1):
                w.writerow([i, name, repr(c), repr(u), repr(d)])


def feature_class_report(matrix, labels, names: Sequence[str], top_n: int = 10) -> FeatureClassReport:
    """Rank features by |censored mean - uncensored mean|.

    Class means use ``math.fsum`` so the ranking does not depend on row order.
    """
    X = np.asarray(matrix, dtype=np.float64)
    y = np.asarray(labels)
    cens, unc = X[y == 1], X[y == 0]

    def col_means(rows):
        if len(rows) == 0:
            return np.zeros(X.shape[1])
        return np.array([math.fsum(rows[:, j]) / len(rows) for j in range(X.shape[1])])

    mc, mu = col_means(cens), col_means(unc)
    diff = mc - mu
    order = sorted(range(X.shape[1]), key=lambda j: -abs(diff[j]))[:top_n]
    rows = [(names[j], float(mc[j]), float(mu[j]), float(diff[j])) for j in order]
    parallel = {
        "features": [names[j] for j in order],
        "censored": [float(mc[j]) for j in order],
        "uncensored": [float(mu[j]) for j in order],
    }
    return FeatureClassReport(rows, parallel)


def parallel_coordinates_svg(parallel: dict, width: int = 900, height: int = 420) -> str:
    """Static two-line parallel-coordinates plot of class means."""
    feats = parallel["features"]
    lines = {"censored": "#c0392b", "uncensored": "#2471a3"}
    values = [v for lbl in lines for v in parallel[lbl]]
    lo, hi = (min(values), max(values)) if values else (0.0, 1.0)
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    left, right, top, bottom = 60, 30, 40, 150
    plot_w = width - left - right
    plot_h = height - top - bottom

    def x(i):
        return left + (plot_w * i / (len(feats) - 1) if len(feats) > 1 else plot_w / 2)

    def y(v):
        return top + plot_h * (hi - v) / (hi - lo)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
           f'<rect width="{width}" height="{height}" fill="white"/>']
    for i, name in enumerate(feats):
        out.append(f'<line x1="{x(i):.1f}" y1="{top}" x2="{x(i):.1f}" y2="{top + plot_h}" stroke="#999"/>')
        out.append(f'<text transform="translate({x(i):.1f},{top + plot_h + 10}) rotate(45)">{escape(name)}</text>')
    out.append(f'<text x="{left - 8}" y="{top}" text-anchor="end">{hi:.2f}</text>')
    out.append(f'<text x="{left - 8}" y="{top + plot_h}" text-anchor="end">{lo:.2f}</text>')
    for k, (lbl, colour) in enumerate(lines.items()):
        pts = " ".join(f"{x(i):.1f},{y(v):.1f}" for i, v in enumerate(parallel[lbl]))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text x="{left + 110 * k}" y="20" fill="{colour}">{lbl}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


@dataclass
class VerbClassResult:
    counts: dict  # label -> [count per verb class 1..5]
    proportions: dict
    chi_square: float
    dof: int = len(VERB_CLASSES) - 1


def chi_square_statistic(table) -> float:
    """Pearson chi-square over a contingency table, skipping zero-expectation cells."""
    obs = np.asarray(table, dtype=np.float64)
    total = obs.sum()
    expected = np.outer(obs.sum(axis=1), obs.sum(axis=0)) / total
    mask = expected > 0
    return float((((obs - expected) ** 2)[mask] / expected[mask]).sum())


def verb_class_analysis(corpus: Corpus, segmenter: Segmenter, thesaurus: Thesaurus) -> VerbClassResult:
    classes = sorted(VERB_CLASSES)
    counts = {lbl: [0] * len(classes) for lbl in ("censored", "uncensored")}
    for post in corpus.posts:
        if post.status is CensorshipStatus.CENSORED:
            row = counts["censored"]
        elif post.status is CensorshipStatus.UNCENSORED:
            row = counts["uncensored"]
        else:
            continue
        for tok in segmenter.segment(post.text):
            vc = thesaurus.verb_classes.get(tok.surface)
            if tok.pos == VERB and vc is not None:
                row[vc - 1] += 1
    if sum(map(sum, counts.values())) == 0:
        raise ValueError("no verbs found")
    proportions = {lbl: [c / sum(row) if sum(row) else 0.0 for c in row] for lbl, row in counts.items()}
    table = [row for row in counts.values() if sum(row)]
    return VerbClassResult(counts, proportions, chi_square_statistic(table))


class KappaUndefined(ValueError):
    pass


def fleiss_kappa_counts(counts) -> float:
    """Fleiss' kappa from an items x categories count matrix with equal row sums."""
    counts = np.asarray(counts, dtype=np.float64)
    n_items = counts.shape[0]
    raters = counts.sum(axis=1)
    if n_items == 0 or np.any(raters != raters[0]) or raters[0] < 2:
        raise ValueError("every item needs the same number (>= 2) of ratings")
    n = raters[0]
    p_item = ((counts * counts).sum(axis=1) - n) / (n * (n - 1))
    p_bar = p_item.mean()
    p_cat = counts.sum(axis=0) / (n_items * n)
    p_e = float((p_cat ** 2).sum())
    if p_e >= 1.0:
        raise KappaUndefined("all ratings fall in one category; kappa is undefined")
    return float((p_bar - p_e) / (1.0 - p_e))


def fleiss_kappa(batch: Sequence[Sequence[str]], categories: Sequence[str] = ("Yes", "No")) -> float:
    """Fleiss' kappa for items rated by possibly different numbers of raters.

    Items are grouped by rater count, kappa is computed per group and the
    groups' values are averaged; groups where kappa is undefined are skipped.
    """
    groups: dict[int, list[list[int]]] = {}
    for i, ratings in enumerate(batch):
        ratings = [r for r in ratings if r]
        if len(ratings) < 2:
            raise ValueError(f"item {i} has fewer than 2 ratings")
        unknown = set(ratings) - set(categories)
        if unknown:
            raise ValueError(f"item {i} has unknown ratings {sorted(unknown)}")
        groups.setdefault(len(ratings), []).append([ratings.count(c) for c in categories])
    kappas = []
    for n in sorted(groups):
        try:
            kappas.append(fleiss_kappa_counts(groups[n]))
        except KappaUndefined:
            continue
    if not kappas:
        raise KappaUndefined("kappa undefined: every item and rating falls in one category")
    return float(np.mean(kappas))


def kappa_interpretation(kappa: float) -> str:
    """Landis & Koch agreement band."""
    if kappa < 0:
        return "poor agreement"
    for bound, label in ((0.20, "slight"), (0.40, "fair"), (0.60, "moderate"), (0.80, "substantial")):
        if kappa <= bound:
            return f"{label} agreement"
    return "almost perfect agreement"


def read_annotations(path) -> list[list[str]]:
    """Annotation CSV: item_id, then one column per rater with Yes/No/empty."""
    with Path(path).open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        if next(reader, None) is None:
            raise ValueError(f"{path}: empty annotation file")
        return [[cell.strip().capitalize() for cell in row[1:]] for row in reader if row]


def write_report(report: EvalReport, json_path, text_path=None, **extra) -> None:
    Path(json_path).write_text(json.dumps({**report.to_dict(), **extra}, indent=1) + "\n",
                               encoding="utf-8")
    if text_path is not None:
        Path(text_path).write_text(report.table(), encoding="utf-8")
