import numpy as np
import pytest

from censorlens.cv import cv_accuracy
from censorlens.selection import SELECTION_CONFIG, FeatureSet, select_features


def planted(n=300, n_features=30, seed=0):
    rng = np.random.default_rng(seed)
    y = rng.integers(0, 2, n)
    X = rng.normal(size=(n, n_features))
    X[:, :5] += (y[:, None] * 2 - 1) * 0.6
    return X, y


def test_planted_signal_recovered():
    X, y = planted()
    fs = select_features(X, y, trials=200, subset_size=5, seed=1)
    assert len({"0", "1", "2", "3", "4"} & set(fs.names)) >= 4


def test_target_size_is_exact():
    X, y = planted(n=90, n_features=100)
    fs = select_features(X, y, trials=2, subset_size=77, seed=0,
                         config=SELECTION_CONFIG.replace(epochs=2))
    assert len(fs.names) == len(set(fs.names)) == 77


def test_single_trial_returns_that_subset():
    X, y = planted(n=90, n_features=12)
    fs = select_features(X, y, trials=1, subset_size=4, seed=3,
                         config=SELECTION_CONFIG.replace(epochs=5))
    assert len(fs.provenance["scores"]) == 4
    # every chosen feature carries the one trial's score
    assert len(set(fs.provenance["scores"].values())) == 1
    assert fs.provenance["best_trial_accuracy"] == list(fs.provenance["scores"].values())[0]


def test_deterministic_and_named():
    X, y = planted(n=90, n_features=8)
    names = [f"f{i}" for i in range(8)]
    cfg = SELECTION_CONFIG.replace(epochs=5)
    a = select_features(X, y, trials=5, subset_size=3, seed=7, names=names, config=cfg)
    b = select_features(X, y, trials=5, subset_size=3, seed=7, names=names, config=cfg)
    assert a == b and set(a.names) <= set(names)


def test_bad_arguments():
    X, y = planted(n=60, n_features=5)
    with pytest.raises(ValueError):
        select_features(X, y, trials=0, subset_size=2, seed=0)
    with pytest.raises(ValueError):
        select_features(X, y, trials=1, subset_size=6, seed=0)
    with pytest.raises(ValueError):
        select_features(X, np.zeros(60), trials=1, subset_size=2, seed=0)
    with pytest.raises(ValueError):
        FeatureSet([])


def test_feature_set_round_trip(tmp_path):
    fs = FeatureSet(["a", "b"], {"run_id": "x"})
    fs.save(tmp_path / "f.json", manifest="m.json")
    assert FeatureSet.load(tmp_path / "f.json") == fs


def test_cv_accuracy_above_chance_on_signal():
    X, y = planted()
    assert cv_accuracy(X[:, :5], y, 3, SELECTION_CONFIG, 0) > 0.8
