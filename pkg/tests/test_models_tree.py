import numpy as np
import pytest

from driftstream.models import HoeffdingTree
from driftstream.models.snapshot import restore_model, snapshot_dict, snapshot_json


def test_unfitted_scores_half():
    assert HoeffdingTree().score_one((1.0, 2.0, 3.0, 4.0)) == 0.5


def test_no_split_before_grace_period():
    tree = HoeffdingTree(n_features=1, grace_period=50)
    rng = np.random.default_rng(0)
    for i in range(49):
        x = float(rng.uniform(-1, 1))
        tree.learn_one((x,), int(x >= 0))
    assert tree.n_splits == 0
    # the 50th sample triggers the first attempt; separable data splits there
    x = float(rng.uniform(-1, 1))
    tree.learn_one((x,), int(x >= 0))
    assert tree.n_splits == 1


def test_separable_one_feature_stream_splits_and_fits():
    rng = np.random.default_rng(3)
    xs = rng.uniform(-1, 1, 500)
    tree = HoeffdingTree(n_features=1)
    for x in xs:
        tree.learn_one((float(x),), int(x >= 0))
    assert tree.n_splits >= 1
    correct = sum((tree.score_one((float(x),)) >= 0.5) == (x >= 0) for x in xs)
    assert correct / len(xs) >= 0.95


def test_pure_class_stream_never_splits():
    rng = np.random.default_rng(1)
    tree = HoeffdingTree(n_features=2)
    for _ in range(1000):
        tree.learn_one((float(rng.normal()), float(rng.normal())), 1)
    assert tree.n_splits == 0
    assert tree.n_leaves == 1


def test_leaf_counts_equal_routed_weight():
    tree = HoeffdingTree(n_features=1, grace_period=10_000)  # no splits
    total = 0
    rng = np.random.default_rng(4)
    for _ in range(100):
        w = int(rng.integers(1, 5))
        tree.learn_one((float(rng.normal()),), int(rng.integers(0, 2)), weight=w)
        total += w
    assert sum(tree._root.counts) == total


def test_weight_must_be_positive():
    tree = HoeffdingTree(n_features=1)
    with pytest.raises(ValueError):
        tree.learn_one((0.0,), 1, weight=0)


def test_laplace_smoothing_at_leaves():
    tree = HoeffdingTree(n_features=1, grace_period=10_000)
    for _ in range(3):
        tree.learn_one((0.0,), 1)
    assert tree.score_one((0.0,)) == pytest.approx(4.0 / 5.0)


def test_constant_feature_cannot_split():
    tree = HoeffdingTree(n_features=1)
    for i in range(500):
        tree.learn_one((1.0,), i % 2)
    assert tree.n_splits == 0


def test_subset_trees_deterministic_under_seed():
    def run(seed):
        rng = np.random.default_rng(9)
        tree = HoeffdingTree(n_features=4, max_features=2, seed=seed)
        scores = []
        for _ in range(800):
            x = tuple(rng.normal(0, 1, 4).tolist())
            y = int(x[2] > 0)
            scores.append(tree.score_one(x))
            tree.learn_one(x, y)
        return scores, tree.n_splits

    assert run(5) == run(5)
    # subsets drive how quickly structure appears (seed 0 split once,
    # seed 1 twice on this stream); either way replays are bit-stable
    assert run(0)[1] != run(1)[1]


def test_tree_only_grows():
    rng = np.random.default_rng(2)
    tree = HoeffdingTree(n_features=1)
    leaves = [tree.n_leaves]
    for i in range(2000):
        x = float(rng.uniform(-2, 2))
        tree.learn_one((x,), int(x >= 0.3))
        leaves.append(tree.n_leaves)
    assert all(b >= a for a, b in zip(leaves, leaves[1:]))


def test_scoring_is_pure():
    rng = np.random.default_rng(7)
    tree = HoeffdingTree(n_features=2)
    for _ in range(300):
        x = (float(rng.normal()), float(rng.normal()))
        tree.learn_one(x, int(x[0] > 0))
    before = snapshot_json(tree)
    for _ in range(50):
        tree.score_one((0.1, -0.2))
    assert snapshot_json(tree) == before


def test_snapshot_round_trip_mid_growth():
    rng = np.random.default_rng(12)
    tree = HoeffdingTree(n_features=4, max_features=2, seed=3)
    stream = [
        (tuple(rng.normal(0, 1, 4).tolist()), int(rng.integers(0, 2))) for _ in range(600)
    ]
    for x, y in stream[:300]:
        tree.learn_one(x, y)
    clone = restore_model(snapshot_dict(tree))
    for x, y in stream[300:]:
        assert clone.score_one(x) == tree.score_one(x)
        clone.learn_one(x, y)
        tree.learn_one(x, y)
    assert snapshot_json(clone) == snapshot_json(tree)
