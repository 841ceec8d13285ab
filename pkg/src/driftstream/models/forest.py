"""Streaming ensemble of Hoeffding trees with drift-triggered replacement.

Each member tree sees every sample with a Poisson-distributed weight (online
bagging) and restricts its splits to small random feature subsets. Two
change detectors watch each tree's own prequential 0/1 error: the warning
detector starts a background tree that trains alongside, and the drift
detector swaps the background tree in (or a fresh tree if none exists).
"""

from __future__ import annotations

from typing import Optional, Sequence, Union

import numpy as np

from ..drift import Direction, PageHinkley
from .base import check_sample
from .tree import HoeffdingTree, _rng_from_state, _rng_state

SeedLike = Union[int, np.random.SeedSequence, None]


class AdaptiveRandomForest:
    """Online random forest over Hoeffding trees.

    The ensemble size stays constant; adaptation happens through per-tree
    background training and replacement. All randomness (bagging weights,
    per-leaf feature subsets, background-tree seeds) flows from the single
    constructor seed, and trees are updated in index order, so runs are
    reproducible.

    ``bagging=False`` forces every sample weight to 1 and
    ``drift_detection=False`` disables the per-tree detectors; with one tree
    and ``max_features`` covering all features this reduces the forest to a
    single plain Hoeffding tree.
    """

    def __init__(
        self,
        n_features: int = 4,
        n_trees: int = 10,
        max_features: Optional[int] = 2,
        lambda_bag: float = 6.0,
        grace_period: int = 50,
        split_confidence: float = 1e-7,
        tie_threshold: float = 0.05,
        n_split_candidates: int = 10,
        min_split_gain: float = 1e-3,
        warn_threshold: float = 20.0,
        drift_threshold: float = 50.0,
        detector_delta: float = 0.005,
        detector_min_instances: int = 30,
        bagging: bool = True,
        drift_detection: bool = True,
        seed: SeedLike = None,
    ):
        self.n_features = n_features
        self.n_trees = n_trees
        self.max_features = max_features
        self.lambda_bag = lambda_bag
        self.grace_period = grace_period
        self.split_confidence = split_confidence
        self.tie_threshold = tie_threshold
        self.n_split_candidates = n_split_candidates
        self.min_split_gain = min_split_gain
        self.warn_threshold = warn_threshold
        self.drift_threshold = drift_threshold
        self.detector_delta = detector_delta
        self.detector_min_instances = detector_min_instances
        self.bagging = bagging
        self.drift_detection = drift_detection

        self._ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        children = self._ss.spawn(n_trees + 1)
        self._bag_rng = np.random.default_rng(children[-1])
        self.trees = [self._new_tree(children[i]) for i in range(n_trees)]
        self._background: list[Optional[HoeffdingTree]] = [None] * n_trees
        self._warn = [self._new_detector(self.warn_threshold) for _ in range(n_trees)]
        self._drift = [self._new_detector(self.drift_threshold) for _ in range(n_trees)]
        self.n_warnings = 0
        self.n_replacements = 0

    def _new_tree(self, seed) -> HoeffdingTree:
        return HoeffdingTree(
            n_features=self.n_features,
            grace_period=self.grace_period,
            split_confidence=self.split_confidence,
            tie_threshold=self.tie_threshold,
            n_split_candidates=self.n_split_candidates,
            min_split_gain=self.min_split_gain,
            max_features=self.max_features,
            seed=seed,
        )

    def _new_detector(self, threshold: float) -> PageHinkley:
        # the error stream only rises under degradation, so one-sided
        return PageHinkley(
            delta=self.detector_delta,
            threshold=threshold,
            min_instances=self.detector_min_instances,
            direction=Direction.INCREASE,
        )

    def score_one(self, x: Sequence[float]) -> float:
        check_sample(x)
        return sum(tree.score_one(x) for tree in self.trees) / self.n_trees

    def learn_one(self, x: Sequence[float], y: int) -> None:
        check_sample(x, y)
        for i in range(self.n_trees):
            tree = self.trees[i]
            predicted = tree.score_one(x) >= 0.5
            error = 1.0 if predicted != (y == 1) else 0.0

            if self.bagging:
                k = int(self._bag_rng.poisson(self.lambda_bag))
            else:
                k = 1
            if k > 0:
                tree.learn_one(x, y, weight=k)
                background = self._background[i]
                if background is not None:
                    background.learn_one(x, y, weight=k)

            if not self.drift_detection:
                continue
            if self._warn[i].update(error) and self._background[i] is None:
                self._background[i] = self._new_tree(self._ss.spawn(1)[0])
                self.n_warnings += 1
            if self._drift[i].update(error):
                replacement = self._background[i]
                if replacement is None:
                    replacement = self._new_tree(self._ss.spawn(1)[0])
                self.trees[i] = replacement
                self._background[i] = None
                self._warn[i] = self._new_detector(self.warn_threshold)
                self._drift[i] = self._new_detector(self.drift_threshold)
                self.n_replacements += 1

    # -- persistence ---------------------------------------------------------

    def to_state(self) -> dict:
        return {
            "kind": "arf",
            "params": {
                "n_features": self.n_features,
                "n_trees": self.n_trees,
                "max_features": self.max_features,
                "lambda_bag": self.lambda_bag,
                "grace_period": self.grace_period,
                "split_confidence": self.split_confidence,
                "tie_threshold": self.tie_threshold,
                "n_split_candidates": self.n_split_candidates,
                "min_split_gain": self.min_split_gain,
                "warn_threshold": self.warn_threshold,
                "drift_threshold": self.drift_threshold,
                "detector_delta": self.detector_delta,
                "detector_min_instances": self.detector_min_instances,
                "bagging": self.bagging,
                "drift_detection": self.drift_detection,
            },
            "seed_sequence": _seed_sequence_state(self._ss),
            "bag_rng": _rng_state(self._bag_rng),
            "trees": [t.to_state() for t in self.trees],
            "background": [t.to_state() if t is not None else None for t in self._background],
            "warn": [d.to_state() for d in self._warn],
            "drift": [d.to_state() for d in self._drift],
            "n_warnings": self.n_warnings,
            "n_replacements": self.n_replacements,
        }

    @classmethod
    def from_state(cls, state: dict) -> "AdaptiveRandomForest":
        forest = cls(**state["params"], seed=0)
        forest._ss = _seed_sequence_from_state(state["seed_sequence"])
        forest._bag_rng = _rng_from_state(state["bag_rng"])
        forest.trees = [HoeffdingTree.from_state(s) for s in state["trees"]]
        forest._background = [
            HoeffdingTree.from_state(s) if s is not None else None for s in state["background"]
        ]
        forest._warn = [PageHinkley.from_state(s) for s in state["warn"]]
        forest._drift = [PageHinkley.from_state(s) for s in state["drift"]]
        forest.n_warnings = int(state["n_warnings"])
        forest.n_replacements = int(state["n_replacements"])
        return forest


def _seed_sequence_state(ss: np.random.SeedSequence) -> dict:
    entropy = ss.entropy
    return {
        "entropy": str(entropy) if entropy is not None else None,
        "spawn_key": [int(k) for k in ss.spawn_key],
        "n_children_spawned": ss.n_children_spawned,
    }


def _seed_sequence_from_state(state: dict) -> np.random.SeedSequence:
    entropy = int(state["entropy"]) if state["entropy"] is not None else None
    return np.random.SeedSequence(
        entropy=entropy,
        spawn_key=tuple(state["spawn_key"]),
        n_children_spawned=int(state["n_children_spawned"]),
    )
