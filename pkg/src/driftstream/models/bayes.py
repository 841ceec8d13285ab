"""Incremental Gaussian naive Bayes with a variance floor."""

from __future__ import annotations

import math
from typing import Sequence

from ..stats import RunningStats, gaussian_logpdf, sigmoid
from .base import check_sample


class GaussianNB:
    """Gaussian naive Bayes updated one sample at a time.

    Per class and per feature a single-pass mean/variance accumulator is
    maintained; its results equal batch mean and population variance over the
    same samples. Stored variances may be zero (single sample); at scoring
    time every variance is floored to ``min_variance``. Posteriors are
    computed in the log domain.
    """

    def __init__(self, n_features: int = 4, min_variance: float = 1e-10):
        self.n_features = n_features
        self.min_variance = min_variance
        self.counts = [0.0, 0.0]
        self._stats = [
            [RunningStats() for _ in range(n_features)],
            [RunningStats() for _ in range(n_features)],
        ]

    def learn_one(self, x: Sequence[float], y: int) -> None:
        check_sample(x, y)
        self.counts[y] += 1.0
        stats = self._stats[y]
        for j, v in enumerate(x):
            stats[j].update(v)

    def class_mean(self, y: int, feature: int) -> float:
        return self._stats[y][feature].mean

    def class_variance(self, y: int, feature: int) -> float:
        return self._stats[y][feature].variance

    def _log_joint(self, x: Sequence[float], y: int, log_prior: float) -> float:
        total = log_prior
        for j, v in enumerate(x):
            rs = self._stats[y][j]
            var = max(rs.variance, self.min_variance)
            total += gaussian_logpdf(v, rs.mean, var)
        return total

    def score_one(self, x: Sequence[float]) -> float:
        check_sample(x)
        n0, n1 = self.counts
        total = n0 + n1
        if total == 0.0:
            return 0.5
        if n0 == 0.0:
            return 1.0
        if n1 == 0.0:
            return 0.0
        lj0 = self._log_joint(x, 0, math.log(n0 / total))
        lj1 = self._log_joint(x, 1, math.log(n1 / total))
        return sigmoid(lj1 - lj0)

    def to_state(self) -> dict:
        return {
            "kind": "nb",
            "n_features": self.n_features,
            "min_variance": self.min_variance,
            "counts": list(self.counts),
            "stats": [[rs.to_state() for rs in per_class] for per_class in self._stats],
        }

    @classmethod
    def from_state(cls, state: dict) -> "GaussianNB":
        model = cls(n_features=state["n_features"], min_variance=state["min_variance"])
        model.counts = [float(c) for c in state["counts"]]
        model._stats = [
            [RunningStats.from_state(s) for s in per_class] for per_class in state["stats"]
        ]
        return model
