"""Online logistic regression trained by plain SGD on binary log loss."""

from __future__ import annotations

from typing import Sequence

from ..stats import RunningStats, sigmoid
from .base import check_sample


class LogisticRegression:
    """Logistic regression updated one sample at a time.

    Features are standardized with running per-feature mean/variance because
    the raw BER and OSNR scales differ by many orders of magnitude, which
    would cripple SGD at a fixed small learning rate. The standardizer is
    updated with the incoming sample before each gradient step. Set
    ``standardize=False`` to train on raw features.
    """

    def __init__(self, n_features: int = 4, learning_rate: float = 0.01, standardize: bool = True):
        self.n_features = n_features
        self.learning_rate = learning_rate
        self.standardize = standardize
        self.weights = [0.0] * n_features
        self.bias = 0.0
        self.n_seen = 0
        self._scaler = [RunningStats() for _ in range(n_features)]

    def _transform(self, x: Sequence[float]) -> list[float]:
        if not self.standardize:
            return list(x)
        out = []
        for j, v in enumerate(x):
            rs = self._scaler[j]
            if rs.n == 0.0:
                out.append(v)
                continue
            sd = rs.stddev
            out.append((v - rs.mean) / sd if sd > 0.0 else v - rs.mean)
        return out

    def score_one(self, x: Sequence[float]) -> float:
        check_sample(x)
        xt = self._transform(x)
        z = self.bias
        for w, v in zip(self.weights, xt):
            z += w * v
        return sigmoid(z)

    def learn_one(self, x: Sequence[float], y: int) -> None:
        check_sample(x, y)
        if self.standardize:
            for j, v in enumerate(x):
                self._scaler[j].update(v)
        xt = self._transform(x)
        z = self.bias
        for w, v in zip(self.weights, xt):
            z += w * v
        grad = sigmoid(z) - y
        lr = self.learning_rate
        for j, v in enumerate(xt):
            self.weights[j] -= lr * grad * v
        self.bias -= lr * grad
        self.n_seen += 1

    def to_state(self) -> dict:
        return {
            "kind": "lr",
            "n_features": self.n_features,
            "learning_rate": self.learning_rate,
            "standardize": self.standardize,
            "weights": list(self.weights),
            "bias": self.bias,
            "n_seen": self.n_seen,
            "scaler": [rs.to_state() for rs in self._scaler],
        }

    @classmethod
    def from_state(cls, state: dict) -> "LogisticRegression":
        model = cls(
            n_features=state["n_features"],
            learning_rate=state["learning_rate"],
            standardize=state["standardize"],
        )
        model.weights = [float(w) for w in state["weights"]]
        model.bias = float(state["bias"])
        model.n_seen = int(state["n_seen"])
        model._scaler = [RunningStats.from_state(s) for s in state["scaler"]]
        return model
