from .base import OnlineClassifier
from .bayes import GaussianNB
from .forest import AdaptiveRandomForest
from .linear import LogisticRegression
from .snapshot import load_model, restore_model, save_model, snapshot_dict, snapshot_json
from .tree import HoeffdingTree

__all__ = [
    "OnlineClassifier",
    "LogisticRegression",
    "GaussianNB",
    "HoeffdingTree",
    "AdaptiveRandomForest",
    "save_model",
    "load_model",
    "restore_model",
    "snapshot_dict",
    "snapshot_json",
]
