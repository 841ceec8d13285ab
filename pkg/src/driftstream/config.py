"""Experiment configuration: defaults, JSON config files, seed discipline.

All randomness flows from one root seed. Every stochastic component asks for
a named sub-seed derived from (root seed, component label), so enabling or
reconfiguring one component never perturbs another component's draws.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .drift import Direction
from .errors import ConfigError, InvalidConfig
from .models import AdaptiveRandomForest, GaussianNB, HoeffdingTree, LogisticRegression
from .streams import OversampleConfig, StreamConfig
from .telemetry import N_FEATURES, OSNR_RX_INDEX

VALID_MODELS = ("lr", "nb", "arf")
VALID_FORMATS = ("csv", "json")


def named_seed(root_seed: int, label: str) -> np.random.SeedSequence:
    """Deterministic, platform-independent sub-seed for a named component."""
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    spawn_key = tuple(int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4))
    return np.random.SeedSequence(entropy=root_seed, spawn_key=spawn_key)


@dataclass
class PhtParams:
    delta: float = 0.005
    threshold: float = 50.0
    min_instances: int = 30
    direction: str = Direction.TWO_SIDED.value
    feature_index: int = OSNR_RX_INDEX


@dataclass
class LrParams:
    learning_rate: float = 0.01
    standardize: bool = True


@dataclass
class NbParams:
    min_variance: float = 1e-10


@dataclass
class ArfParams:
    n_trees: int = 10
    max_features: int = 2
    lambda_bag: float = 6.0
    grace_period: int = 50
    split_confidence: float = 1e-7
    tie_threshold: float = 0.05
    n_split_candidates: int = 10
    min_split_gain: float = 1e-3
    warn_threshold: float = 20.0
    drift_threshold: float = 50.0


@dataclass
class BenchParams:
    trials: int = 100
    events_per_trial: int = 1000
    warmup_trials: int = 1


@dataclass
class ExperimentConfig:
    seed: int = 7
    models: list[str] = field(default_factory=lambda: list(VALID_MODELS))
    window: int = 500
    epochs: int = 1
    out_dir: str = "out"
    format: str = "csv"
    stream: StreamConfig = field(default_factory=StreamConfig)
    oversample: Optional[OversampleConfig] = None
    pht: PhtParams = field(default_factory=PhtParams)
    lr: LrParams = field(default_factory=LrParams)
    nb: NbParams = field(default_factory=NbParams)
    arf: ArfParams = field(default_factory=ArfParams)
    bench: BenchParams = field(default_factory=BenchParams)

    def validate(self) -> None:
        if not self.models:
            raise ConfigError("models", "select at least one model")
        for name in self.models:
            if name not in VALID_MODELS:
                raise ConfigError("models", f"unknown model name {name!r}; valid: {VALID_MODELS}")
        if self.window < 2:
            raise ConfigError("window", "must be >= 2")
        if self.epochs < 1:
            raise ConfigError("epochs", "must be >= 1")
        if self.format not in VALID_FORMATS:
            raise ConfigError("format", f"must be one of {VALID_FORMATS}")
        if self.seed < 0 or self.seed > 2**64 - 1:
            raise ConfigError("seed", "must fit into an unsigned 64-bit integer")
        if self.bench.trials < 1:
            raise ConfigError("bench.trials", "must be >= 1")
        if self.bench.events_per_trial < 1:
            raise ConfigError("bench.events_per_trial", "must be >= 1")
        if self.bench.warmup_trials < 0:
            raise ConfigError("bench.warmup_trials", "must be >= 0")
        if not 0 <= self.pht.feature_index < N_FEATURES:
            raise ConfigError("pht.feature_index", f"must be in [0, {N_FEATURES})")
        try:
            Direction(self.pht.direction)
        except ValueError:
            raise ConfigError("pht.direction", f"unknown direction {self.pht.direction!r}") from None
        try:
            self.stream.validate()
            if self.oversample is not None:
                self.oversample.validate()
        except InvalidConfig as err:
            raise ConfigError("stream", str(err)) from err

    def build_model(self, name: str):
        """Fresh, unfitted model with this config's hyperparameters.

        Seeded from the named sub-seed for the model, so separately built
        instances of the same kind start bit-identical.
        """
        if name == "lr":
            return LogisticRegression(
                n_features=N_FEATURES,
                learning_rate=self.lr.learning_rate,
                standardize=self.lr.standardize,
            )
        if name == "nb":
            return GaussianNB(n_features=N_FEATURES, min_variance=self.nb.min_variance)
        if name == "arf":
            return AdaptiveRandomForest(
                n_features=N_FEATURES,
                n_trees=self.arf.n_trees,
                max_features=self.arf.max_features,
                lambda_bag=self.arf.lambda_bag,
                grace_period=self.arf.grace_period,
                split_confidence=self.arf.split_confidence,
                tie_threshold=self.arf.tie_threshold,
                n_split_candidates=self.arf.n_split_candidates,
                min_split_gain=self.arf.min_split_gain,
                warn_threshold=self.arf.warn_threshold,
                drift_threshold=self.arf.drift_threshold,
                seed=named_seed(self.seed, f"model:{name}"),
            )
        if name == "ht":
            return HoeffdingTree(
                n_features=N_FEATURES,
                grace_period=self.arf.grace_period,
                split_confidence=self.arf.split_confidence,
                tie_threshold=self.arf.tie_threshold,
                n_split_candidates=self.arf.n_split_candidates,
                min_split_gain=self.arf.min_split_gain,
            )
        raise ConfigError("models", f"unknown model name {name!r}")

    def to_dict(self) -> dict:
        data = asdict(self)
        data["stream"]["synth"] = asdict(self.stream.synth)
        data["oversample"] = asdict(self.oversample) if self.oversample else None
        return data


def _apply_section(target, data: dict, section: str) -> None:
    for key, value in data.items():
        if not hasattr(target, key):
            raise ConfigError(f"{section}.{key}", "unknown config key")
        setattr(target, key, value)


def config_from_dict(data: dict) -> ExperimentConfig:
    cfg = ExperimentConfig()
    for key, value in data.items():
        if key == "stream":
            stream_data = dict(value)
            synth_data = stream_data.pop("synth", None)
            _apply_section(cfg.stream, stream_data, "stream")
            if synth_data is not None:
                _apply_section(cfg.stream.synth, synth_data, "stream.synth")
        elif key == "oversample":
            if value is None:
                cfg.oversample = None
            else:
                cfg.oversample = OversampleConfig()
                _apply_section(cfg.oversample, value, "oversample")
        elif key in ("pht", "lr", "nb", "arf", "bench"):
            _apply_section(getattr(cfg, key), value, key)
        elif hasattr(cfg, key):
            setattr(cfg, key, value)
        else:
            raise ConfigError(key, "unknown config key")
    return cfg


def load_config(path: str) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as err:
            raise ConfigError("config", f"not valid JSON: {err}") from err
    if not isinstance(data, dict):
        raise ConfigError("config", "top-level JSON value must be an object")
    return config_from_dict(data)
