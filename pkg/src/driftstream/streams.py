"""Labeled telemetry stream production.

Four ways to obtain a stream: load one segment from CSV, concatenate a
soft-failure segment with a hard-failure segment into one drifting stream,
append oversampled copies of failure events, or generate the whole scenario
synthetically from a seeded config.

The synthetic scenario is shaped so that a model trained only on the first
(soft-failure) segment faces a genuine regime change in the second segment:

* soft-failure segment: healthy receiver OSNR around a high baseline; each
  failure episode is preceded by a gradual degradation ramp that dips below
  the eventual failure plateau before the sustained, labeled failure sets in;
* hard-failure segment: the whole OSNR regime has shifted far below anything
  seen before, and failure episodes start abruptly, with no warning ramp and
  a deeper drop.

Receiver BER follows a steep waterfall curve of the receiver OSNR (orders of
magnitude per dB), so BER and OSNR are strongly anti-correlated and the
hard-failure regime produces BER values far outside the first segment's
range.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

import numpy as np

from .errors import (
    EmptySegment,
    InvalidConfig,
    MalformedRow,
    DriftStreamError,
    NoFailureSamples,
)
from .telemetry import Label, Segment, TelemetryEvent, serialize, validate

CSV_COLUMNS = ("timestamp", "ber_tx", "osnr_tx", "ber_rx", "osnr_rx", "label", "segment")

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator, None]


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass
class SynthConfig:
    """Parameters of the seeded synthetic drift scenario.

    The defaults are desk-scale choices tuned to keep the two segments'
    ordering constraints intact: the hard-failure OSNR mean sits below the
    soft-failure OSNR mean, which sits below the normal-class mean.
    """

    n_sfd: int = 10000
    n_hfd: int = 5000

    # receiver OSNR regimes (dB)
    osnr_normal_mean: float = 30.0
    osnr_normal_std: float = 0.4
    osnr_soft_drop: float = 6.0
    osnr_hard_drop: float = 16.0
    plateau_std: float = 0.15

    # failure episode shape
    failure_burst_len: int = 200
    sfd_episodes: int = 5
    hfd_episodes: int = 9
    warning_prefix: bool = True
    prefix_ramp_len: int = 100
    prefix_dwell_len: int = 50
    prefix_overshoot_db: float = 3.0
    prefix_dwell_std: float = 0.3

    # regime shift of the hard-failure segment's healthy baseline
    hfd_baseline_shift: float = 13.0
    hfd_baseline_std: float = 0.5

    # BER waterfall: ber = cap / (1 + exp((osnr - center) / scale))
    ber_cap: float = 0.5
    waterfall_center_db: float = 13.0
    waterfall_scale_db: float = 0.5
    ber_jitter_db: float = 0.2

    # transmitter side (healthy throughout)
    osnr_tx_mean: float = 32.0
    osnr_tx_std: float = 0.3

    def episode_len(self) -> int:
        extra = (self.prefix_ramp_len + self.prefix_dwell_len) if self.warning_prefix else 0
        return extra + self.failure_burst_len

    def validate(self) -> None:
        if self.n_sfd < 1:
            raise InvalidConfig("n_sfd must be >= 1")
        if self.n_hfd < 0:
            raise InvalidConfig("n_hfd must be >= 0")
        if not (self.osnr_hard_drop > self.osnr_soft_drop > 0.0):
            raise InvalidConfig("need osnr_hard_drop > osnr_soft_drop > 0")
        if self.failure_burst_len < 1:
            raise InvalidConfig("failure_burst_len must be >= 1")
        if self.sfd_episodes < 0 or self.hfd_episodes < 0:
            raise InvalidConfig("episode counts must be >= 0")
        if self.sfd_episodes > 0 and self.sfd_episodes * self.episode_len() > self.n_sfd:
            raise InvalidConfig("soft-failure episodes do not fit into n_sfd")
        if self.n_hfd > 0 and self.hfd_episodes * self.failure_burst_len > self.n_hfd:
            raise InvalidConfig("hard-failure episodes do not fit into n_hfd")
        if self.osnr_normal_mean - self.osnr_hard_drop <= 0.0:
            raise InvalidConfig("hard-failure OSNR level must stay positive")
        if self.osnr_normal_mean - self.osnr_soft_drop - self.prefix_overshoot_db <= 0.0:
            raise InvalidConfig("prefix dip OSNR level must stay positive")
        if self.osnr_normal_mean - self.hfd_baseline_shift <= 0.0:
            raise InvalidConfig("shifted baseline OSNR level must stay positive")
        for name in ("osnr_normal_std", "plateau_std", "hfd_baseline_std",
                     "prefix_dwell_std", "osnr_tx_std", "ber_jitter_db"):
            if getattr(self, name) < 0.0:
                raise InvalidConfig(f"{name} must be >= 0")
        if not (0.0 < self.ber_cap <= 1.0):
            raise InvalidConfig("ber_cap must be in (0, 1]")
        if self.waterfall_scale_db <= 0.0:
            raise InvalidConfig("waterfall_scale_db must be > 0")


@dataclass
class OversampleConfig:
    """How to top up failure samples at the stream tail."""

    target_failure_ratio: Optional[float] = None
    target_failure_count: Optional[int] = None

    def validate(self) -> None:
        if (self.target_failure_ratio is None) == (self.target_failure_count is None):
            raise InvalidConfig("set exactly one of target_failure_ratio / target_failure_count")
        if self.target_failure_ratio is not None and not (0.0 < self.target_failure_ratio <= 0.5):
            raise InvalidConfig("target_failure_ratio must be in (0, 0.5]")
        if self.target_failure_count is not None and self.target_failure_count < 0:
            raise InvalidConfig("target_failure_count must be >= 0")


@dataclass
class StreamConfig:
    """Where the experiment stream comes from: CSV files or the generator."""

    mode: str = "synth"  # "synth" | "file"
    sfd_path: Optional[str] = None
    hfd_path: Optional[str] = None
    column_map: dict = field(default_factory=dict)
    synth: SynthConfig = field(default_factory=SynthConfig)

    def validate(self) -> None:
        if self.mode == "file":
            if not self.sfd_path or not self.hfd_path:
                raise InvalidConfig("file mode needs both sfd_path and hfd_path")
        elif self.mode == "synth":
            self.synth.validate()
        else:
            raise InvalidConfig(f"unknown stream mode: {self.mode}")


def load_csv(
    path: str,
    *,
    column_map: Optional[dict] = None,
    default_segment: Segment = Segment.SFD,
) -> list[TelemetryEvent]:
    """Load one segment from a CSV file, preserving row order.

    ``column_map`` renames source headers to the canonical column names
    (for example ``{"OSNR_SPO2": "osnr_rx"}``). Rows are validated through
    the telemetry layer; the first bad row raises MalformedRow with its
    1-based data-row number. Timestamps must strictly increase.
    """
    events: list[TelemetryEvent] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        prev_ts = None
        for row_number, row in enumerate(reader, start=1):
            record = {}
            for key, value in row.items():
                if key is None:
                    continue
                record[(column_map or {}).get(key, key)] = value
            try:
                event = validate(record, index=row_number - 1, segment=default_segment)
            except DriftStreamError as err:
                raise MalformedRow(row_number, err) from err
            if prev_ts is not None and event.timestamp <= prev_ts:
                raise MalformedRow(
                    row_number,
                    InvalidConfig("timestamps must strictly increase within a stream"),
                )
            prev_ts = event.timestamp
            events.append(event)
    return events


def write_csv(events: Sequence[TelemetryEvent], path: str) -> None:
    """Write events with full float precision (repr round-trips exactly)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for event in events:
            record = serialize(event)
            writer.writerow([record[col] for col in CSV_COLUMNS])


def merge_sfd_hfd(
    sfd: Sequence[TelemetryEvent], hfd: Sequence[TelemetryEvent]
) -> list[TelemetryEvent]:
    """Concatenate the two segments into one stream.

    Output order is sfd followed by hfd; segment tags are preserved and
    timestamps are re-indexed to a single 0-based ordinal. Inputs are not
    mutated.
    """
    if len(sfd) == 0:
        raise EmptySegment("sfd")
    if len(hfd) == 0:
        raise EmptySegment("hfd")
    merged = []
    for i, event in enumerate(list(sfd) + list(hfd)):
        merged.append(event.with_timestamp(i))
    return merged


def random_oversample(
    events: Sequence[TelemetryEvent],
    target_failure_ratio: Optional[float] = None,
    seed: SeedLike = None,
    *,
    target_failure_count: Optional[int] = None,
) -> list[TelemetryEvent]:
    """Append uniformly-drawn copies of existing failure events.

    Copies are drawn with replacement from the failure events already in the
    sequence, tagged ``Oversampled``, re-timestamped to continue the ordinal,
    and appended until the target failure count is met. With a ratio target,
    the ratio is the failure share of the resulting sequence. If the target
    is already met the input is returned unchanged. Deterministic under a
    fixed seed.
    """
    events = list(events)
    failures = [e for e in events if e.label == Label.FAILURE]
    if not failures:
        raise NoFailureSamples()

    if (target_failure_ratio is None) == (target_failure_count is None):
        raise InvalidConfig("set exactly one of target_failure_ratio / target_failure_count")
    if target_failure_ratio is not None:
        if not (0.0 < target_failure_ratio <= 0.5):
            raise InvalidConfig("target_failure_ratio must be in (0, 0.5]")
        r = target_failure_ratio
        need = (r * len(events) - len(failures)) / (1.0 - r)
        k = max(0, math.ceil(need - 1e-12))
    else:
        k = max(0, int(target_failure_count) - len(failures))

    if k == 0:
        return events

    rng = _rng(seed)
    picks = rng.integers(0, len(failures), size=k)
    next_ts = events[-1].timestamp + 1
    out = events
    for j, pick in enumerate(picks):
        source = failures[int(pick)]
        out.append(replace(source, timestamp=next_ts + j, segment=Segment.OVERSAMPLED))
    return out


def _waterfall_ber(osnr_db: np.ndarray, cfg: SynthConfig, rng: np.random.Generator) -> np.ndarray:
    jitter = rng.standard_normal(osnr_db.shape) * cfg.ber_jitter_db
    z = (osnr_db + jitter - cfg.waterfall_center_db) / cfg.waterfall_scale_db
    # exp overflows harmlessly to inf for healthy OSNR -> ber underflows to 0
    with np.errstate(over="ignore"):
        ber = cfg.ber_cap / (1.0 + np.exp(z))
    return ber


def _episode_starts(n: int, episodes: int, episode_len: int, *, centered_tail: bool) -> list[int]:
    """Evenly spaced episode start indices.

    ``centered_tail`` places half a gap before the first and after the last
    episode so no long quiet stretch survives at either end; otherwise the
    gaps surround every episode symmetrically (longer lead-in and tail).
    """
    if episodes <= 0:
        return []
    free = n - episodes * episode_len
    if centered_tail:
        gap = free / episodes
        return [int(round(gap / 2.0 + i * (gap + episode_len))) for i in range(episodes)]
    gap = free / (episodes + 1)
    return [int(round(gap * (i + 1) + i * episode_len)) for i in range(episodes)]


def _sfd_levels(cfg: SynthConfig, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    n = cfg.n_sfd
    level = np.full(n, cfg.osnr_normal_mean)
    std = np.full(n, cfg.osnr_normal_std)
    labels = np.zeros(n, dtype=np.int64)

    soft_level = cfg.osnr_normal_mean - cfg.osnr_soft_drop
    dip_level = soft_level - cfg.prefix_overshoot_db

    for start in _episode_starts(n, cfg.sfd_episodes, cfg.episode_len(), centered_tail=False):
        pos = start
        if cfg.warning_prefix:
            ramp = np.linspace(cfg.osnr_normal_mean, dip_level, cfg.prefix_ramp_len, endpoint=False)
            level[pos : pos + cfg.prefix_ramp_len] = ramp
            std[pos : pos + cfg.prefix_ramp_len] = cfg.prefix_dwell_std
            pos += cfg.prefix_ramp_len
            level[pos : pos + cfg.prefix_dwell_len] = dip_level
            std[pos : pos + cfg.prefix_dwell_len] = cfg.prefix_dwell_std
            pos += cfg.prefix_dwell_len
        level[pos : pos + cfg.failure_burst_len] = soft_level
        std[pos : pos + cfg.failure_burst_len] = cfg.plateau_std
        labels[pos : pos + cfg.failure_burst_len] = 1

    osnr = level + std * rng.standard_normal(n)
    return osnr, labels


def _hfd_levels(cfg: SynthConfig, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    n = cfg.n_hfd
    baseline = cfg.osnr_normal_mean - cfg.hfd_baseline_shift
    hard_level = cfg.osnr_normal_mean - cfg.osnr_hard_drop
    level = np.full(n, baseline)
    std = np.full(n, cfg.hfd_baseline_std)
    labels = np.zeros(n, dtype=np.int64)

    for start in _episode_starts(n, cfg.hfd_episodes, cfg.failure_burst_len, centered_tail=True):
        # abrupt onset: no ramp, the drop happens within one sample
        level[start : start + cfg.failure_burst_len] = hard_level
        std[start : start + cfg.failure_burst_len] = cfg.plateau_std
        labels[start : start + cfg.failure_burst_len] = 1

    osnr = level + std * rng.standard_normal(n)
    return osnr, labels


def _build_events(
    osnr_rx: np.ndarray,
    labels: np.ndarray,
    segment: Segment,
    cfg: SynthConfig,
    rng: np.random.Generator,
) -> list[TelemetryEvent]:
    n = len(osnr_rx)
    osnr_rx = np.maximum(osnr_rx, 0.01)
    ber_rx = _waterfall_ber(osnr_rx, cfg, rng)
    osnr_tx = np.maximum(cfg.osnr_tx_mean + cfg.osnr_tx_std * rng.standard_normal(n), 0.01)
    ber_tx = _waterfall_ber(osnr_tx, cfg, rng)
    return [
        TelemetryEvent(
            timestamp=i,
            ber_tx=float(ber_tx[i]),
            osnr_tx=float(osnr_tx[i]),
            ber_rx=float(ber_rx[i]),
            osnr_rx=float(osnr_rx[i]),
            label=Label(int(labels[i])),
            segment=segment,
        )
        for i in range(n)
    ]


def generate_synthetic_segments(
    cfg: SynthConfig, seed: SeedLike = None
) -> tuple[list[TelemetryEvent], list[TelemetryEvent]]:
    """Generate the two segments separately (timestamps local to each)."""
    cfg.validate()
    rng = _rng(seed)
    osnr_sfd, labels_sfd = _sfd_levels(cfg, rng)
    sfd = _build_events(osnr_sfd, labels_sfd, Segment.SFD, cfg, rng)
    if cfg.n_hfd == 0:
        return sfd, []
    osnr_hfd, labels_hfd = _hfd_levels(cfg, rng)
    hfd = _build_events(osnr_hfd, labels_hfd, Segment.HFD, cfg, rng)
    return sfd, hfd


def generate_synthetic(cfg: SynthConfig, seed: SeedLike = None) -> list[TelemetryEvent]:
    """Generate the full drifting stream (soft segment then hard segment).

    Deterministic under a fixed seed; identical (cfg, seed) pairs produce
    bit-identical streams.
    """
    sfd, hfd = generate_synthetic_segments(cfg, seed)
    if not hfd:
        return sfd
    return merge_sfd_hfd(sfd, hfd)
