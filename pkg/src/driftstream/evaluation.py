"""Prequential (test-then-train) evaluation of static vs online models.

Both arms are pretrained identically on the soft-failure segment; the
hard-failure segment is then streamed event by event. The static arm only
predicts; the online arm predicts first and learns from the revealed label
afterwards, so every recorded online score is a pre-update score. Rolling
accuracy and rolling AUC are tracked over a sliding window for both arms.
"""

from __future__ import annotations

import csv
import json
import statistics
import time
from collections import deque
from copy import deepcopy
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ClockUnavailable, EmptyWindow, PrequentialAbort
from .telemetry import TelemetryEvent, to_features

DEFAULT_WINDOW = 500
SCORE_THRESHOLD = 0.5


# -- windowed metrics --------------------------------------------------------


def rolling_accuracy(buffer: Sequence[tuple[int, int, float]]) -> float:
    """Fraction of (true, predicted, score) records with predicted == true."""
    if len(buffer) == 0:
        raise EmptyWindow()
    correct = sum(1 for y, pred, _ in buffer if y == pred)
    return correct / len(buffer)


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties replaced by the group average."""
    order = np.argsort(values, kind="mergesort")
    sorted_values = values[order]
    boundaries = np.flatnonzero(np.r_[True, sorted_values[1:] != sorted_values[:-1], True])
    counts = np.diff(boundaries)
    # group occupying sorted slots [b, b+c) gets average rank (b+1 + b+c)/2
    group_ranks = (boundaries[:-1] + 1 + boundaries[1:]) / 2.0
    ranks = np.empty(len(values))
    ranks[order] = np.repeat(group_ranks, counts)
    return ranks


def rolling_auc_flagged(buffer: Sequence[tuple[int, int, float]]) -> tuple[float, bool]:
    """Mann-Whitney AUC over the window: P(score+ > score-) + 0.5 P(tie).

    A single-class window cannot express discrimination; it reports 0.5 with
    the degenerate flag set.
    """
    if len(buffer) == 0:
        raise EmptyWindow()
    labels = np.fromiter((y for y, _, _ in buffer), dtype=np.int64, count=len(buffer))
    n_pos = int(labels.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        return 0.5, True
    scores = np.fromiter((s for _, _, s in buffer), dtype=np.float64, count=len(buffer))
    ranks = _average_ranks(scores)
    rank_sum_pos = float(ranks[labels == 1].sum())
    auc = (rank_sum_pos - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)
    return auc, False


def rolling_auc(buffer: Sequence[tuple[int, int, float]]) -> float:
    return rolling_auc_flagged(buffer)[0]


class RollingMetrics:
    """Sliding-window accuracy and AUC over (label, prediction, score)."""

    def __init__(self, window: int = DEFAULT_WINDOW):
        if window < 1:
            raise ValueError("window must be >= 1")
        self.window = window
        self._buffer: deque[tuple[int, int, float]] = deque(maxlen=window)
        self._correct = 0

    def update(self, y_true: int, score: float) -> tuple[float, float, bool]:
        """Add one scored sample; returns (accuracy, auc, auc_degenerate)."""
        pred = 1 if score >= SCORE_THRESHOLD else 0
        if len(self._buffer) == self._buffer.maxlen:
            old_y, old_pred, _ = self._buffer[0]
            if old_y == old_pred:
                self._correct -= 1
        self._buffer.append((y_true, pred, score))
        if y_true == pred:
            self._correct += 1
        accuracy = self._correct / len(self._buffer)
        auc, degenerate = rolling_auc_flagged(self._buffer)
        return accuracy, auc, degenerate

    @property
    def buffer(self) -> tuple[tuple[int, int, float], ...]:
        return tuple(self._buffer)


# -- prequential harness ------------------------------------------------------


@dataclass
class ArmSeries:
    """Per-event record of one arm over the streamed segment."""

    scores: list[float] = field(default_factory=list)
    predictions: list[int] = field(default_factory=list)
    accuracy: list[float] = field(default_factory=list)
    auc: list[float] = field(default_factory=list)
    auc_degenerate: list[bool] = field(default_factory=list)
    latency_ms: list[float] = field(default_factory=list)
    sfd_end_accuracy: float = float("nan")


@dataclass
class ExperimentReport:
    """Everything one prequential run produced, for export and audit."""

    window: int
    event_indices: list[int]
    labels: list[int]
    segments: list[str]
    arms: dict[str, ArmSeries]
    drift_events: Optional[list] = None
    summary: dict = field(default_factory=dict)
    metric_mode: str = "sliding"


def _pretrain(model, events: Sequence[TelemetryEvent], order: np.ndarray, epochs: int) -> None:
    for _ in range(epochs):
        for idx in order:
            event = events[int(idx)]
            model.learn_one(to_features(event), int(event.label))


def _tail_accuracy(model, events: Sequence[TelemetryEvent], window: int) -> float:
    tail = events[-window:]
    correct = 0
    for event in tail:
        pred = 1 if model.score_one(to_features(event)) >= SCORE_THRESHOLD else 0
        correct += pred == int(event.label)
    return correct / len(tail)


def prequential_run(
    static_model,
    online_model,
    pretrain: Sequence[TelemetryEvent],
    stream: Sequence[TelemetryEvent],
    window: int = DEFAULT_WINDOW,
    *,
    shuffle_seed: Union[int, np.random.SeedSequence, None] = None,
    epochs: int = 1,
    drift_events: Optional[list] = None,
    metric_mode: str = "sliding",
) -> ExperimentReport:
    """Pretrain both arms on ``pretrain``, then stream ``stream``.

    Per stream event, in order: the static model scores, the online model
    scores, and only then the online model learns from the true label. The
    static model is never updated after pretraining. Both arms see the
    identical event sequence. Model exceptions abort with the failing index.
    """
    if metric_mode not in ("sliding", "block"):
        raise ValueError("metric_mode must be 'sliding' or 'block'")
    if len(pretrain) > 0:
        order = np.random.default_rng(shuffle_seed).permutation(len(pretrain))
        _pretrain(static_model, pretrain, order, epochs)
        _pretrain(online_model, pretrain, order, epochs)

    arms = {"static": ArmSeries(), "online": ArmSeries()}
    if len(pretrain) > 0:
        arms["static"].sfd_end_accuracy = _tail_accuracy(static_model, pretrain, window)
        arms["online"].sfd_end_accuracy = _tail_accuracy(online_model, pretrain, window)

    metrics = {"static": RollingMetrics(window), "online": RollingMetrics(window)}
    event_indices: list[int] = []
    labels: list[int] = []
    segments: list[str] = []
    clock = time.perf_counter_ns

    for i, event in enumerate(stream):
        x = to_features(event)
        y = int(event.label)
        try:
            t0 = clock()
            s_static = static_model.score_one(x)
            t1 = clock()
            s_online = online_model.score_one(x)
            online_model.learn_one(x, y)
            t2 = clock()
        except Exception as err:  # propagate with the failing stream position
            raise PrequentialAbort(i, err) from err

        labels.append(y)
        segments.append(event.segment.value)
        emit = metric_mode == "sliding" or (i + 1) % window == 0
        for name, score, elapsed in (
            ("static", s_static, (t1 - t0) / 1e6),
            ("online", s_online, (t2 - t1) / 1e6),
        ):
            arm = arms[name]
            accuracy, auc, degenerate = metrics[name].update(y, score)
            arm.scores.append(score)
            arm.predictions.append(1 if score >= SCORE_THRESHOLD else 0)
            arm.latency_ms.append(elapsed)
            if emit:
                arm.accuracy.append(accuracy)
                arm.auc.append(auc)
                arm.auc_degenerate.append(degenerate)
        if emit:
            event_indices.append(i)

    report = ExperimentReport(
        window=window,
        event_indices=event_indices,
        labels=labels,
        segments=segments,
        arms=arms,
        drift_events=drift_events,
        metric_mode=metric_mode,
    )
    report.summary = _summarize(report)
    return report


def _summarize(report: ExperimentReport) -> dict:
    static = report.arms["static"]
    online = report.arms["online"]
    summary: dict = {
        "window": report.window,
        "stream_length": len(report.labels),
        "arms": {},
    }
    for name, arm in report.arms.items():
        summary["arms"][name] = {
            "sfd_end_accuracy": arm.sfd_end_accuracy,
            "final_rolling_accuracy": arm.accuracy[-1] if arm.accuracy else None,
            "final_rolling_auc": arm.auc[-1] if arm.auc else None,
        }
    gaps = [b - a for a, b in zip(static.accuracy, online.accuracy)]
    summary["max_accuracy_gap_points"] = max(gaps) if gaps else None
    rel = [
        (b - a) / a
        for a, b in zip(static.accuracy, online.accuracy)
        if a > 0.0
    ]
    summary["max_accuracy_gap_relative"] = max(rel) if rel else None
    # medians over the retained raw per-event samples (kept for audit)
    summary["median_latency_ms"] = {
        name: (statistics.median(arm.latency_ms) if arm.latency_ms else None)
        for name, arm in report.arms.items()
    }
    return summary


# -- report export -------------------------------------------------------------

METRIC_COLUMNS = ("event_index", "arm", "rolling_accuracy", "rolling_auc", "auc_degenerate")


def _metric_rows(report: ExperimentReport):
    for pos, event_index in enumerate(report.event_indices):
        for name in ("static", "online"):
            arm = report.arms[name]
            yield (
                event_index,
                name,
                arm.accuracy[pos],
                arm.auc[pos],
                int(arm.auc_degenerate[pos]),
            )


def export_report(report: ExperimentReport, path: str, fmt: str = "csv") -> str:
    """Write the windowed metric series; repeated exports are byte-identical."""
    if fmt == "csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(METRIC_COLUMNS)
            for row in _metric_rows(report):
                writer.writerow([row[0], row[1], repr(row[2]), repr(row[3]), row[4]])
    elif fmt == "json":
        series = [
            {
                "event_index": row[0],
                "arm": row[1],
                "rolling_accuracy": row[2],
                "rolling_auc": row[3],
                "auc_degenerate": row[4],
            }
            for row in _metric_rows(report)
        ]
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({"window": report.window, "series": series}, fh)
    else:
        raise ValueError(f"unknown format: {fmt}")
    return path


def load_metrics(path: str, fmt: str = "csv") -> list[dict]:
    """Re-import an exported metric series (values parsed back to floats)."""
    if fmt == "csv":
        with open(path, newline="", encoding="utf-8") as fh:
            rows = []
            for row in csv.DictReader(fh):
                rows.append(
                    {
                        "event_index": int(row["event_index"]),
                        "arm": row["arm"],
                        "rolling_accuracy": float(row["rolling_accuracy"]),
                        "rolling_auc": float(row["rolling_auc"]),
                        "auc_degenerate": int(row["auc_degenerate"]),
                    }
                )
            return rows
    if fmt == "json":
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)["series"]
    raise ValueError(f"unknown format: {fmt}")


# -- latency benchmark ----------------------------------------------------------


@dataclass
class LatencyReport:
    """Median per-event latency per model, static vs online, plus raw samples.

    The reported value per (model, mode) is the median over trial medians;
    one trial is a full pass over the fixed sample stream. Raw per-event
    samples (ms) are retained so every number can be recomputed.
    """

    trials: int
    events_per_trial: int
    medians: dict[str, dict[str, float]]
    raw_ms: dict[str, dict[str, list[list[float]]]]


def latency_benchmark(
    models: dict[str, object],
    sample_stream: Sequence[TelemetryEvent],
    trials: int = 100,
    *,
    warmup_trials: int = 1,
) -> LatencyReport:
    """Time predict-only and predict+update per event for each model.

    Each model must already be pretrained; it is deep-copied per mode so the
    static copy stays frozen while the online copy keeps learning across
    trials. Warm-up trials run first and are discarded.
    """
    if not time.get_clock_info("perf_counter").monotonic:
        raise ClockUnavailable()
    if len(sample_stream) == 0:
        raise EmptyWindow()
    samples = [(to_features(e), int(e.label)) for e in sample_stream]
    clock = time.perf_counter_ns

    medians: dict[str, dict[str, float]] = {}
    raw_ms: dict[str, dict[str, list[list[float]]]] = {}
    for name, model in models.items():
        raw_ms[name] = {"static": [], "online": []}
        static_copy = deepcopy(model)
        online_copy = deepcopy(model)
        for mode, subject in (("static", static_copy), ("online", online_copy)):
            online = mode == "online"
            trial_medians = []
            for trial in range(warmup_trials + trials):
                ticks = []
                for x, y in samples:
                    t0 = clock()
                    score = subject.score_one(x)
                    if online:
                        subject.learn_one(x, y)
                    t1 = clock()
                    ticks.append((t1 - t0) / 1e6)
                if trial < warmup_trials:
                    continue
                raw_ms[name][mode].append(ticks)
                trial_medians.append(statistics.median(ticks))
            medians.setdefault(name, {})[f"{mode}_ms"] = statistics.median(trial_medians)
        medians[name]["overhead_ms"] = medians[name]["online_ms"] - medians[name]["static_ms"]
    return LatencyReport(
        trials=trials,
        events_per_trial=len(samples),
        medians=medians,
        raw_ms=raw_ms,
    )


def write_latency_table(report: LatencyReport, path: str) -> None:
    """Latency table with 4-significant-digit milliseconds."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model", "static_ms", "online_ms", "overhead_ms"])
        for model, row in report.medians.items():
            writer.writerow(
                [
                    model,
                    format(row["static_ms"], ".4g"),
                    format(row["online_ms"], ".4g"),
                    format(row["overhead_ms"], ".4g"),
                ]
            )


def write_latency_raw(report: LatencyReport, path: str) -> None:
    """Full-precision per-event dump: one row per timed event."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model", "mode", "trial", "event_index", "latency_ms"])
        for model, modes in report.raw_ms.items():
            for mode, trials in modes.items():
                for trial, ticks in enumerate(trials):
                    for event_index, ms in enumerate(ticks):
                        writer.writerow([model, mode, trial, event_index, repr(ms)])
