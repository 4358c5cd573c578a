"""Score tables and metric-induced rankings.

Scores are stored *oriented*: lower-is-better metrics are negated at
construction so every downstream comparison reads "larger is better". Values
may be any finite real; missing scores are absent keys, never sentinels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    BenchvoteError,
    EmptyMetricList,
    MissingScore,
    ModelSetMismatch,
    UnknownMetric,
)


class Orientation(str, Enum):
    HIGHER_IS_BETTER = "higher"
    LOWER_IS_BETTER = "lower"


class TieBreak(str, Enum):
    """Deterministic refinement of score ties using model identifiers."""

    ALPHA_ASC = "asc"
    ALPHA_DESC = "desc"


@dataclass(frozen=True)
class MetricSpec:
    name: str
    orientation: Orientation = Orientation.HIGHER_IS_BETTER

    def __post_init__(self):
        if not self.name:
            raise BenchvoteError("metric name must be non-empty")

    def orient(self, raw: float) -> float:
        return -raw if self.orientation is Orientation.LOWER_IS_BETTER else raw


class ScoreTable:
    """Immutable (dataset, model, metric) -> oriented score mapping.

    Orientation is applied exactly once here; ``oriented()`` values therefore
    compare uniformly with ``>`` meaning "better".
    """

    def __init__(
        self,
        records: Iterable[tuple[str, str, str, float]],
        metrics: Sequence[MetricSpec],
    ):
        if len({m.name for m in metrics}) != len(metrics):
            raise BenchvoteError("duplicate metric names in metric list")
        self.metrics: tuple[MetricSpec, ...] = tuple(metrics)
        self._by_name: dict[str, MetricSpec] = {m.name: m for m in self.metrics}
        values: dict[tuple[str, str, str], float] = {}
        datasets: set[str] = set()
        models: set[str] = set()
        for dataset, model, metric, raw in records:
            spec = self._by_name.get(metric)
            if spec is None:
                raise UnknownMetric(f"metric {metric!r} not declared")
            if not math.isfinite(raw):
                raise BenchvoteError(f"non-finite score for {(dataset, model, metric)}")
            key = (dataset, model, metric)
            if key in values:
                raise BenchvoteError(f"duplicate score record for {key}")
            values[key] = spec.orient(float(raw))
            datasets.add(dataset)
            models.add(model)
        self._values = values
        self.datasets: tuple[str, ...] = tuple(sorted(datasets))
        self.models: tuple[str, ...] = tuple(sorted(models))

    def metric_spec(self, name: str) -> MetricSpec:
        spec = self._by_name.get(name)
        if spec is None:
            raise UnknownMetric(f"metric {name!r} not declared")
        return spec

    def has(self, dataset: str, model: str, metric: str) -> bool:
        return (dataset, model, metric) in self._values

    def oriented(self, dataset: str, model: str, metric: str) -> float:
        try:
            return self._values[(dataset, model, metric)]
        except KeyError:
            raise MissingScore(dataset, model, metric) from None

    def __len__(self) -> int:
        return len(self._values)


@dataclass(frozen=True)
class WeakRanking:
    """Total preorder: rank_class maps each model to its class index (0 = best)."""

    models: tuple[str, ...]
    rank_class: Mapping[str, int]

    def __post_init__(self):
        classes = sorted(set(self.rank_class.values()))
        if classes != list(range(len(classes))):
            raise BenchvoteError("rank-class indices must be contiguous from 0")
        if set(self.rank_class) != set(self.models):
            raise BenchvoteError("rank_class keys must equal the model set")

    def classes(self) -> list[list[str]]:
        """Rank classes best-first, models sorted within each class."""
        n_classes = max(self.rank_class.values()) + 1 if self.rank_class else 0
        out: list[list[str]] = [[] for _ in range(n_classes)]
        for model in sorted(self.models):
            out[self.rank_class[model]].append(model)
        return out


@dataclass(frozen=True)
class StrictRanking:
    """A strict linear order; sequence[0] is the most preferred model."""

    sequence: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.sequence)) != len(self.sequence):
            raise BenchvoteError("ranking sequence contains duplicates")

    @property
    def models(self) -> frozenset[str]:
        return frozenset(self.sequence)

    def positions(self) -> dict[str, int]:
        return {model: i for i, model in enumerate(self.sequence)}

    def above(self, a: str, b: str) -> bool:
        pos = self.positions()
        return pos[a] < pos[b]

    def __len__(self) -> int:
        return len(self.sequence)


@dataclass(frozen=True)
class Profile:
    """One strict ranking per metric, all over the same model set."""

    dataset: str
    metric_names: tuple[str, ...]
    rankings: tuple[StrictRanking, ...]

    def __post_init__(self):
        if not self.rankings:
            raise EmptyMetricList("a profile needs at least one ranking")
        if len(self.rankings) != len(self.metric_names):
            raise BenchvoteError("one ranking per metric required")
        base = self.rankings[0].models
        for r in self.rankings[1:]:
            if r.models != base:
                raise ModelSetMismatch("profile rankings must share one model set")

    @property
    def models(self) -> frozenset[str]:
        return self.rankings[0].models

    @property
    def n_rankings(self) -> int:
        return len(self.rankings)

    def model_order(self) -> tuple[str, ...]:
        return tuple(sorted(self.models))


def model_index(models: Sequence[str]) -> dict[str, int]:
    return {m: i for i, m in enumerate(models)}


def sequence_matrix(rankings: Sequence[StrictRanking], model_order: Sequence[str]) -> np.ndarray:
    """seq[r, t] = index (within model_order) of the model at rank t."""
    idx = model_index(model_order)
    return np.array([[idx[m] for m in r.sequence] for r in rankings], dtype=np.int64)


def position_matrix(rankings: Sequence[StrictRanking], model_order: Sequence[str]) -> np.ndarray:
    """pos[r, j] = rank of model_order[j] in ranking r."""
    seq = sequence_matrix(rankings, model_order)
    pos = np.empty_like(seq)
    n, k = seq.shape
    rows = np.repeat(np.arange(n), k)
    pos[rows, seq.ravel()] = np.tile(np.arange(k), n)
    return pos


def induce_weak_ranking(
    table: ScoreTable, dataset: str, metric: str, models: Sequence[str]
) -> WeakRanking:
    """Rank `models` by oriented score on (dataset, metric); equal scores tie."""
    scores = {m: table.oriented(dataset, m, metric) for m in models}
    distinct = sorted(set(scores.values()), reverse=True)
    level = {v: i for i, v in enumerate(distinct)}
    return WeakRanking(
        models=tuple(sorted(models)),
        rank_class={m: level[s] for m, s in scores.items()},
    )


def break_ties(weak: WeakRanking, rule: TieBreak = TieBreak.ALPHA_ASC) -> StrictRanking:
    """Refine a weak ranking into a strict one; ties ordered by identifier."""
    reverse = rule is TieBreak.ALPHA_DESC
    sequence: list[str] = []
    for cls in weak.classes():
        sequence.extend(sorted(cls, reverse=reverse))
    return StrictRanking(sequence=tuple(sequence))


def build_profile(
    table: ScoreTable,
    dataset: str,
    metrics: Sequence[str],
    models: Sequence[str],
    rule: TieBreak = TieBreak.ALPHA_ASC,
) -> Profile:
    if not metrics:
        raise EmptyMetricList("build_profile needs at least one metric")
    rankings = tuple(
        break_ties(induce_weak_ranking(table, dataset, metric, models), rule)
        for metric in metrics
    )
    return Profile(dataset=dataset, metric_names=tuple(metrics), rankings=rankings)


def complete_models(table: ScoreTable, dataset: str, metrics: Sequence[str]) -> tuple[str, ...]:
    """Models scored on every listed metric for the dataset, lexicographic."""
    return tuple(
        m for m in table.models if all(table.has(dataset, m, metric) for metric in metrics)
    )
