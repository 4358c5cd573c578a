"""Pairwise majority aggregation and Condorcet-cycle search.

Majority counts treat each metric ranking as one vote per ordered model pair.
The cycle search uses a separate tolerance/abstention voting regime on raw
oriented scores: a metric only votes on a pair when the score gap exceeds the
tolerance, and a model beats another only with strictly more votes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from . import kernels
from .core import Profile, ScoreTable, complete_models, model_index, position_matrix
from .errors import BenchvoteError, TooFewMetrics


class RelationMode(str, Enum):
    WEAK = "weak"
    STRICT = "strict"


class Vote(Enum):
    PREFER_FIRST = 1
    PREFER_SECOND = -1
    ABSTAIN = 0


@dataclass(frozen=True)
class MajorityCounts:
    """count(a, b) = number of profile rankings placing a strictly above b."""

    models: tuple[str, ...]
    matrix: np.ndarray
    n_rankings: int

    def count(self, a: str, b: str) -> int:
        if a == b:
            raise BenchvoteError("majority count is undefined on the diagonal")
        idx = model_index(self.models)
        return int(self.matrix[idx[a], idx[b]])


@dataclass(frozen=True)
class MajorityRelation:
    """Boolean pairwise relation; weak mode is reflexive, strict irreflexive."""

    models: tuple[str, ...]
    mode: RelationMode
    matrix: np.ndarray

    def holds(self, a: str, b: str) -> bool:
        idx = model_index(self.models)
        return bool(self.matrix[idx[a], idx[b]])


@dataclass(frozen=True)
class CycleWitness:
    """A 3-cycle: cycle[0] beats cycle[1] beats cycle[2] beats cycle[0].

    The cycle is rotated so its lexicographically smallest model comes first.
    The buffer is the minimum, over the three wins, of the smallest oriented
    score gap among the metrics supporting that win.
    """

    dataset: str
    metric_triple: tuple[str, str, str]
    cycle: tuple[str, str, str]
    buffer: float


@dataclass(frozen=True)
class CycleSearchResult:
    witnesses: tuple[CycleWitness, ...]
    most_robust: CycleWitness | None

    def __bool__(self) -> bool:
        return bool(self.witnesses)


def majority_counts(profile: Profile) -> MajorityCounts:
    order = profile.model_order()
    pos = position_matrix(profile.rankings, order)
    return MajorityCounts(
        models=order,
        matrix=kernels.pairwise_above_counts(pos),
        n_rankings=profile.n_rankings,
    )


def majority_relation(counts: MajorityCounts, mode: RelationMode) -> MajorityRelation:
    m = counts.matrix
    if mode is RelationMode.WEAK:
        holds = m >= m.T
        np.fill_diagonal(holds, True)
    else:
        holds = m > m.T
        np.fill_diagonal(holds, False)
    return MajorityRelation(models=counts.models, mode=mode, matrix=holds)


def is_transitive(rel: MajorityRelation) -> tuple[bool, tuple[str, str, str] | None]:
    """Check transitivity; on failure return the first violating triple.

    Existence is decided by boolean composition of the relation matrix; the
    witness (scanned in sorted-model order) is only sought when it fails.
    """
    h = rel.matrix
    k = len(rel.models)
    reach2 = (h.astype(np.int64) @ h.astype(np.int64)) > 0
    off_diag = ~np.eye(k, dtype=bool)
    if not (reach2 & ~h & off_diag).any():
        return True, None
    for a, b, c in itertools.permutations(range(k), 3):
        if h[a, b] and h[b, c] and not h[a, c]:
            return False, (rel.models[a], rel.models[b], rel.models[c])
    raise AssertionError("matrix check found a violation but the scan did not")


def is_complete(rel: MajorityRelation) -> tuple[bool, tuple[str, str] | None]:
    """Check completeness; on failure return the first incomparable pair."""
    h = rel.matrix
    k = len(rel.models)
    for a in range(k):
        for b in range(a + 1, k):
            if not (h[a, b] or h[b, a]):
                return False, (rel.models[a], rel.models[b])
    return True, None


def tolerant_vote(
    table: ScoreTable, dataset: str, metric: str, first: str, second: str, tol: float
) -> Vote:
    """One metric's vote on a model pair; gaps within ±tol abstain."""
    if tol < 0:
        raise BenchvoteError("tolerance must be non-negative")
    gap = table.oriented(dataset, first, metric) - table.oriented(dataset, second, metric)
    if gap > tol:
        return Vote.PREFER_FIRST
    if gap < -tol:
        return Vote.PREFER_SECOND
    return Vote.ABSTAIN


def find_cycles(
    table: ScoreTable,
    dataset: str,
    metric_pool: Sequence[str],
    tol: float = 1e-9,
) -> CycleSearchResult:
    """Search all metric triples from the pool for 3-model majority cycles.

    Within each triple the model set is restricted to models with complete
    observations. A beats B iff strictly more of the triple's metrics vote for
    A than for B under tolerance voting (abstaining metrics count for neither
    side). Witnesses are reported in sorted order; most_robust maximizes the
    buffer.
    """
    if len(metric_pool) < 3:
        raise TooFewMetrics("cycle search needs a pool of at least 3 metrics")
    if tol < 0:
        raise BenchvoteError("tolerance must be non-negative")

    witnesses: list[CycleWitness] = []
    for triple in itertools.combinations(metric_pool, 3):
        models = complete_models(table, dataset, triple)
        k = len(models)
        if k < 3:
            continue
        scores = np.array(
            [[table.oriented(dataset, m, metric) for metric in triple] for m in models]
        )
        # beats[a, b] and the smallest gap among metrics supporting that win
        beats = np.zeros((k, k), dtype=bool)
        min_gap = np.full((k, k), np.inf)
        for a in range(k):
            for b in range(k):
                if a == b:
                    continue
                gaps = scores[a] - scores[b]
                for_a = gaps > tol
                if int(for_a.sum()) > int((gaps < -tol).sum()):
                    beats[a, b] = True
                    min_gap[a, b] = float(gaps[for_a].min())
        for x, y, z in itertools.combinations(range(k), 3):
            cycle = None
            if beats[x, y] and beats[y, z] and beats[z, x]:
                cycle = (x, y, z)
            elif beats[x, z] and beats[z, y] and beats[y, x]:
                cycle = (x, z, y)
            if cycle is None:
                continue
            a, b, c = cycle
            buffer = min(min_gap[a, b], min_gap[b, c], min_gap[c, a])
            witnesses.append(
                CycleWitness(
                    dataset=dataset,
                    metric_triple=triple,
                    cycle=(models[a], models[b], models[c]),
                    buffer=float(buffer),
                )
            )

    witnesses.sort(key=lambda w: (w.metric_triple, w.cycle))
    most_robust = max(witnesses, key=lambda w: w.buffer) if witnesses else None
    return CycleSearchResult(witnesses=tuple(witnesses), most_robust=most_robust)
