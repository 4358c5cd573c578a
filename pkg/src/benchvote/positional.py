"""Positional scoring and the ranking-instability (flip) experiment.

Average rank aggregates a profile by mean 1-based position; the flip
experiment re-aggregates after adding one model and reports every base pair
whose relative order reversed, which is exactly the failure mode majority
aggregation rules out.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import (
    Profile,
    ScoreTable,
    StrictRanking,
    TieBreak,
    break_ties,
    build_profile,
    induce_weak_ranking,
    position_matrix,
)
from .errors import AddedModelInBase, BenchvoteError, TooFewModels


@dataclass(frozen=True)
class RankSummary:
    """Average 1-based rank per model and the induced order.

    The order sorts by ascending average rank; exact ties are broken by the
    tie-break rule on model identifiers.
    """

    avg_rank: dict[str, float]
    order: StrictRanking


@dataclass(frozen=True)
class FlipReport:
    dataset: str
    base_models: tuple[str, ...]
    added_model: str
    before: RankSummary
    after: RankSummary
    flips: tuple[tuple[str, str], ...]

    @property
    def flipped(self) -> bool:
        return bool(self.flips)


def average_rank(profile: Profile, rule: TieBreak = TieBreak.ALPHA_ASC) -> RankSummary:
    order = profile.model_order()
    pos = position_matrix(profile.rankings, order)
    avg = (pos + 1).mean(axis=0)
    avg_rank = {m: float(avg[i]) for i, m in enumerate(order)}
    ranked = sorted(order, reverse=rule is TieBreak.ALPHA_DESC)
    ranked.sort(key=lambda m: avg_rank[m])
    return RankSummary(avg_rank=avg_rank, order=StrictRanking(tuple(ranked)))


def winning_rate(
    table: ScoreTable,
    metric: str,
    models: Sequence[str],
    datasets: Sequence[str],
) -> dict[str, float]:
    """Fraction of (dataset, opponent) contests a model strictly wins.

    The denominator is |datasets| * (k - 1); score ties count for neither
    side. Every model must be scored on the metric in every listed dataset.
    """
    model_list = sorted(set(models))
    dataset_list = list(datasets)
    k = len(model_list)
    if k < 2:
        raise TooFewModels("winning rate needs at least 2 models")
    if not dataset_list:
        raise BenchvoteError("winning rate needs at least 1 dataset")
    wins = {m: 0 for m in model_list}
    for dataset in dataset_list:
        scores = {m: table.oriented(dataset, m, metric) for m in model_list}
        for i, a in enumerate(model_list):
            for b in model_list[i + 1 :]:
                if scores[a] > scores[b]:
                    wins[a] += 1
                elif scores[b] > scores[a]:
                    wins[b] += 1
    denom = len(dataset_list) * (k - 1)
    return {m: wins[m] / denom for m in model_list}


def flip_experiment(
    table: ScoreTable,
    dataset: str,
    metrics: Sequence[str],
    base_models: Iterable[str],
    added_model: str,
    rule: TieBreak = TieBreak.ALPHA_ASC,
) -> FlipReport:
    """Report base-model pairs whose average-rank order reverses when one
    model is added to the comparison."""
    base = tuple(sorted(set(base_models)))
    if added_model in base:
        raise AddedModelInBase(f"added model {added_model!r} is already in the base set")
    before = average_rank(build_profile(table, dataset, metrics, base, rule), rule)
    extended = tuple(sorted(base + (added_model,)))
    after = average_rank(build_profile(table, dataset, metrics, extended, rule), rule)

    pos_before = before.order.positions()
    pos_after = after.order.positions()
    flips: list[tuple[str, str]] = []
    for i, a in enumerate(base):
        for b in base[i + 1 :]:
            if (pos_before[a] < pos_before[b]) != (pos_after[a] < pos_after[b]):
                # Each flip is (previously better, previously worse).
                flips.append((a, b) if pos_before[a] < pos_before[b] else (b, a))
    flips.sort(key=lambda p: (pos_before[p[0]], pos_before[p[1]]))
    return FlipReport(
        dataset=dataset,
        base_models=base,
        added_model=added_model,
        before=before,
        after=after,
        flips=tuple(flips),
    )


def top_k_by_metric(
    table: ScoreTable,
    dataset: str,
    metric: str,
    k: int,
    rule: TieBreak = TieBreak.ALPHA_ASC,
) -> tuple[str, ...]:
    """The k best models on one metric, in ranked order.

    Only models scored on the metric participate; ties are broken by the
    tie-break rule.
    """
    if k < 1:
        raise BenchvoteError("top-k needs k >= 1")
    scored = tuple(m for m in table.models if table.has(dataset, m, metric))
    if len(scored) < k:
        raise TooFewModels(
            f"dataset {dataset!r} has {len(scored)} models scored on {metric!r}, need {k}"
        )
    weak = induce_weak_ranking(table, dataset, metric, scored)
    strict = break_ties(weak, rule)
    return strict.sequence[:k]
