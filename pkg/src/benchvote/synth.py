"""Seeded generators for structured ranking profiles and score tables.

These produce profiles that lie in the restricted domains by construction:
single-peaked profiles are grown outward from a peak on a hidden axis,
group-separable profiles realize a random separation hierarchy, and degree-1
profiles deviate from a base ranking by at most one fixed adjacent swap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    MetricSpec,
    Orientation,
    Profile,
    ScoreTable,
    StrictRanking,
)
from .domains import Axis
from .errors import BenchvoteError


def default_models(k: int) -> tuple[str, ...]:
    if k > 26:
        raise BenchvoteError("default model pool is limited to 26 names")
    return tuple(f"m{chr(ord('a') + i)}" for i in range(k))


def _metric_names(n: int) -> tuple[str, ...]:
    return tuple(f"metric{i:02d}" for i in range(n))


def _profile(dataset: str, rankings: list[StrictRanking]) -> Profile:
    return Profile(
        dataset=dataset,
        metric_names=_metric_names(len(rankings)),
        rankings=tuple(rankings),
    )


def random_ranking(rng: np.random.Generator, models: tuple[str, ...]) -> StrictRanking:
    perm = rng.permutation(len(models))
    return StrictRanking(tuple(models[i] for i in perm))


def random_profile(
    rng: np.random.Generator, models: tuple[str, ...], n: int, dataset: str = "synthetic"
) -> Profile:
    return _profile(dataset, [random_ranking(rng, models) for _ in range(n)])


def single_peaked_profile(
    rng: np.random.Generator, models: tuple[str, ...], n: int, dataset: str = "synthetic"
) -> tuple[Profile, Axis]:
    """A profile single-peaked on a hidden random axis, plus that axis.

    Each ranking picks a peak and repeatedly appends the better of the two
    models adjacent to the already-taken axis interval, so every prefix stays
    contiguous on the axis.
    """
    k = len(models)
    axis_perm = rng.permutation(k)
    axis = tuple(models[i] for i in axis_perm)
    rankings: list[StrictRanking] = []
    for _ in range(n):
        peak = int(rng.integers(k))
        seq = [axis[peak]]
        left, right = peak - 1, peak + 1
        while left >= 0 or right < k:
            if left < 0:
                take_right = True
            elif right >= k:
                take_right = False
            else:
                take_right = bool(rng.integers(2))
            if take_right:
                seq.append(axis[right])
                right += 1
            else:
                seq.append(axis[left])
                left -= 1
        rankings.append(StrictRanking(tuple(seq)))
    return _profile(dataset, rankings), Axis.of(axis)


@dataclass(frozen=True)
class _HierarchyNode:
    members: tuple[str, ...]
    children: tuple["_HierarchyNode", ...]


def _random_hierarchy(
    rng: np.random.Generator, members: tuple[str, ...]
) -> _HierarchyNode:
    if len(members) == 1:
        return _HierarchyNode(members=members, children=())
    # Any nonempty proper subset works; draw a split point over a shuffle.
    shuffled = [members[i] for i in rng.permutation(len(members))]
    cut = int(rng.integers(1, len(members)))
    left = tuple(shuffled[:cut])
    right = tuple(shuffled[cut:])
    return _HierarchyNode(
        members=members,
        children=(_random_hierarchy(rng, left), _random_hierarchy(rng, right)),
    )


def _realize(rng: np.random.Generator, node: _HierarchyNode) -> list[str]:
    if not node.children:
        return list(node.members)
    first, second = node.children
    if rng.integers(2):
        first, second = second, first
    return _realize(rng, first) + _realize(rng, second)


def group_separable_profile(
    rng: np.random.Generator, models: tuple[str, ...], n: int, dataset: str = "synthetic"
) -> Profile:
    """A profile realizing one random separation hierarchy.

    Every ranking orders each node's two blocks one way or the other but never
    interleaves them, so each node's left block separates its member set in
    every ranking.
    """
    root = _random_hierarchy(rng, models)
    rankings = [
        StrictRanking(tuple(_realize(rng, root))) for _ in range(n)
    ]
    return _profile(dataset, rankings)


def degree_one_profile(
    rng: np.random.Generator, models: tuple[str, ...], n: int, dataset: str = "synthetic"
) -> Profile:
    """A profile whose rankings are a base order or one fixed adjacent swap."""
    base = random_ranking(rng, models).sequence
    cut = int(rng.integers(len(models) - 1))
    swapped = list(base)
    swapped[cut], swapped[cut + 1] = swapped[cut + 1], swapped[cut]
    variants = (StrictRanking(base), StrictRanking(tuple(swapped)))
    return _profile(dataset, [variants[int(rng.integers(2))] for _ in range(n)])


def table_from_profile(profile: Profile) -> ScoreTable:
    """A score table whose induced metric rankings reproduce the profile.

    The model at 1-based position p on a metric scores k - p + 1, so scores
    are distinct and higher-is-better ordering recovers each ranking.
    """
    k = len(profile.models)
    records = []
    for metric, ranking in zip(profile.metric_names, profile.rankings):
        for p, model in enumerate(ranking.sequence):
            records.append((profile.dataset, model, metric, float(k - p)))
    specs = tuple(
        MetricSpec(name=m, orientation=Orientation.HIGHER_IS_BETTER)
        for m in profile.metric_names
    )
    return ScoreTable(records=tuple(records), metrics=specs)
