"""Representative-ranking selection by commonality sharing.

A family of strict rankings over a shared model set (one per dataset, with
repeats allowed) is summarized by how much each member disagrees with widely
shared pairwise judgments. A member's sharing level is 1 plus the largest
support, over all ordered pairs the member ranks oppositely, where support
counts the family members asserting the pair. Deepest members minimize this
level; they disagree only with weakly supported judgments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .core import StrictRanking, position_matrix
from .errors import MemberNotInFamily, IntransitiveOrTiedInput, ModelSetMismatch, SetTooSmall
from .majority import MajorityRelation, RelationMode


@dataclass(frozen=True)
class RankingFamily:
    """Labelled rankings over one model set; duplicates are kept."""

    members: tuple[tuple[str, StrictRanking], ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise SetTooSmall("a ranking family needs at least 1 member")
        first = set(self.members[0][1].sequence)
        for label, ranking in self.members:
            if set(ranking.sequence) != first:
                raise ModelSetMismatch(
                    f"family member {label!r} is over a different model set"
                )

    @property
    def size(self) -> int:
        return len(self.members)

    def model_order(self) -> tuple[str, ...]:
        return tuple(sorted(self.members[0][1].sequence))

    def rankings(self) -> tuple[StrictRanking, ...]:
        return tuple(r for _, r in self.members)


@dataclass(frozen=True)
class DepthReport:
    """Sharing levels per member, the deepest members, and consensus pairs.

    Consensus pairs are the ordered pairs whose support is at least the
    minimum sharing level; every deepest member agrees with all of them.
    """

    labels: tuple[str, ...]
    levels: tuple[int, ...]
    min_level: int
    deepest: tuple[int, ...]
    consensus_pairs: tuple[tuple[str, str], ...]


def _support_matrix(family: RankingFamily) -> tuple[tuple[str, ...], np.ndarray]:
    order = family.model_order()
    pos = position_matrix(family.rankings(), order)
    return order, kernels.pairwise_above_counts(pos)


def pair_support(family: RankingFamily) -> dict[tuple[str, str], int]:
    """support(a, b) = number of family members ranking a above b."""
    order, counts = _support_matrix(family)
    return {
        (a, b): int(counts[i, j])
        for i, a in enumerate(order)
        for j, b in enumerate(order)
        if i != j
    }


def _level_of(
    member: StrictRanking, order: tuple[str, ...], counts: np.ndarray
) -> int:
    idx = {m: i for i, m in enumerate(order)}
    pos = member.positions()
    opposed_max = 0
    for a in order:
        for b in order:
            # The member opposes pair (a, b) when it ranks b above a.
            if a != b and pos[b] < pos[a]:
                opposed_max = max(opposed_max, int(counts[idx[a], idx[b]]))
    return 1 + opposed_max


def sharing_level(family: RankingFamily, index: int) -> int:
    """Sharing level of one member: 1 + max support among opposed pairs.

    A member at level k agrees with every pair supported by k or more members
    and disagrees with some pair supported by exactly k - 1 (or disagrees with
    nothing, at level 1). Levels range from 1 to the family size.
    """
    if not 0 <= index < family.size:
        raise MemberNotInFamily(f"index {index} outside family of size {family.size}")
    order, counts = _support_matrix(family)
    return _level_of(family.members[index][1], order, counts)


def commonality_sharing(family: RankingFamily) -> DepthReport:
    """Rank every member by sharing level and collect the consensus pairs."""
    order, counts = _support_matrix(family)
    levels = [_level_of(member, order, counts) for _, member in family.members]
    min_level = min(levels)
    deepest = tuple(i for i, lv in enumerate(levels) if lv == min_level)
    consensus = sorted(
        (a, b)
        for i, a in enumerate(order)
        for j, b in enumerate(order)
        if i != j and int(counts[i, j]) >= min_level
    )
    return DepthReport(
        labels=tuple(label for label, _ in family.members),
        levels=tuple(levels),
        min_level=min_level,
        deepest=deepest,
        consensus_pairs=tuple(consensus),
    )


def ranking_from_relation(rel: MajorityRelation) -> StrictRanking:
    """Convert a tie-free transitive complete relation into a strict ranking.

    Weak-mode relations with a mutual pair (a tie) and relations with a cycle
    are rejected, since neither linearizes.
    """
    h = rel.matrix
    k = len(rel.models)
    off = ~np.eye(k, dtype=bool)
    if rel.mode is RelationMode.WEAK:
        if (h & h.T & off).any():
            raise IntransitiveOrTiedInput("relation has a tied pair")
        strict = h & off
    else:
        strict = h
    if not (strict | strict.T | ~off).all():
        raise IntransitiveOrTiedInput("relation has an incomparable pair")
    # A complete antisymmetric relation linearizes iff out-degrees are distinct.
    wins = strict.sum(axis=1)
    if sorted(int(w) for w in wins) != list(range(k)):
        raise IntransitiveOrTiedInput("relation contains a cycle")
    by_wins = sorted(range(k), key=lambda i: (-int(wins[i]), rel.models[i]))
    return StrictRanking(tuple(rel.models[i] for i in by_wins))


def family_from_relations(
    labelled: Sequence[tuple[str, MajorityRelation]]
) -> RankingFamily:
    """Build a family from per-dataset majority relations, rejecting any that
    do not linearize."""
    return RankingFamily(
        members=tuple((label, ranking_from_relation(rel)) for label, rel in labelled)
    )
