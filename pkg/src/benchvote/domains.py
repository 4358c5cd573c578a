"""Structural domain checks on metric-ranking profiles.

Three restrictions are checked, each of which forces the pairwise majority
relation to behave well:

* single-peakedness: there is a societal axis such that every ranking falls
  away from its peak on both sides,
* group separability: every subset of three or more models can be split so
  that each ranking keeps one side entirely above the other,
* bounded distance degree: the maximum swap distance between any two rankings
  in the profile.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .core import Profile, StrictRanking, model_index, sequence_matrix
from .errors import (
    ModelSetMismatch,
    SetTooSmall,
    TooFewMetrics,
    TooFewModels,
    TooManyModels,
)

# Axis enumeration walks k!/2 candidates; past this k it is refused.
MAX_AXIS_MODELS = 10

# The exhaustive separability check walks all subsets; past this k it is refused.
MAX_EXHAUSTIVE_MODELS = 12


@dataclass(frozen=True)
class Axis:
    """A left-to-right ordering of models; reversal is the same axis.

    The stored sequence is canonical: the lexicographically smaller of the
    sequence and its reversal.
    """

    sequence: tuple[str, ...]

    @staticmethod
    def of(sequence: Sequence[str]) -> "Axis":
        seq = tuple(sequence)
        rev = tuple(reversed(seq))
        return Axis(sequence=min(seq, rev))


@dataclass(frozen=True)
class SeparationNode:
    """One node of a separation hierarchy over a model set.

    Internal nodes carry the chosen separating subset; leaves (at most two
    models) carry none.
    """

    members: tuple[str, ...]
    separation: tuple[str, ...] | None
    children: tuple["SeparationNode", ...] = ()

    def to_dict(self) -> dict:
        out: dict = {"members": list(self.members)}
        if self.separation is not None:
            out["separation"] = list(self.separation)
            out["children"] = [c.to_dict() for c in self.children]
        return out


@dataclass(frozen=True)
class GroupSeparability:
    holds: bool
    tree: SeparationNode | None
    failing_set: tuple[str, ...] | None


def is_single_peaked_on_axis(ranking: StrictRanking, axis: Axis) -> bool:
    """True when every prefix of the ranking is contiguous on the axis."""
    if sorted(ranking.sequence) != sorted(axis.sequence):
        raise ModelSetMismatch("ranking and axis are over different model sets")
    idx = model_index(axis.sequence)
    x = np.fromiter((idx[m] for m in ranking.sequence), dtype=np.int64)
    k = x.size
    lo = np.minimum.accumulate(x)
    hi = np.maximum.accumulate(x)
    return bool(np.array_equal(hi - lo, np.arange(k)))


def _axis_guard(k: int) -> None:
    if k < 3:
        raise TooFewModels("axis checks need at least 3 models")
    if k > MAX_AXIS_MODELS:
        raise TooManyModels(
            f"axis enumeration supports at most {MAX_AXIS_MODELS} models, got {k}"
        )


def admissible_axes(profile: Profile) -> list[Axis]:
    """All axes (up to reversal) on which every ranking is single-peaked.

    Returned in lexicographic order of their canonical sequences.
    """
    order = profile.model_order()
    _axis_guard(len(order))
    seq = sequence_matrix(profile.rankings, order)
    rows = kernels.enumerate_axes(seq, stop_after_first=False)
    return [Axis(tuple(order[i] for i in row)) for row in rows]


def is_single_peaked(profile: Profile) -> tuple[bool, Axis | None]:
    """Decide single-peakedness; the witness is the lex-smallest axis."""
    order = profile.model_order()
    _axis_guard(len(order))
    seq = sequence_matrix(profile.rankings, order)
    rows = kernels.enumerate_axes(seq, stop_after_first=True)
    if rows.shape[0] == 0:
        return False, None
    return True, Axis(tuple(order[i] for i in rows[0]))


def _restriction(ranking: StrictRanking, members: frozenset[str]) -> tuple[str, ...]:
    return tuple(m for m in ranking.sequence if m in members)


def _segments(restricted: tuple[str, ...]) -> set[frozenset[str]]:
    """Proper prefixes and suffixes of a restricted ranking, as sets."""
    out: set[frozenset[str]] = set()
    for cut in range(1, len(restricted)):
        out.add(frozenset(restricted[:cut]))
        out.add(frozenset(restricted[cut:]))
    return out


def separations_of(models: Iterable[str], profile: Profile) -> list[tuple[str, ...]]:
    """All proper subsets E of the given set that separate it in every ranking.

    E separates S in a ranking when the ranking's restriction to S places all
    of E above all of S minus E, or all below. Results are sorted by size then
    lexicographically.
    """
    member_set = frozenset(models)
    if len(member_set) < 3:
        raise SetTooSmall("separation is only defined for sets of 3 or more models")
    if not member_set <= set(profile.models):
        raise ModelSetMismatch("set contains models outside the profile")
    candidates: set[frozenset[str]] | None = None
    for ranking in profile.rankings:
        segs = _segments(_restriction(ranking, member_set))
        candidates = segs if candidates is None else candidates & segs
        if not candidates:
            return []
    assert candidates is not None
    return sorted((tuple(sorted(s)) for s in candidates), key=lambda t: (len(t), t))


def _separates_everywhere(
    part: frozenset[str], restrictions: list[tuple[str, ...]]
) -> bool:
    size = len(part)
    for restricted in restrictions:
        if frozenset(restricted[:size]) != part and frozenset(restricted[-size:]) != part:
            return False
    return True


def is_group_separable_recursive(profile: Profile) -> GroupSeparability:
    """Top-down separability check splitting greedily until leaves remain.

    At each set the smallest admissible separation (by size, then
    lexicographically) is chosen and both parts are recursed on. A set with no
    separation is returned as the failing witness. This finds a valid
    hierarchy whenever the profile is group-separable, since parts of a
    separable set are separable.
    """
    if len(profile.models) < 3:
        raise TooFewModels("group separability needs at least 3 models")

    failing: tuple[str, ...] | None = None

    def build(members: frozenset[str]) -> SeparationNode | None:
        nonlocal failing
        if len(members) <= 2:
            return SeparationNode(members=tuple(sorted(members)), separation=None)
        seps = separations_of(members, profile)
        if not seps:
            if failing is None:
                failing = tuple(sorted(members))
            return None
        chosen = frozenset(seps[0])
        left = build(chosen)
        if left is None:
            return None
        right = build(members - chosen)
        if right is None:
            return None
        return SeparationNode(
            members=tuple(sorted(members)),
            separation=seps[0],
            children=(left, right),
        )

    tree = build(frozenset(profile.models))
    if tree is None:
        return GroupSeparability(holds=False, tree=None, failing_set=failing)
    return GroupSeparability(holds=True, tree=tree, failing_set=None)


def is_group_separable_exhaustive(profile: Profile) -> GroupSeparability:
    """Ground-truth separability check over every subset of 3 or more models.

    Subsets are scanned by size then lexicographically; the first subset with
    no separation is the failing witness.
    """
    order = profile.model_order()
    k = len(order)
    if k < 3:
        raise TooFewModels("group separability needs at least 3 models")
    if k > MAX_EXHAUSTIVE_MODELS:
        raise TooManyModels(
            f"exhaustive separability supports at most {MAX_EXHAUSTIVE_MODELS} models, got {k}"
        )
    for size in range(3, k + 1):
        for subset in itertools.combinations(order, size):
            members = frozenset(subset)
            restrictions = [_restriction(r, members) for r in profile.rankings]
            found = False
            for cut in range(1, size):
                head = frozenset(restrictions[0][:cut])
                tail = frozenset(restrictions[0][cut:])
                if _separates_everywhere(head, restrictions) or (
                    _separates_everywhere(tail, restrictions)
                ):
                    found = True
                    break
            if not found:
                return GroupSeparability(holds=False, tree=None, failing_set=subset)
    # Reuse the recursive builder for the witness hierarchy.
    return is_group_separable_recursive(profile)


def swap_distance(r1: StrictRanking, r2: StrictRanking) -> int:
    """Number of model pairs the two rankings order oppositely."""
    if sorted(r1.sequence) != sorted(r2.sequence):
        raise ModelSetMismatch("swap distance needs rankings over the same models")
    pos2 = r2.positions()
    arr = np.fromiter((pos2[m] for m in r1.sequence), dtype=np.int64)
    return kernels.count_inversions(arr)


def distance_degree(profile: Profile) -> tuple[int, tuple[str, str]]:
    """Maximum swap distance over metric pairs, with the first pair attaining it."""
    n = profile.n_rankings
    if n < 2:
        raise TooFewMetrics("distance degree needs at least 2 rankings")
    best = -1
    arg: tuple[str, str] | None = None
    for i in range(n):
        for j in range(i + 1, n):
            d = swap_distance(profile.rankings[i], profile.rankings[j])
            if d > best:
                best = d
                arg = (profile.metric_names[i], profile.metric_names[j])
    assert arg is not None
    return best, arg
