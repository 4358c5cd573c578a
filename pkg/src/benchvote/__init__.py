"""Benchmark metrics as voters over models.

Per-dataset metric scores induce rankings; those rankings are aggregated by
pairwise majority, checked against structural domain restrictions that
guarantee coherent aggregation, searched for tolerance-robust Condorcet
cycles, stress-tested for average-rank flips, and summarized across datasets
by a commonality-sharing depth rule.
"""

from .core import (
    MetricSpec,
    Orientation,
    Profile,
    ScoreTable,
    StrictRanking,
    TieBreak,
    WeakRanking,
    break_ties,
    build_profile,
    complete_models,
    induce_weak_ranking,
)
from .depth import (
    DepthReport,
    RankingFamily,
    commonality_sharing,
    family_from_relations,
    pair_support,
    ranking_from_relation,
    sharing_level,
)
from .domains import (
    Axis,
    GroupSeparability,
    SeparationNode,
    admissible_axes,
    distance_degree,
    is_group_separable_exhaustive,
    is_group_separable_recursive,
    is_single_peaked,
    is_single_peaked_on_axis,
    separations_of,
    swap_distance,
)
from .errors import BenchvoteError
from .io import (
    ConfigFile,
    RunRecord,
    build_table,
    deduplicate,
    ingest,
    load_config,
)
from .majority import (
    CycleSearchResult,
    CycleWitness,
    MajorityCounts,
    MajorityRelation,
    RelationMode,
    Vote,
    find_cycles,
    is_complete,
    is_transitive,
    majority_counts,
    majority_relation,
    tolerant_vote,
)
from .positional import (
    FlipReport,
    RankSummary,
    average_rank,
    flip_experiment,
    top_k_by_metric,
    winning_rate,
)
from .suite import SuiteConfig, SuiteReport, emit_report, run_suite
from .synth import (
    default_models,
    degree_one_profile,
    group_separable_profile,
    random_profile,
    random_ranking,
    single_peaked_profile,
    table_from_profile,
)

__version__ = "0.1.0"

__all__ = [
    "Axis",
    "BenchvoteError",
    "ConfigFile",
    "CycleSearchResult",
    "CycleWitness",
    "DepthReport",
    "FlipReport",
    "GroupSeparability",
    "MajorityCounts",
    "MajorityRelation",
    "MetricSpec",
    "Orientation",
    "Profile",
    "RankSummary",
    "RankingFamily",
    "RelationMode",
    "RunRecord",
    "ScoreTable",
    "SeparationNode",
    "StrictRanking",
    "SuiteConfig",
    "SuiteReport",
    "TieBreak",
    "Vote",
    "WeakRanking",
    "admissible_axes",
    "average_rank",
    "break_ties",
    "build_profile",
    "build_table",
    "commonality_sharing",
    "complete_models",
    "deduplicate",
    "default_models",
    "degree_one_profile",
    "distance_degree",
    "emit_report",
    "family_from_relations",
    "find_cycles",
    "flip_experiment",
    "group_separable_profile",
    "induce_weak_ranking",
    "ingest",
    "is_complete",
    "is_group_separable_exhaustive",
    "is_group_separable_recursive",
    "is_single_peaked",
    "is_single_peaked_on_axis",
    "is_transitive",
    "load_config",
    "majority_counts",
    "majority_relation",
    "pair_support",
    "random_profile",
    "random_ranking",
    "ranking_from_relation",
    "run_suite",
    "separations_of",
    "sharing_level",
    "single_peaked_profile",
    "swap_distance",
    "table_from_profile",
    "tolerant_vote",
    "top_k_by_metric",
    "winning_rate",
]
