"""Whole-table analysis across datasets, with JSON/table/plot-data reports.

Each dataset with at least 3 completely scored models gets a metric-ranking
profile and, depending on the requested sections, domain checks, majority
coherence checks, a cycle search, and the flip experiment. When every
analyzed dataset's weak majority order linearizes over one shared model set,
a depth section selects the most representative dataset orders.
"""

from __future__ import annotations

import csv
import io as _stdio
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .core import (
    MetricSpec,
    Profile,
    ScoreTable,
    TieBreak,
    break_ties,
    build_profile,
    complete_models,
    induce_weak_ranking,
)
from .depth import (
    DepthReport,
    commonality_sharing,
    family_from_relations,
    ranking_from_relation,
)
from .domains import (
    MAX_AXIS_MODELS,
    GroupSeparability,
    distance_degree,
    is_group_separable_recursive,
    is_single_peaked,
)
from .errors import BenchvoteError, ConfigError
from .majority import (
    CycleSearchResult,
    MajorityRelation,
    RelationMode,
    find_cycles,
    is_complete,
    is_transitive,
    majority_counts,
    majority_relation,
)
from .positional import flip_experiment

ALL_SECTIONS = frozenset({"domains", "majority", "cycles", "stability", "depth"})


@dataclass(frozen=True)
class SuiteConfig:
    """Resolved analysis settings (selection already applied)."""

    metrics: tuple[MetricSpec, ...]
    models: tuple[str, ...] | None = None
    tie_break: TieBreak = TieBreak.ALPHA_ASC
    tolerance: float = 1e-9
    flip_k: int = 15
    flip_metric: str | None = None
    depth: bool = True
    strict: bool = False
    jobs: int = 1

    def __post_init__(self) -> None:
        if not self.metrics:
            raise ConfigError("suite needs at least one metric")
        if self.tolerance < 0:
            raise ConfigError("tolerance must be non-negative")
        if self.flip_k < 2:
            raise ConfigError("flip_k must be at least 2")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        if self.flip_metric is not None and self.flip_metric not in self.metric_names:
            raise ConfigError(
                f"flip metric {self.flip_metric!r} is not among the selected metrics"
            )

    @property
    def metric_names(self) -> tuple[str, ...]:
        return tuple(spec.name for spec in self.metrics)


@dataclass
class DomainSection:
    single_peaked: bool | None = None
    axis: tuple[str, ...] | None = None
    single_peaked_note: str | None = None
    group_separable: bool | None = None
    separation_tree: dict | None = None
    failing_set: tuple[str, ...] | None = None
    degree: int | None = None
    degree_pair: tuple[str, str] | None = None
    degree_note: str | None = None

    def to_dict(self) -> dict:
        return {
            "single_peaked": self.single_peaked,
            "axis": list(self.axis) if self.axis is not None else None,
            "single_peaked_note": self.single_peaked_note,
            "group_separable": self.group_separable,
            "separation_tree": self.separation_tree,
            "failing_set": list(self.failing_set) if self.failing_set else None,
            "degree": self.degree,
            "degree_pair": list(self.degree_pair) if self.degree_pair else None,
            "degree_note": self.degree_note,
        }


@dataclass
class MajoritySection:
    weak_transitive: bool
    weak_violation: tuple[str, str, str] | None
    weak_complete: bool
    strict_transitive: bool
    strict_violation: tuple[str, str, str] | None
    strict_complete: bool
    strict_incomparable: tuple[str, str] | None
    order: tuple[str, ...] | None
    order_note: str | None

    def to_dict(self) -> dict:
        return {
            "weak_transitive": self.weak_transitive,
            "weak_violation": list(self.weak_violation) if self.weak_violation else None,
            "weak_complete": self.weak_complete,
            "strict_transitive": self.strict_transitive,
            "strict_violation": (
                list(self.strict_violation) if self.strict_violation else None
            ),
            "strict_complete": self.strict_complete,
            "strict_incomparable": (
                list(self.strict_incomparable) if self.strict_incomparable else None
            ),
            "order": list(self.order) if self.order is not None else None,
            "order_note": self.order_note,
        }


@dataclass
class CycleSection:
    evaluated: bool
    note: str | None = None
    cyclic: bool = False
    witnesses: list[dict] = field(default_factory=list)
    most_robust: dict | None = None

    def to_dict(self) -> dict:
        return {
            "evaluated": self.evaluated,
            "note": self.note,
            "cyclic": self.cyclic,
            "n_witnesses": len(self.witnesses),
            "witnesses": self.witnesses,
            "most_robust": self.most_robust,
        }


@dataclass
class StabilitySection:
    evaluated: bool
    note: str | None = None
    flip_metric: str | None = None
    base: tuple[str, ...] = ()
    additions: list[dict] = field(default_factory=list)
    flipped: bool = False

    def to_dict(self) -> dict:
        return {
            "evaluated": self.evaluated,
            "note": self.note,
            "flip_metric": self.flip_metric,
            "base": list(self.base),
            "additions": self.additions,
            "flipped": self.flipped,
        }


@dataclass
class DatasetResult:
    dataset: str
    status: str  # analyzed | skipped | error
    reason: str | None = None
    models: tuple[str, ...] = ()
    rankings: dict[str, tuple[str, ...]] | None = None
    domains: DomainSection | None = None
    majority: MajoritySection | None = None
    cycles: CycleSection | None = None
    stability: StabilitySection | None = None

    def to_dict(self) -> dict:
        out: dict = {
            "dataset": self.dataset,
            "status": self.status,
            "reason": self.reason,
            "models": list(self.models),
        }
        if self.rankings is not None:
            out["rankings"] = {m: list(seq) for m, seq in self.rankings.items()}
        if self.domains is not None:
            out["domains"] = self.domains.to_dict()
        if self.majority is not None:
            out["majority"] = self.majority.to_dict()
        if self.cycles is not None:
            out["cycles"] = self.cycles.to_dict()
        if self.stability is not None:
            out["stability"] = self.stability.to_dict()
        return out


@dataclass
class DepthSection:
    evaluated: bool
    note: str | None = None
    labels: tuple[str, ...] = ()
    levels: tuple[int, ...] = ()
    min_level: int | None = None
    deepest: tuple[str, ...] = ()
    deepest_orders: dict[str, tuple[str, ...]] | None = None
    consensus_pairs: tuple[tuple[str, str], ...] = ()

    def to_dict(self) -> dict:
        return {
            "evaluated": self.evaluated,
            "note": self.note,
            "labels": list(self.labels),
            "levels": list(self.levels),
            "min_level": self.min_level,
            "deepest": list(self.deepest),
            "deepest_orders": (
                {k: list(v) for k, v in self.deepest_orders.items()}
                if self.deepest_orders is not None
                else None
            ),
            "consensus_pairs": [list(p) for p in self.consensus_pairs],
        }


@dataclass
class SuiteReport:
    config: dict
    datasets: list[DatasetResult]
    summary: dict
    depth: DepthSection | None

    def to_dict(self) -> dict:
        out = {
            "config": self.config,
            "datasets": [d.to_dict() for d in self.datasets],
            "summary": self.summary,
        }
        if self.depth is not None:
            out["depth"] = self.depth.to_dict()
        return out


def _witness_dict(w) -> dict:
    return {
        "metric_triple": list(w.metric_triple),
        "cycle": list(w.cycle),
        "buffer": w.buffer,
    }


def _analyze_domains(profile: Profile) -> DomainSection:
    section = DomainSection()
    k = len(profile.models)
    if k > MAX_AXIS_MODELS:
        section.single_peaked_note = (
            f"not evaluated: {k} models exceed the axis enumeration cap of "
            f"{MAX_AXIS_MODELS}"
        )
    else:
        peaked, axis = is_single_peaked(profile)
        section.single_peaked = peaked
        section.axis = axis.sequence if axis is not None else None
    gs: GroupSeparability = is_group_separable_recursive(profile)
    section.group_separable = gs.holds
    section.separation_tree = gs.tree.to_dict() if gs.tree is not None else None
    section.failing_set = gs.failing_set
    if profile.n_rankings < 2:
        section.degree_note = "not evaluated: a single metric has no ranking pairs"
    else:
        section.degree, section.degree_pair = distance_degree(profile)
    return section


def _analyze_majority(profile: Profile) -> tuple[MajoritySection, MajorityRelation]:
    counts = majority_counts(profile)
    weak = majority_relation(counts, RelationMode.WEAK)
    strict = majority_relation(counts, RelationMode.STRICT)
    weak_ok, weak_violation = is_transitive(weak)
    strict_ok, strict_violation = is_transitive(strict)
    weak_complete, _ = is_complete(weak)
    strict_complete, incomparable = is_complete(strict)
    order: tuple[str, ...] | None = None
    order_note: str | None = None
    try:
        order = ranking_from_relation(weak).sequence
    except BenchvoteError as e:
        order_note = str(e)
    return (
        MajoritySection(
            weak_transitive=weak_ok,
            weak_violation=weak_violation,
            weak_complete=weak_complete,
            strict_transitive=strict_ok,
            strict_violation=strict_violation,
            strict_complete=strict_complete,
            strict_incomparable=incomparable,
            order=order,
            order_note=order_note,
        ),
        weak,
    )


def _analyze_cycles(table: ScoreTable, dataset: str, config: SuiteConfig) -> CycleSection:
    names = config.metric_names
    if len(names) < 3:
        return CycleSection(
            evaluated=False,
            note="not evaluated: the cycle search needs a pool of at least 3 metrics",
        )
    result: CycleSearchResult = find_cycles(table, dataset, names, config.tolerance)
    return CycleSection(
        evaluated=True,
        cyclic=bool(result),
        witnesses=[_witness_dict(w) for w in result.witnesses],
        most_robust=_witness_dict(result.most_robust) if result.most_robust else None,
    )


def _analyze_stability(
    table: ScoreTable, dataset: str, models: tuple[str, ...], config: SuiteConfig
) -> StabilitySection:
    flip_metric = config.flip_metric or config.metric_names[0]
    k_eff = min(config.flip_k, len(models))
    if k_eff < 2:
        return StabilitySection(
            evaluated=False,
            note="not evaluated: fewer than 2 completely scored models",
            flip_metric=flip_metric,
        )
    ranked = break_ties(
        induce_weak_ranking(table, dataset, flip_metric, models), config.tie_break
    )
    base = ranked.sequence[:k_eff]
    candidates = tuple(m for m in models if m not in base)
    if not candidates:
        return StabilitySection(
            evaluated=True,
            note="no candidate models outside the base set",
            flip_metric=flip_metric,
            base=base,
        )
    additions: list[dict] = []
    flipped = False
    for candidate in candidates:
        report = flip_experiment(
            table, dataset, config.metric_names, base, candidate, config.tie_break
        )
        additions.append(
            {"added": candidate, "flips": [list(p) for p in report.flips]}
        )
        flipped = flipped or report.flipped
    return StabilitySection(
        evaluated=True,
        flip_metric=flip_metric,
        base=base,
        additions=additions,
        flipped=flipped,
    )


def _analyze_dataset(
    table: ScoreTable,
    dataset: str,
    config: SuiteConfig,
    sections: frozenset[str],
) -> tuple[DatasetResult, MajorityRelation | None]:
    names = config.metric_names
    models = complete_models(table, dataset, names)
    if len(models) < 3:
        return (
            DatasetResult(
                dataset=dataset,
                status="skipped",
                reason=(
                    f"only {len(models)} models scored on every metric; need 3"
                ),
                models=models,
            ),
            None,
        )
    try:
        profile = build_profile(table, dataset, names, models, config.tie_break)
        result = DatasetResult(
            dataset=dataset,
            status="analyzed",
            models=models,
            rankings={
                m: r.sequence for m, r in zip(profile.metric_names, profile.rankings)
            },
        )
        weak: MajorityRelation | None = None
        if "domains" in sections:
            result.domains = _analyze_domains(profile)
        if "majority" in sections or "depth" in sections:
            result.majority, weak = _analyze_majority(profile)
        if "cycles" in sections:
            result.cycles = _analyze_cycles(table, dataset, config)
        if "stability" in sections:
            result.stability = _analyze_stability(table, dataset, models, config)
        return result, weak
    except BenchvoteError as e:
        return (
            DatasetResult(dataset=dataset, status="error", reason=str(e)),
            None,
        )


def _analyze_depth(
    analyzed: list[tuple[str, MajorityRelation]], enabled: bool
) -> DepthSection:
    if not enabled:
        return DepthSection(evaluated=False, note="disabled by configuration")
    if not analyzed:
        return DepthSection(evaluated=False, note="no analyzed datasets")
    try:
        family = family_from_relations(analyzed)
        report: DepthReport = commonality_sharing(family)
    except BenchvoteError as e:
        return DepthSection(evaluated=False, note=str(e))
    deepest_labels = tuple(report.labels[i] for i in report.deepest)
    orders = {
        report.labels[i]: family.members[i][1].sequence for i in report.deepest
    }
    return DepthSection(
        evaluated=True,
        labels=report.labels,
        levels=report.levels,
        min_level=report.min_level,
        deepest=deepest_labels,
        deepest_orders=orders,
        consensus_pairs=report.consensus_pairs,
    )


def run_suite(
    table: ScoreTable,
    config: SuiteConfig,
    sections: frozenset[str] = ALL_SECTIONS,
) -> SuiteReport:
    """Analyze every dataset in the table and assemble a report.

    Work is distributed over config.jobs threads; results are assembled in
    sorted dataset order so the report does not depend on scheduling.
    """
    datasets = list(table.datasets)
    with ThreadPoolExecutor(max_workers=config.jobs) as pool:
        results = list(
            pool.map(lambda d: _analyze_dataset(table, d, config, sections), datasets)
        )
    dataset_results = [r for r, _ in results]

    counts = {
        "datasets": len(datasets),
        "analyzed": sum(1 for r in dataset_results if r.status == "analyzed"),
        "skipped": sum(1 for r in dataset_results if r.status == "skipped"),
        "errors": sum(1 for r in dataset_results if r.status == "error"),
    }
    if "domains" in sections:
        counts["single_peaked"] = sum(
            1
            for r in dataset_results
            if r.domains is not None and r.domains.single_peaked is True
        )
        counts["group_separable"] = sum(
            1
            for r in dataset_results
            if r.domains is not None and r.domains.group_separable is True
        )
        degrees = [
            r.domains.degree
            for r in dataset_results
            if r.domains is not None and r.domains.degree is not None
        ]
        counts["max_degree"] = max(degrees) if degrees else None
        counts["degree_at_most_1"] = sum(1 for d in degrees if d <= 1)
    if "majority" in sections or "depth" in sections:
        counts["weak_transitive"] = sum(
            1
            for r in dataset_results
            if r.majority is not None and r.majority.weak_transitive
        )
        counts["strict_transitive"] = sum(
            1
            for r in dataset_results
            if r.majority is not None and r.majority.strict_transitive
        )
    if "cycles" in sections:
        counts["cyclic"] = sum(
            1
            for r in dataset_results
            if r.cycles is not None and r.cycles.cyclic
        )
    if "stability" in sections:
        counts["flipped"] = sum(
            1
            for r in dataset_results
            if r.stability is not None and r.stability.flipped
        )

    depth_section: DepthSection | None = None
    if "depth" in sections:
        labelled = [
            (r.dataset, weak)
            for (r, weak) in results
            if r.status == "analyzed" and weak is not None
        ]
        depth_section = _analyze_depth(labelled, config.depth)

    config_echo = {
        "metrics": {spec.name: spec.orientation.value for spec in config.metrics},
        "metric_order": list(config.metric_names),
        "models": list(config.models) if config.models is not None else None,
        "tie_break": config.tie_break.value,
        "tolerance": config.tolerance,
        "flip_k": config.flip_k,
        "flip_metric": config.flip_metric or config.metric_names[0],
        "sections": sorted(sections),
    }
    return SuiteReport(
        config=config_echo,
        datasets=dataset_results,
        summary=counts,
        depth=depth_section,
    )


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------


def _emit_json(report: SuiteReport) -> bytes:
    text = json.dumps(report.to_dict(), sort_keys=True, indent=2)
    return (text + "\n").encode("utf-8")


def _yes_no(value: bool | None) -> str:
    if value is None:
        return "-"
    return "yes" if value else "no"


def _emit_table(report: SuiteReport) -> bytes:
    lines: list[str] = []
    rows = [["dataset", "status", "k", "SP", "GS", "deg", "weakT", "strictT", "cyclic", "flips"]]
    for r in report.datasets:
        dom = r.domains
        maj = r.majority
        rows.append(
            [
                r.dataset,
                r.status,
                str(len(r.models)) if r.models else "0",
                _yes_no(dom.single_peaked) if dom else "-",
                _yes_no(dom.group_separable) if dom else "-",
                str(dom.degree) if dom and dom.degree is not None else "-",
                _yes_no(maj.weak_transitive) if maj else "-",
                _yes_no(maj.strict_transitive) if maj else "-",
                _yes_no(r.cycles.cyclic) if r.cycles and r.cycles.evaluated else "-",
                _yes_no(r.stability.flipped) if r.stability and r.stability.evaluated else "-",
            ]
        )
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    for row in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())

    skipped = [r for r in report.datasets if r.status != "analyzed"]
    if skipped:
        lines.append("")
        lines.append("not analyzed:")
        for r in skipped:
            lines.append(f"  {r.dataset}: {r.reason}")

    cyclic = [
        r for r in report.datasets if r.cycles is not None and r.cycles.cyclic
    ]
    if cyclic:
        lines.append("")
        lines.append("cycles (most robust per dataset):")
        for r in cyclic:
            w = r.cycles.most_robust
            assert w is not None
            cycle = " > ".join(w["cycle"] + [w["cycle"][0]])
            lines.append(
                f"  {r.dataset}: {cycle}  metrics={','.join(w['metric_triple'])}"
                f"  buffer={w['buffer']:.6g}"
            )

    flipped = [
        r
        for r in report.datasets
        if r.stability is not None and r.stability.flipped
    ]
    if flipped:
        lines.append("")
        lines.append("rank flips:")
        for r in flipped:
            for entry in r.stability.additions:
                for a, b in entry["flips"]:
                    lines.append(
                        f"  {r.dataset}: adding {entry['added']} flips {a} vs {b}"
                    )

    lines.append("")
    lines.append("summary:")
    for key in sorted(report.summary):
        lines.append(f"  {key}: {report.summary[key]}")

    if report.depth is not None:
        lines.append("")
        lines.append("depth:")
        d = report.depth
        if not d.evaluated:
            lines.append(f"  not evaluated: {d.note}")
        else:
            for label, level in zip(d.labels, d.levels):
                marker = " (deepest)" if label in d.deepest else ""
                lines.append(f"  {label}: level {level}{marker}")
            lines.append(f"  min level: {d.min_level}")
            for label in d.deepest:
                assert d.deepest_orders is not None
                lines.append(
                    f"  order[{label}]: {' > '.join(d.deepest_orders[label])}"
                )
    lines.append("")
    return "\n".join(lines).encode("utf-8")


def _emit_plotdata(report: SuiteReport) -> bytes:
    """CSV rows for downstream plotting.

    kind=peak rows give, per single-peaked dataset, each model's axis position
    against its rank under each metric (one row per axis slot per metric).
    kind=majority rows give linearized weak majority orders; kind=deepest rows
    give the depth winners.
    """
    buf = _stdio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["kind", "dataset", "metric", "position", "model", "rank"])
    for r in report.datasets:
        if (
            r.domains is not None
            and r.domains.single_peaked
            and r.domains.axis is not None
            and r.rankings is not None
        ):
            axis = r.domains.axis
            for metric in sorted(r.rankings):
                ranks = {m: i + 1 for i, m in enumerate(r.rankings[metric])}
                for position, model in enumerate(axis, start=1):
                    writer.writerow(
                        ["peak", r.dataset, metric, position, model, ranks[model]]
                    )
        if r.majority is not None and r.majority.order is not None:
            for position, model in enumerate(r.majority.order, start=1):
                writer.writerow(
                    ["majority", r.dataset, "", position, model, position]
                )
    if report.depth is not None and report.depth.evaluated:
        assert report.depth.deepest_orders is not None
        for label in report.depth.deepest:
            for position, model in enumerate(
                report.depth.deepest_orders[label], start=1
            ):
                writer.writerow(["deepest", label, "", position, model, position])
    return buf.getvalue().encode("utf-8")


def emit_report(report: SuiteReport, fmt: str = "json") -> bytes:
    if fmt == "json":
        return _emit_json(report)
    if fmt == "table":
        return _emit_table(report)
    if fmt == "plotdata":
        return _emit_plotdata(report)
    raise ConfigError(f"unknown report format {fmt!r}")
