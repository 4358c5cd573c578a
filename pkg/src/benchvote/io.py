"""Run-record ingestion, deduplication, and TOML configuration.

Input rows are (dataset, model, metric, value) with optional setting and
repeat columns. Deduplication keeps, per (dataset, model, metric) cell, only
the most common setting (ties going to the lexicographically smallest) and
averages its repeated values.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path
from statistics import fmean
from typing import Iterable, Sequence

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib  # type: ignore[no-redef]

from .core import MetricSpec, Orientation, ScoreTable, TieBreak
from .errors import (
    ConfigError,
    NonFiniteValue,
    ParseError,
    UnknownMetric,
    UnknownModel,
)

_REQUIRED_COLUMNS = ("dataset", "model", "metric", "value")
_OPTIONAL_COLUMNS = ("setting", "repeat")


@dataclass(frozen=True)
class RunRecord:
    dataset: str
    model: str
    metric: str
    value: float
    setting: str = ""
    repeat: int | None = None

    def key(self) -> tuple[str, str, str, str, int | None]:
        return (self.dataset, self.model, self.metric, self.setting, self.repeat)


def _parse_value(raw: object, line: int) -> float:
    try:
        value = float(raw)  # type: ignore[arg-type]
    except (TypeError, ValueError):
        raise ParseError(line, f"value {raw!r} is not a number") from None
    if not math.isfinite(value):
        raise NonFiniteValue(line, str(raw))
    return value


def _parse_repeat(raw: object, line: int) -> int | None:
    if raw is None or raw == "":
        return None
    try:
        return int(raw)  # type: ignore[arg-type]
    except (TypeError, ValueError):
        raise ParseError(line, f"repeat {raw!r} is not an integer") from None


def _check_duplicates(records: list[RunRecord], lines: list[int], strict: bool) -> None:
    seen: dict[tuple, int] = {}
    for record, line in zip(records, lines):
        key = record.key()
        if key in seen:
            message = (
                f"duplicate record for {key} (first seen on line {seen[key]})"
            )
            if strict:
                raise ParseError(line, message)
            warnings.warn(f"line {line}: {message}; keeping both as repeats")
        else:
            seen[key] = line


def _ingest_csv(path: Path, strict: bool) -> list[RunRecord]:
    records: list[RunRecord] = []
    lines: list[int] = []
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames
        if header is None:
            raise ParseError(1, "empty file")
        missing = [c for c in _REQUIRED_COLUMNS if c not in header]
        if missing:
            raise ParseError(1, f"missing required columns: {', '.join(missing)}")
        unknown = [
            c for c in header if c not in _REQUIRED_COLUMNS + _OPTIONAL_COLUMNS
        ]
        if unknown:
            if strict:
                raise ParseError(1, f"unknown columns: {', '.join(unknown)}")
            warnings.warn(f"ignoring unknown columns: {', '.join(unknown)}")
        for row in reader:
            line = reader.line_num
            if row.get(None):
                raise ParseError(line, "more cells than header columns")
            for column in _REQUIRED_COLUMNS:
                if row.get(column) in (None, ""):
                    raise ParseError(line, f"missing value for column {column!r}")
            records.append(
                RunRecord(
                    dataset=row["dataset"],
                    model=row["model"],
                    metric=row["metric"],
                    value=_parse_value(row["value"], line),
                    setting=row.get("setting") or "",
                    repeat=_parse_repeat(row.get("repeat"), line),
                )
            )
            lines.append(line)
    _check_duplicates(records, lines, strict)
    return records


def _ingest_jsonl(path: Path, strict: bool) -> list[RunRecord]:
    records: list[RunRecord] = []
    lines: list[int] = []
    with path.open(encoding="utf-8") as handle:
        for line, text in enumerate(handle, start=1):
            if not text.strip():
                continue
            try:
                obj = json.loads(text)
            except json.JSONDecodeError as e:
                raise ParseError(line, f"invalid JSON: {e.msg}") from None
            if not isinstance(obj, dict):
                raise ParseError(line, "each line must be a JSON object")
            missing = [c for c in _REQUIRED_COLUMNS if c not in obj]
            if missing:
                raise ParseError(line, f"missing required keys: {', '.join(missing)}")
            unknown = [
                c for c in obj if c not in _REQUIRED_COLUMNS + _OPTIONAL_COLUMNS
            ]
            if unknown:
                if strict:
                    raise ParseError(line, f"unknown keys: {', '.join(unknown)}")
                warnings.warn(f"line {line}: ignoring unknown keys: {', '.join(unknown)}")
            value = obj["value"]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ParseError(line, f"value {value!r} is not a number")
            for key in ("dataset", "model", "metric"):
                if not isinstance(obj[key], str) or not obj[key]:
                    raise ParseError(line, f"{key} must be a non-empty string")
            setting = obj.get("setting") or ""
            if not isinstance(setting, str):
                raise ParseError(line, "setting must be a string")
            records.append(
                RunRecord(
                    dataset=obj["dataset"],
                    model=obj["model"],
                    metric=obj["metric"],
                    value=_parse_value(value, line),
                    setting=setting,
                    repeat=_parse_repeat(obj.get("repeat"), line),
                )
            )
            lines.append(line)
    _check_duplicates(records, lines, strict)
    return records


def ingest(path: str | Path, fmt: str | None = None, strict: bool = False) -> list[RunRecord]:
    """Read run records from a CSV or JSONL file.

    When fmt is None the format is chosen by file extension (.jsonl/.json ->
    JSON lines, anything else CSV). Strict mode turns unknown columns and
    duplicate (dataset, model, metric, setting, repeat) keys into errors.
    """
    path = Path(path)
    if fmt is None:
        fmt = "jsonl" if path.suffix.lower() in (".jsonl", ".json") else "csv"
    if fmt == "csv":
        return _ingest_csv(path, strict)
    if fmt == "jsonl":
        return _ingest_jsonl(path, strict)
    raise ConfigError(f"unknown input format {fmt!r}")


def deduplicate(records: Iterable[RunRecord]) -> list[RunRecord]:
    """Collapse repeated measurements into one value per table cell.

    Per (dataset, model, metric): keep only records from the most common
    setting (ties broken toward the lexicographically smallest setting) and
    average their values. Output is sorted by (dataset, model, metric).
    """
    groups: dict[tuple[str, str, str], list[RunRecord]] = defaultdict(list)
    for record in records:
        groups[(record.dataset, record.model, record.metric)].append(record)
    out: list[RunRecord] = []
    for key in sorted(groups):
        group = groups[key]
        counts = Counter(r.setting for r in group)
        top = max(counts.values())
        modal = min(s for s, c in counts.items() if c == top)
        values = [r.value for r in group if r.setting == modal]
        dataset, model, metric = key
        out.append(
            RunRecord(
                dataset=dataset,
                model=model,
                metric=metric,
                value=fmean(values),
                setting=modal,
                repeat=None,
            )
        )
    return out


def build_table(
    records: Iterable[RunRecord],
    metrics: Sequence[MetricSpec],
    models: Sequence[str] | None = None,
    strict: bool = False,
) -> ScoreTable:
    """Assemble an oriented score table restricted to the given metrics/models.

    Records for undeclared metrics are dropped (strict mode: UnknownMetric).
    When a model selection is given, records outside it are dropped; in strict
    mode a selected model with no surviving records raises UnknownModel.
    """
    known = {spec.name for spec in metrics}
    selected = set(models) if models is not None else None
    kept: list[tuple[str, str, str, float]] = []
    seen_models: set[str] = set()
    for record in records:
        if record.metric not in known:
            if strict:
                raise UnknownMetric(
                    f"record references undeclared metric {record.metric!r}"
                )
            continue
        if selected is not None and record.model not in selected:
            continue
        kept.append((record.dataset, record.model, record.metric, record.value))
        seen_models.add(record.model)
    if strict and selected is not None:
        absent = sorted(selected - seen_models)
        if absent:
            raise UnknownModel(f"no records for selected models: {', '.join(absent)}")
    return ScoreTable(records=kept, metrics=metrics)


@dataclass(frozen=True)
class ConfigFile:
    """Parsed TOML configuration.

    Metric order follows the declaration order in the file; named metric sets
    select (and reorder) subsets of the declared metrics.
    """

    orientations: tuple[MetricSpec, ...]
    model_sets: dict[str, tuple[str, ...]]
    metric_sets: dict[str, tuple[str, ...]]
    tie_break: TieBreak = TieBreak.ALPHA_ASC
    tolerance: float = 1e-9
    flip_k: int = 15
    flip_metric: str | None = None
    depth: bool = True

    def metric_specs(self, set_name: str | None = None) -> tuple[MetricSpec, ...]:
        if set_name is None:
            return self.orientations
        if set_name not in self.metric_sets:
            raise ConfigError(f"metric set {set_name!r} is not defined")
        by_name = {spec.name: spec for spec in self.orientations}
        return tuple(by_name[name] for name in self.metric_sets[set_name])

    def model_list(self, set_name: str | None = None) -> tuple[str, ...] | None:
        if set_name is None:
            return None
        if set_name not in self.model_sets:
            raise ConfigError(f"model set {set_name!r} is not defined")
        return self.model_sets[set_name]


def _parse_orientation(name: str, raw: object) -> MetricSpec:
    if raw == Orientation.HIGHER_IS_BETTER.value:
        return MetricSpec(name=name, orientation=Orientation.HIGHER_IS_BETTER)
    if raw == Orientation.LOWER_IS_BETTER.value:
        return MetricSpec(name=name, orientation=Orientation.LOWER_IS_BETTER)
    raise ConfigError(
        f"metric {name!r}: orientation must be 'higher' or 'lower', got {raw!r}"
    )


def _parse_name_list(table_name: str, name: str, raw: object) -> tuple[str, ...]:
    if not isinstance(raw, list) or not all(isinstance(x, str) for x in raw):
        raise ConfigError(f"{table_name}.{name} must be a list of strings")
    if len(set(raw)) != len(raw):
        raise ConfigError(f"{table_name}.{name} contains duplicates")
    return tuple(raw)


def load_config(path: str | Path) -> ConfigFile:
    """Parse a TOML config: metric orientations, named sets, and defaults."""
    with Path(path).open("rb") as handle:
        try:
            data = tomllib.load(handle)
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"invalid TOML: {e}") from None

    metrics_table = data.get("metrics", {})
    if not isinstance(metrics_table, dict):
        raise ConfigError("[metrics] must be a table of name = orientation")
    # Bare top-level string keys are accepted as orientations too.
    for key, value in data.items():
        if isinstance(value, str):
            metrics_table.setdefault(key, value)
    if not metrics_table:
        raise ConfigError("config declares no metrics")
    orientations = tuple(
        _parse_orientation(name, raw) for name, raw in metrics_table.items()
    )
    declared = {spec.name for spec in orientations}

    model_sets = {
        name: _parse_name_list("model_sets", name, raw)
        for name, raw in data.get("model_sets", {}).items()
    }
    metric_sets = {
        name: _parse_name_list("metric_sets", name, raw)
        for name, raw in data.get("metric_sets", {}).items()
    }
    for name, members in metric_sets.items():
        undeclared = [m for m in members if m not in declared]
        if undeclared:
            raise ConfigError(
                f"metric_sets.{name} references undeclared metrics: {', '.join(undeclared)}"
            )

    defaults = data.get("defaults", {})
    if not isinstance(defaults, dict):
        raise ConfigError("[defaults] must be a table")
    known_defaults = {"tie_break", "tolerance", "flip_k", "flip_metric", "depth"}
    unknown = sorted(set(defaults) - known_defaults)
    if unknown:
        raise ConfigError(f"unknown defaults: {', '.join(unknown)}")

    tie_break_raw = defaults.get("tie_break", TieBreak.ALPHA_ASC.value)
    try:
        tie_break = TieBreak(tie_break_raw)
    except ValueError:
        raise ConfigError(
            f"defaults.tie_break must be 'asc' or 'desc', got {tie_break_raw!r}"
        ) from None
    tolerance = defaults.get("tolerance", 1e-9)
    if isinstance(tolerance, bool) or not isinstance(tolerance, (int, float)):
        raise ConfigError("defaults.tolerance must be a number")
    if tolerance < 0:
        raise ConfigError("defaults.tolerance must be non-negative")
    flip_k = defaults.get("flip_k", 15)
    if isinstance(flip_k, bool) or not isinstance(flip_k, int) or flip_k < 2:
        raise ConfigError("defaults.flip_k must be an integer >= 2")
    flip_metric = defaults.get("flip_metric")
    if flip_metric is not None:
        if not isinstance(flip_metric, str) or flip_metric not in declared:
            raise ConfigError(
                f"defaults.flip_metric must name a declared metric, got {flip_metric!r}"
            )
    depth = defaults.get("depth", True)
    if not isinstance(depth, bool):
        raise ConfigError("defaults.depth must be a boolean")

    return ConfigFile(
        orientations=orientations,
        model_sets=model_sets,
        metric_sets=metric_sets,
        tie_break=tie_break,
        tolerance=float(tolerance),
        flip_k=flip_k,
        flip_metric=flip_metric,
        depth=depth,
    )
