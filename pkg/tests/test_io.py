"""Run-record ingestion, deduplication, table assembly, and TOML config."""

from __future__ import annotations

import json

import numpy as np
import pytest

from benchvote import (
    ConfigFile,
    MetricSpec,
    Orientation,
    RunRecord,
    TieBreak,
    build_table,
    deduplicate,
    ingest,
    load_config,
)
from benchvote.errors import (
    ConfigError,
    NonFiniteValue,
    ParseError,
    UnknownMetric,
    UnknownModel,
)
from conftest import TABLE1_RECORDS


def write(tmp_path, name: str, text: str):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def record_tuples(records):
    return [(r.dataset, r.model, r.metric, r.value) for r in records]


# ---------------------------------------------------------------- CSV ingest


def test_ingest_four_column_csv(data_dir):
    records = ingest(data_dir / "table1.csv")
    assert len(records) == 9
    assert set(record_tuples(records)) == set(TABLE1_RECORDS)
    assert all(r.setting == "" and r.repeat is None for r in records)


def test_ingest_six_column_csv(tmp_path):
    path = write(
        tmp_path,
        "runs.csv",
        "dataset,model,metric,value,setting,repeat\n"
        "logic,alpha,accuracy,0.5,greedy,0\n"
        "logic,alpha,accuracy,0.7,greedy,1\n",
    )
    records = ingest(path)
    assert records == [
        RunRecord("logic", "alpha", "accuracy", 0.5, "greedy", 0),
        RunRecord("logic", "alpha", "accuracy", 0.7, "greedy", 1),
    ]


def test_ingest_header_only_csv_yields_no_records(tmp_path):
    path = write(tmp_path, "runs.csv", "dataset,model,metric,value\n")
    assert ingest(path) == []


def test_ingest_empty_csv_fails(tmp_path):
    path = write(tmp_path, "runs.csv", "")
    with pytest.raises(ParseError, match="empty file"):
        ingest(path)


def test_ingest_missing_column_fails(tmp_path):
    path = write(tmp_path, "runs.csv", "dataset,model,value\nlogic,alpha,0.5\n")
    with pytest.raises(ParseError, match="missing required columns: metric"):
        ingest(path)


def test_ingest_missing_cell_reports_line(tmp_path):
    path = write(
        tmp_path,
        "runs.csv",
        "dataset,model,metric,value\n"
        "logic,alpha,accuracy,0.5\n"
        "logic,,accuracy,0.7\n",
    )
    with pytest.raises(ParseError, match="line 3.*model") as excinfo:
        ingest(path)
    assert excinfo.value.line == 3


def test_ingest_extra_cells_fail(tmp_path):
    path = write(
        tmp_path,
        "runs.csv",
        "dataset,model,metric,value\nlogic,alpha,accuracy,0.5,spill\n",
    )
    with pytest.raises(ParseError, match="more cells than header"):
        ingest(path)


def test_ingest_non_numeric_value_fails(tmp_path):
    path = write(
        tmp_path, "runs.csv", "dataset,model,metric,value\nlogic,alpha,accuracy,none\n"
    )
    with pytest.raises(ParseError, match="not a number"):
        ingest(path)


@pytest.mark.parametrize("bad", ["nan", "inf", "-inf"])
def test_ingest_non_finite_value_fails_with_line(tmp_path, bad):
    path = write(
        tmp_path,
        "runs.csv",
        f"dataset,model,metric,value\nlogic,alpha,accuracy,0.5\nlogic,bravo,accuracy,{bad}\n",
    )
    with pytest.raises(NonFiniteValue) as excinfo:
        ingest(path)
    assert excinfo.value.line == 3
    assert excinfo.value.raw == bad


def test_ingest_unknown_column_warns_then_fails_in_strict(tmp_path):
    path = write(
        tmp_path,
        "runs.csv",
        "dataset,model,metric,value,comment\nlogic,alpha,accuracy,0.5,fine\n",
    )
    with pytest.warns(UserWarning, match="unknown columns: comment"):
        records = ingest(path)
    assert record_tuples(records) == [("logic", "alpha", "accuracy", 0.5)]
    with pytest.raises(ParseError, match="unknown columns: comment"):
        ingest(path, strict=True)


def test_ingest_duplicate_key_warns_then_fails_in_strict(tmp_path):
    path = write(
        tmp_path,
        "runs.csv",
        "dataset,model,metric,value,setting,repeat\n"
        "logic,alpha,accuracy,0.5,greedy,0\n"
        "logic,alpha,accuracy,0.6,greedy,0\n",
    )
    with pytest.warns(UserWarning, match="duplicate record"):
        records = ingest(path)
    assert len(records) == 2
    with pytest.raises(ParseError, match="first seen on line 2"):
        ingest(path, strict=True)


def test_ingest_distinct_repeats_are_not_duplicates(tmp_path):
    path = write(
        tmp_path,
        "runs.csv",
        "dataset,model,metric,value,setting,repeat\n"
        "logic,alpha,accuracy,0.5,greedy,0\n"
        "logic,alpha,accuracy,0.6,greedy,1\n",
    )
    assert len(ingest(path, strict=True)) == 2


# -------------------------------------------------------------- JSONL ingest


def test_ingest_jsonl_with_blank_lines(tmp_path):
    rows = [
        {"dataset": "logic", "model": "alpha", "metric": "accuracy", "value": 0.5},
        {
            "dataset": "logic",
            "model": "bravo",
            "metric": "accuracy",
            "value": 1,
            "setting": "greedy",
            "repeat": 2,
        },
    ]
    text = json.dumps(rows[0]) + "\n\n" + json.dumps(rows[1]) + "\n"
    path = write(tmp_path, "runs.jsonl", text)
    records = ingest(path)
    assert records == [
        RunRecord("logic", "alpha", "accuracy", 0.5),
        RunRecord("logic", "bravo", "accuracy", 1.0, "greedy", 2),
    ]


def test_ingest_jsonl_rejects_malformed_lines(tmp_path):
    cases = [
        ("{not json}", "invalid JSON"),
        ('["a", "b"]', "must be a JSON object"),
        ('{"dataset": "d", "model": "m", "value": 1.0}', "missing required keys: metric"),
        (
            '{"dataset": "d", "model": "m", "metric": "x", "value": true}',
            "not a number",
        ),
        (
            '{"dataset": "d", "model": "m", "metric": "x", "value": "0.5"}',
            "not a number",
        ),
        (
            '{"dataset": "", "model": "m", "metric": "x", "value": 1.0}',
            "dataset must be a non-empty string",
        ),
        (
            '{"dataset": "d", "model": "m", "metric": "x", "value": 1.0, "setting": 3}',
            "setting must be a string",
        ),
        (
            '{"dataset": "d", "model": "m", "metric": "x", "value": 1.0, "repeat": "a"}',
            "repeat 'a' is not an integer",
        ),
    ]
    for text, message in cases:
        path = write(tmp_path, "runs.jsonl", text + "\n")
        with pytest.raises(ParseError, match=message):
            ingest(path)


def test_ingest_jsonl_unknown_key_warns_then_fails_in_strict(tmp_path):
    path = write(
        tmp_path,
        "runs.jsonl",
        '{"dataset": "d", "model": "m", "metric": "x", "value": 1.0, "note": "hi"}\n',
    )
    with pytest.warns(UserWarning, match="unknown keys: note"):
        assert len(ingest(path)) == 1
    with pytest.raises(ParseError, match="unknown keys: note"):
        ingest(path, strict=True)


def test_ingest_format_selection(tmp_path):
    jsonl = write(
        tmp_path,
        "runs.json",
        '{"dataset": "d", "model": "m", "metric": "x", "value": 1.0}\n',
    )
    assert len(ingest(jsonl)) == 1
    csv_named_txt = write(tmp_path, "runs.txt", "dataset,model,metric,value\nd,m,x,1\n")
    assert len(ingest(csv_named_txt)) == 1
    explicit = ingest(csv_named_txt, fmt="csv")
    assert record_tuples(explicit) == [("d", "m", "x", 1.0)]
    with pytest.raises(ConfigError, match="unknown input format"):
        ingest(csv_named_txt, fmt="tsv")


# -------------------------------------------------------------- deduplicate


def test_deduplicate_keeps_modal_setting_and_averages():
    records = [
        RunRecord("d", "m", "x", 0.4, "greedy", 0),
        RunRecord("d", "m", "x", 0.6, "greedy", 1),
        RunRecord("d", "m", "x", 0.99, "sampled", 0),
    ]
    out = deduplicate(records)
    assert out == [RunRecord("d", "m", "x", 0.5, "greedy", None)]


def test_deduplicate_breaks_setting_ties_lexicographically():
    records = [
        RunRecord("d", "m", "x", 0.9, "sampled", 0),
        RunRecord("d", "m", "x", 0.1, "greedy", 0),
    ]
    out = deduplicate(records)
    assert out == [RunRecord("d", "m", "x", 0.1, "greedy", None)]


def test_deduplicate_sorts_output_cells():
    records = [
        RunRecord("d2", "m", "x", 1.0),
        RunRecord("d1", "z", "x", 2.0),
        RunRecord("d1", "a", "y", 3.0),
        RunRecord("d1", "a", "x", 4.0),
    ]
    out = deduplicate(records)
    assert [(r.dataset, r.model, r.metric) for r in out] == [
        ("d1", "a", "x"),
        ("d1", "a", "y"),
        ("d1", "z", "x"),
        ("d2", "m", "x"),
    ]


@pytest.mark.parametrize("seed", range(10))
def test_deduplicate_matches_per_group_recomputation(seed):
    rng = np.random.default_rng(seed)
    settings = ("", "greedy", "sampled")
    records = [
        RunRecord(
            dataset=f"d{rng.integers(2)}",
            model=f"m{rng.integers(3)}",
            metric=f"x{rng.integers(2)}",
            value=float(rng.uniform(0, 1)),
            setting=str(rng.choice(settings)),
            repeat=int(rng.integers(3)),
        )
        for _ in range(40)
    ]
    out = deduplicate(records)
    cells = {(r.dataset, r.model, r.metric) for r in records}
    assert len(out) == len(cells)
    for reduced in out:
        group = [
            r
            for r in records
            if (r.dataset, r.model, r.metric)
            == (reduced.dataset, reduced.model, reduced.metric)
        ]
        tally: dict[str, int] = {}
        for r in group:
            tally[r.setting] = tally.get(r.setting, 0) + 1
        top = max(tally.values())
        modal = min(s for s, c in tally.items() if c == top)
        values = [r.value for r in group if r.setting == modal]
        assert reduced.setting == modal
        assert reduced.repeat is None
        assert reduced.value == pytest.approx(sum(values) / len(values))


# --------------------------------------------------------------- build_table


SPECS = (
    MetricSpec("accuracy", Orientation.HIGHER_IS_BETTER),
    MetricSpec("inference_time", Orientation.LOWER_IS_BETTER),
)


def test_build_table_applies_orientation():
    records = [
        RunRecord("d", "m", "accuracy", 0.65),
        RunRecord("d", "m", "inference_time", 0.32),
    ]
    table = build_table(records, SPECS)
    assert table.oriented("d", "m", "accuracy") == pytest.approx(0.65)
    assert table.oriented("d", "m", "inference_time") == pytest.approx(-0.32)


def test_build_table_drops_undeclared_metrics_unless_strict():
    records = [
        RunRecord("d", "m", "accuracy", 0.65),
        RunRecord("d", "m", "num_bytes", 120.0),
    ]
    table = build_table(records, SPECS)
    assert table.has("d", "m", "accuracy")
    assert not table.has("d", "m", "num_bytes")
    with pytest.raises(UnknownMetric, match="num_bytes"):
        build_table(records, SPECS, strict=True)


def test_build_table_model_selection():
    records = [
        RunRecord("d", "alpha", "accuracy", 0.1),
        RunRecord("d", "bravo", "accuracy", 0.2),
    ]
    table = build_table(records, SPECS, models=("alpha",))
    assert table.models == ("alpha",)
    with pytest.raises(UnknownModel, match="charlie"):
        build_table(records, SPECS, models=("alpha", "charlie"), strict=True)
    lenient = build_table(records, SPECS, models=("alpha", "charlie"))
    assert lenient.models == ("alpha",)


# -------------------------------------------------------------------- config


def test_load_bundled_metric_config(data_dir):
    config = load_config(data_dir / "table1_metrics.toml")
    assert config.orientations == (
        MetricSpec("accuracy", Orientation.HIGHER_IS_BETTER),
        MetricSpec("inference_time", Orientation.LOWER_IS_BETTER),
        MetricSpec("output_length", Orientation.LOWER_IS_BETTER),
    )
    assert config.model_sets == {}
    assert config.metric_sets == {}
    assert config.tie_break is TieBreak.ALPHA_ASC
    assert config.flip_k == 15
    assert config.depth is True


def test_load_suite_config_with_sets_and_defaults(data_dir):
    config = load_config(data_dir / "synthetic_config.toml")
    assert [spec.name for spec in config.orientations] == [
        "quality",
        "coverage",
        "latency",
    ]
    assert config.model_sets["quartet"] == ("alpha", "bravo", "charlie", "delta")
    assert config.metric_sets["pair"] == ("quality", "latency")
    assert config.flip_k == 4
    specs = config.metric_specs("pair")
    assert [spec.name for spec in specs] == ["quality", "latency"]
    assert specs[1].orientation is Orientation.LOWER_IS_BETTER
    assert config.model_list(None) is None
    assert config.model_list("quartet") == ("alpha", "bravo", "charlie", "delta")
    with pytest.raises(ConfigError, match="metric set 'nope'"):
        config.metric_specs("nope")
    with pytest.raises(ConfigError, match="model set 'nope'"):
        config.model_list("nope")


def test_load_config_accepts_bare_top_level_orientations(tmp_path):
    path = write(tmp_path, "cfg.toml", 'accuracy = "higher"\nlatency = "lower"\n')
    config = load_config(path)
    assert [spec.name for spec in config.orientations] == ["accuracy", "latency"]


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("", "declares no metrics"),
        ('metrics = "accuracy"', r"\[metrics\] must be a table"),
        ('[metrics]\naccuracy = "up"', "must be 'higher' or 'lower'"),
        (
            '[metrics]\naccuracy = "higher"\n[model_sets]\npair = ["a", "a"]',
            "contains duplicates",
        ),
        (
            '[metrics]\naccuracy = "higher"\n[model_sets]\npair = "a"',
            "must be a list of strings",
        ),
        (
            '[metrics]\naccuracy = "higher"\n[metric_sets]\nsolo = ["latency"]',
            "undeclared metrics: latency",
        ),
        (
            '[metrics]\naccuracy = "higher"\n[defaults]\nspeed = 3',
            "unknown defaults: speed",
        ),
        (
            '[metrics]\naccuracy = "higher"\n[defaults]\ntie_break = "up"',
            "tie_break must be 'asc' or 'desc'",
        ),
        (
            '[metrics]\naccuracy = "higher"\n[defaults]\ntolerance = "small"',
            "tolerance must be a number",
        ),
        (
            '[metrics]\naccuracy = "higher"\n[defaults]\ntolerance = -0.5',
            "tolerance must be non-negative",
        ),
        (
            '[metrics]\naccuracy = "higher"\n[defaults]\nflip_k = 1',
            "flip_k must be an integer >= 2",
        ),
        (
            '[metrics]\naccuracy = "higher"\n[defaults]\nflip_k = true',
            "flip_k must be an integer >= 2",
        ),
        (
            '[metrics]\naccuracy = "higher"\n[defaults]\nflip_metric = "latency"',
            "flip_metric must name a declared metric",
        ),
        (
            '[metrics]\naccuracy = "higher"\n[defaults]\ndepth = "yes"',
            "depth must be a boolean",
        ),
        ("not toml ===", "invalid TOML"),
    ],
)
def test_load_config_rejects_invalid_input(tmp_path, text, message):
    path = write(tmp_path, "cfg.toml", text)
    with pytest.raises(ConfigError, match=message):
        load_config(path)


def test_config_defaults_parse(tmp_path):
    path = write(
        tmp_path,
        "cfg.toml",
        '[metrics]\naccuracy = "higher"\n'
        "[defaults]\n"
        'tie_break = "desc"\ntolerance = 0.05\nflip_k = 7\n'
        'flip_metric = "accuracy"\ndepth = false\n',
    )
    config = load_config(path)
    assert config.tie_break is TieBreak.ALPHA_DESC
    assert config.tolerance == pytest.approx(0.05)
    assert config.flip_k == 7
    assert config.flip_metric == "accuracy"
    assert config.depth is False
