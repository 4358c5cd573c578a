"""Regenerate the bundled synthetic analysis fixture.

Writes tests/data/synthetic_suite.csv and tests/data/synthetic_config.toml:
five datasets over six models and three metrics, every dataset single-peaked
on a hidden axis, so the shipped fixture exercises the full report (domains,
majority, cycles, stability, depth) with a known-clean outcome. A few rows
are repeated runs so deduplication has something to collapse.

Usage: python3 tools/make_synthetic_suite.py
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from benchvote import (
    SuiteConfig,
    build_table,
    deduplicate,
    ingest,
    load_config,
    run_suite,
    single_peaked_profile,
)

SEED = 7
MODELS = ("alpha", "bravo", "charlie", "delta", "echo", "foxtrot")
DATASETS = ("algebra", "biology", "chemistry", "geometry", "history")

# value at 0-based rank position p under each metric; latency is lower-is-better
SCHEDULES = {
    "quality": lambda p: 0.95 - 0.07 * p,
    "coverage": lambda p: 0.90 - 0.05 * p,
    "latency": lambda p: 0.30 + 0.25 * p,
}

CONFIG_TEXT = """\
[metrics]
quality = "higher"
coverage = "higher"
latency = "lower"

[model_sets]
quartet = ["alpha", "bravo", "charlie", "delta"]

[metric_sets]
pair = ["quality", "latency"]

[defaults]
flip_k = 4
"""


def main() -> None:
    data_dir = Path(__file__).resolve().parent.parent / "tests" / "data"
    rng = np.random.default_rng(SEED)
    rows: list[list[str]] = []
    for dataset in DATASETS:
        profile, _ = single_peaked_profile(rng, MODELS, n=3, dataset=dataset)
        for metric, ranking in zip(SCHEDULES, profile.rankings):
            schedule = SCHEDULES[metric]
            for p, model in enumerate(ranking.sequence):
                value = f"{schedule(p):.2f}"
                rows.append([dataset, model, metric, value, "greedy", "0"])
                if dataset == DATASETS[0] and model == MODELS[0] and metric == "quality":
                    # repeated run plus an off-setting run; dedup must collapse
                    # these back to the greedy value
                    rows.append([dataset, model, metric, value, "greedy", "1"])
                    rows.append([dataset, model, metric, "0.11", "sampled", "0"])

    csv_path = data_dir / "synthetic_suite.csv"
    with csv_path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["dataset", "model", "metric", "value", "setting", "repeat"])
        writer.writerows(rows)

    config_path = data_dir / "synthetic_config.toml"
    config_path.write_text(CONFIG_TEXT)

    cfg = load_config(config_path)
    table = build_table(deduplicate(ingest(csv_path)), cfg.metric_specs())
    report = run_suite(
        table,
        SuiteConfig(
            metrics=cfg.metric_specs(),
            flip_k=cfg.flip_k,
            tie_break=cfg.tie_break,
            tolerance=cfg.tolerance,
        ),
    )
    summary = report.summary
    assert summary["analyzed"] == len(DATASETS), summary
    assert summary["single_peaked"] == len(DATASETS), summary
    assert summary["weak_transitive"] == len(DATASETS), summary
    assert summary["cyclic"] == 0, summary
    assert report.depth is not None and report.depth.evaluated, report.depth
    print(f"wrote {csv_path} ({len(rows)} data rows)")
    print(f"wrote {config_path}")
    print(f"summary: {summary}")


if __name__ == "__main__":
    main()
