"""Command-line interface.

Every analysis verb runs the same pipeline (ingest, deduplicate, build the
oriented table, analyze) and differs only in which report sections are
computed and emitted. Reports go to stdout as bytes so JSON output is
byte-stable across runs.
"""

from __future__ import annotations

import argparse
import os
import sys
import traceback
from dataclasses import replace

from . import __version__
from .core import TieBreak
from .errors import BenchvoteError, ConfigError
from .io import ConfigFile, deduplicate, ingest, build_table, load_config
from .suite import ALL_SECTIONS, SuiteConfig, emit_report, run_suite

_VERB_SECTIONS: dict[str, frozenset[str]] = {
    "domains": frozenset({"domains"}),
    "cycles": frozenset({"cycles"}),
    "stability": frozenset({"stability"}),
    "depth": frozenset({"majority", "depth"}),
    "report": ALL_SECTIONS,
}


def _add_common(parser: argparse.ArgumentParser, analysis: bool) -> None:
    parser.add_argument("input", help="run records (CSV or JSON lines)")
    parser.add_argument(
        "--config",
        default=os.environ.get("BENCHVOTE_CONFIG"),
        help="TOML config with metric orientations (default: $BENCHVOTE_CONFIG)",
    )
    parser.add_argument(
        "--input-format",
        choices=("csv", "jsonl"),
        default=None,
        help="override format detection by file extension",
    )
    parser.add_argument(
        "--strict",
        action="store_true",
        help="turn ingestion and selection warnings into errors",
    )
    if analysis:
        parser.add_argument(
            "--metrics",
            metavar="SET",
            default=None,
            help="named metric set from the config (default: all declared metrics)",
        )
        parser.add_argument(
            "--models",
            metavar="SET",
            default=None,
            help="named model set from the config (default: all models in the data)",
        )
        parser.add_argument(
            "--tie-break",
            choices=("asc", "desc"),
            default=None,
            help="identifier tie-break direction (default from config)",
        )
        parser.add_argument(
            "--tolerance",
            type=float,
            default=None,
            help="score-gap tolerance for cycle-search voting (default from config)",
        )
        parser.add_argument(
            "--flip-k",
            type=int,
            default=None,
            help="base set size for the flip experiment (default from config)",
        )
        parser.add_argument(
            "--flip-metric",
            default=None,
            help="metric used to pick the flip base set (default from config)",
        )
        parser.add_argument(
            "--format",
            choices=("json", "table", "plotdata"),
            default="json",
            help="report format (default: json)",
        )
        parser.add_argument(
            "--jobs",
            type=int,
            default=1,
            help="datasets analyzed in parallel (default: 1)",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="benchvote",
        description=(
            "Treat benchmark metrics as voters: check majority coherence, "
            "domain restrictions, cycles, rank flips, and representative "
            "rankings over model score tables."
        ),
    )
    parser.add_argument("--version", action="version", version=f"benchvote {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    check = sub.add_parser(
        "ingest-check", help="parse and deduplicate the input, then report counts"
    )
    _add_common(check, analysis=False)

    for verb, help_text in (
        ("domains", "single-peakedness, group separability, and distance degree"),
        ("cycles", "tolerance-voting Condorcet cycle search over metric triples"),
        ("stability", "average-rank flip experiment per dataset"),
        ("depth", "representative majority orders by commonality sharing"),
        ("report", "all analyses in one report"),
    ):
        _add_common(sub.add_parser(verb, help=help_text), analysis=True)
    return parser


def _resolve_suite_config(cfg: ConfigFile, args: argparse.Namespace) -> SuiteConfig:
    suite = SuiteConfig(
        metrics=cfg.metric_specs(args.metrics),
        models=cfg.model_list(args.models),
        tie_break=cfg.tie_break,
        tolerance=cfg.tolerance,
        flip_k=cfg.flip_k,
        flip_metric=cfg.flip_metric,
        depth=cfg.depth,
        strict=args.strict,
        jobs=args.jobs,
    )
    overrides = {}
    if args.tie_break is not None:
        overrides["tie_break"] = TieBreak(args.tie_break)
    if args.tolerance is not None:
        overrides["tolerance"] = args.tolerance
    if args.flip_k is not None:
        overrides["flip_k"] = args.flip_k
    if args.flip_metric is not None:
        overrides["flip_metric"] = args.flip_metric
    return replace(suite, **overrides) if overrides else suite


def _run_ingest_check(args: argparse.Namespace) -> int:
    records = ingest(args.input, fmt=args.input_format, strict=args.strict)
    collapsed = deduplicate(records)
    datasets = sorted({r.dataset for r in collapsed})
    models = sorted({r.model for r in collapsed})
    metrics = sorted({r.metric for r in collapsed})
    print(f"records: {len(records)} raw, {len(collapsed)} after deduplication")
    print(f"datasets ({len(datasets)}): {', '.join(datasets)}")
    print(f"models ({len(models)}): {', '.join(models)}")
    print(f"metrics ({len(metrics)}): {', '.join(metrics)}")
    if args.config:
        declared = {spec.name for spec in load_config(args.config).orientations}
        undeclared = sorted(set(metrics) - declared)
        if undeclared:
            message = f"metrics not declared in config: {', '.join(undeclared)}"
            if args.strict:
                raise ConfigError(message)
            print(f"warning: {message}")
    return 0


def _run_analysis(args: argparse.Namespace) -> int:
    if not args.config:
        raise ConfigError(
            "a config file is required (pass --config or set $BENCHVOTE_CONFIG)"
        )
    cfg = load_config(args.config)
    suite_config = _resolve_suite_config(cfg, args)
    records = deduplicate(ingest(args.input, fmt=args.input_format, strict=args.strict))
    table = build_table(
        records, suite_config.metrics, suite_config.models, strict=args.strict
    )
    report = run_suite(table, suite_config, _VERB_SECTIONS[args.verb])
    sys.stdout.buffer.write(emit_report(report, args.format))
    sys.stdout.buffer.flush()
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.verb == "ingest-check":
            return _run_ingest_check(args)
        return _run_analysis(args)
    except (BenchvoteError, OSError) as e:
        print(f"benchvote: error: {e}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
