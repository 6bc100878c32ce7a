"""Command line interface: batch reports, single queries, synthetic fixtures
and the API server. Exit codes: 0 success, 1 input error, 2 argument error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, serialize
from .ingest import load_project, project_summary, save_project
from .microenv import count_matches, difference_heatmap, metric_heatmap, query_from_wire
from .model import ProjectError
from .neighbors import build_index
from .outliers import flag_outliers
from .stats import METRICS, MODES, RELATIVE, SILHOUETTE, distribution, rank_subjects
from .synthetic import SyntheticSpec, generate_synthetic

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_ARGS = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cohortdiff",
        description="Compare two cohorts of segmented, cell-typed tissue samples",
    )
    parser.add_argument("--version", action="version", version=f"cohortdiff {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    report = sub.add_parser("report", help="write a full comparison report as JSON")
    report.add_argument("--project", required=True, help="project config JSON")
    report.add_argument("--metric", choices=METRICS, default=SILHOUETTE)
    report.add_argument("--mode", choices=MODES, default=RELATIVE)
    report.add_argument("--top", type=int, default=5, help="outlier sections for the top-k ranked types")
    report.add_argument("--out", required=True, help="output report path")

    query = sub.add_parser("query", help="per-sample counts for one microenvironment query")
    query.add_argument("--project", required=True, help="project config JSON")
    query.add_argument("--query", required=True, help='JSON {"center": [...], "env": [...], "exclusive": bool}')
    query.add_argument("--mode", choices=MODES, default="absolute")

    synth = sub.add_parser("synth", help="generate a synthetic project bundle")
    synth.add_argument("--spec", help="generator parameters JSON (defaults apply when omitted)")
    synth.add_argument("--seed", type=int, help="override the spec seed")
    synth.add_argument("--out-dir", required=True)

    serve = sub.add_parser("serve", help="run the HTTP API server")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--bind", default="127.0.0.1")
    serve.add_argument("--project", help="preload this project config at startup")
    serve.add_argument("--ui-dir", help="static UI assets to mount under /ui")

    return parser


def cmd_report(args) -> int:
    try:
        project = load_project(args.project)
    except ProjectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    index = build_index(project)
    singletons = [{t} for t in range(project.n_types)]
    rankings = {
        metric: serialize.rank_payload(
            project.catalog, rank_subjects(project, singletons, metric, args.mode)
        )
        for metric in METRICS
    }
    top = rank_subjects(project, singletons, args.metric, args.mode)[: args.top]
    outlier_sections = []
    for subject, score in top:
        pair = distribution(project, index, subject, args.mode)
        outlier_sections.append(
            {
                "subject": serialize.subject_to_wire(project.catalog, subject),
                "score": score,
                "outliers": serialize.outlier_payload(flag_outliers(pair)),
            }
        )
    report = {
        "tool": {"name": "cohortdiff", "version": __version__},
        "parameters": {
            "project": str(args.project),
            "metric": args.metric,
            "mode": args.mode,
            "top": args.top,
        },
        "summary": project_summary(project),
        "ranking": rankings,
        "heatmaps": {
            "difference": serialize.heatmap_payload(
                project.catalog, difference_heatmap(project, index)
            ),
            "metric": serialize.heatmap_payload(
                project.catalog, metric_heatmap(project, index, args.metric)
            ),
        },
        "outlier_sections": outlier_sections,
    }
    Path(args.out).write_text(json.dumps(report, indent=2), encoding="utf-8")
    return EXIT_OK


def cmd_query(args) -> int:
    try:
        project = load_project(args.project)
    except ProjectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        raw = json.loads(args.query)
    except json.JSONDecodeError as exc:
        print(f"error: query is not valid JSON: {exc}", file=sys.stderr)
        return EXIT_ARGS
    try:
        query = query_from_wire(project.catalog, raw)
    except ProjectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    index = build_index(project)
    for sid in project.sample_ids:
        count, _ = count_matches(project.samples[sid], index, query)
        if args.mode == "absolute":
            print(f"{sid},{count}")
        else:
            print(f"{sid},{count / project.samples[sid].n_cells}")
    return EXIT_OK


def cmd_synth(args) -> int:
    raw = {}
    if args.spec:
        spec_path = Path(args.spec)
        if not spec_path.is_file():
            print(f"error: spec file not found: {spec_path}", file=sys.stderr)
            return EXIT_ARGS
        try:
            raw = json.loads(spec_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            print(f"error: spec is not valid JSON: {exc}", file=sys.stderr)
            return EXIT_ARGS
    if args.seed is not None:
        raw["seed"] = args.seed
    try:
        spec = SyntheticSpec.from_dict(raw)
        project = generate_synthetic(spec)
    except (ProjectError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    config_path = save_project(project, args.out_dir)
    print(config_path)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    try:
        app = create_app(project_path=args.project, ui_dir=args.ui_dir)
    except ProjectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    uvicorn.run(app, host=args.bind, port=args.port)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "report": cmd_report,
        "query": cmd_query,
        "synth": cmd_synth,
        "serve": cmd_serve,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
