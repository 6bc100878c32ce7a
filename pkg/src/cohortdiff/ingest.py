"""Project loading, validation and the on-disk bundle format.

A project bundle is a JSON config next to one CSV cell table per sample:

    config.json     {"radius": 30.0, "types": [...], "cohorts": {"A": {...}, "B": {...}},
                     "outlines": {sample_id: path, ...}}   # outlines optional
    <sample>.csv    header cell_id,x,y,type  (type is a display label)
    <sample>.json   optional outline geometry {cell_id: [[x, y], ...], ...}

Relative paths inside the config resolve against the config file's directory
(or an explicit base_dir for configs received over the wire).
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Optional

import numpy as np

from .model import CellRecord, CellTypeCatalog, Cohort, Project, ProjectError, Sample

CSV_HEADER = ["cell_id", "x", "y", "type"]


def load_project(config_path: str | Path) -> Project:
    """Load and fully validate a project bundle from its config file."""
    path = Path(config_path)
    if not path.is_file():
        raise ProjectError(f"config file not found: {path}")
    try:
        config = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ProjectError(f"config is not valid JSON: {exc}") from None
    return project_from_config(config, base_dir=path.parent)


def project_from_config(config: dict, base_dir: str | Path = ".") -> Project:
    """Build a Project from an already-parsed config document."""
    if not isinstance(config, dict):
        raise ProjectError("config must be a JSON object")
    base = Path(config.get("base_dir", base_dir))

    radius = config.get("radius")
    if radius is None:
        raise ProjectError("missing required field: radius", field="radius")
    if not isinstance(radius, (int, float)) or isinstance(radius, bool) or not math.isfinite(radius):
        raise ProjectError("radius must be a number", field="radius")
    if radius <= 0:
        raise ProjectError("radius must be positive", field="radius")

    types = config.get("types")
    if not isinstance(types, list) or not types:
        raise ProjectError("missing required field: types", field="types")
    catalog = CellTypeCatalog(types)

    cohorts_cfg = config.get("cohorts")
    if not isinstance(cohorts_cfg, dict):
        raise ProjectError("missing required field: cohorts", field="cohorts")
    for role in ("A", "B"):
        if role not in cohorts_cfg:
            raise ProjectError(f"missing cohort '{role}'", field=f"cohorts.{role}")

    outline_paths = config.get("outlines") or {}
    if not isinstance(outline_paths, dict):
        raise ProjectError("outlines must map sample ids to file paths", field="outlines")

    samples: dict[str, Sample] = {}
    cohorts: dict[str, Cohort] = {}
    for role in ("A", "B"):
        cfg = cohorts_cfg[role]
        if not isinstance(cfg, dict) or not isinstance(cfg.get("samples"), dict):
            raise ProjectError(
                f"cohort '{role}' must provide a samples mapping",
                field=f"cohorts.{role}.samples",
            )
        label = cfg.get("label", role)
        if not isinstance(label, str) or not label:
            raise ProjectError(f"cohort '{role}' label is empty", field=f"cohorts.{role}.label")
        sample_map = cfg["samples"]
        if not sample_map:
            raise ProjectError(f"cohort '{role}' has no samples", field=f"cohorts.{role}.samples")
        for sample_id, rel in sample_map.items():
            if sample_id in samples:
                raise ProjectError(
                    f"sample '{sample_id}' assigned to both cohorts", field="cohorts"
                )
            outlines = None
            if sample_id in outline_paths:
                outlines = _read_outlines(base / outline_paths[sample_id])
            samples[sample_id] = _read_cell_table(base / rel, sample_id, catalog, outlines)
        cohorts[role] = Cohort(label=label, role=role, sample_ids=tuple(sample_map))

    unknown_outline = set(outline_paths) - set(samples)
    if unknown_outline:
        raise ProjectError(
            f"outlines reference unknown sample '{sorted(unknown_outline)[0]}'",
            field="outlines",
        )
    return Project(catalog, cohorts["A"], cohorts["B"], samples, float(radius))


def _read_cell_table(
    path: Path, sample_id: str, catalog: CellTypeCatalog, outlines
) -> Sample:
    if not path.is_file():
        raise ProjectError(f"cell table not found: {path}")
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != CSV_HEADER:
            raise ProjectError(
                f"cell table {path} must start with header '{','.join(CSV_HEADER)}'"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise ProjectError(f"cell table {path} line {lineno}: expected 4 columns")
            cell_id, xs, ys, label = row
            try:
                x, y = float(xs), float(ys)
            except ValueError:
                raise ProjectError(
                    f"cell table {path} line {lineno}: bad coordinate"
                ) from None
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ProjectError(f"cell table {path} line {lineno}: non-finite coordinate")
            try:
                type_id = catalog.resolve(label)
            except ProjectError:
                raise ProjectError(
                    f"unknown cell type label '{label}' in sample '{sample_id}'"
                ) from None
            records.append(CellRecord(sample_id, cell_id, x, y, type_id))
    return Sample.from_records(sample_id, records, outlines)


def _read_outlines(path: Path) -> dict[str, np.ndarray]:
    if not path.is_file():
        raise ProjectError(f"outline file not found: {path}")
    raw = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        raise ProjectError(f"outline file {path} must be an object keyed by cell id")
    out = {}
    for cell_id, verts in raw.items():
        arr = np.asarray(verts, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 3:
            raise ProjectError(
                f"outline for cell '{cell_id}' in {path} must be a list of >= 3 [x, y] vertices"
            )
        out[cell_id] = arr
    return out


def save_project(project: Project, out_dir: str | Path) -> Path:
    """Write a project as a self-contained bundle; returns the config path.

    Reloading the written bundle reproduces the project exactly.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    config: dict = {
        "radius": project.radius,
        "types": list(project.catalog.labels),
        "cohorts": {},
    }
    outlines_cfg = {}
    for cohort in (project.cohort_a, project.cohort_b):
        sample_map = {}
        for sid in cohort.sample_ids:
            sample = project.samples[sid]
            csv_name = f"{sid}.csv"
            sample_map[sid] = csv_name
            with open(out / csv_name, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(CSV_HEADER)
                for rec in sample.records():
                    writer.writerow(
                        [rec.cell_id, repr(rec.x), repr(rec.y), project.catalog.label(rec.type_id)]
                    )
            if sample.outlines is not None:
                geo_name = f"{sid}.outlines.json"
                outlines_cfg[sid] = geo_name
                payload = {cid: arr.tolist() for cid, arr in sample.outlines.items()}
                (out / geo_name).write_text(json.dumps(payload), encoding="utf-8")
        config["cohorts"][cohort.role] = {"label": cohort.label, "samples": sample_map}
    if outlines_cfg:
        config["outlines"] = outlines_cfg
    config_path = out / "config.json"
    config_path.write_text(json.dumps(config, indent=2), encoding="utf-8")
    return config_path


def project_summary(project: Project) -> dict:
    """Compact description used by the server and the report command."""
    return {
        "types": list(project.catalog.labels),
        "radius": project.radius,
        "cohorts": {
            cohort.role: {
                "label": cohort.label,
                "samples": list(cohort.sample_ids),
                "n_samples": len(cohort.sample_ids),
                "n_cells": sum(project.samples[s].n_cells for s in cohort.sample_ids),
            }
            for cohort in (project.cohort_a, project.cohort_b)
        },
        "n_cells": project.total_cells(),
    }
