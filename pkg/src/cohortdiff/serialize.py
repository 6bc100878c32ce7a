"""JSON payload builders shared by the HTTP API and the CLI.

All type references on the wire are display labels; type ids never leave the
process. Every numeric field is finite: the Dunn sentinel is a finite number
and additionally marked with a `sentinel` flag wherever it can occur.
"""

from __future__ import annotations

from typing import Optional

from .microenv import HeatmapResult, MicroQuery, RemainingPlot, query_to_wire
from .model import CellTypeCatalog, Project, ProjectError, Sample
from .outliers import CohortOutliers, OutlierReport
from .stats import DUNN_SENTINEL, DensityCurve, DistributionPair


def subject_from_wire(catalog: CellTypeCatalog, obj):
    """A subject is either a list of type labels or a query object."""
    from .microenv import query_from_wire

    if isinstance(obj, list):
        if not obj:
            raise ProjectError("empty type set")
        return frozenset(catalog.resolve(label) for label in obj)
    if isinstance(obj, dict):
        return query_from_wire(catalog, obj)
    raise ProjectError("subject must be a list of type labels or a query object")


def subject_to_wire(catalog: CellTypeCatalog, subject):
    if isinstance(subject, MicroQuery):
        return query_to_wire(catalog, subject)
    return [catalog.label(t) for t in sorted(subject)]


def values_payload(values: tuple[tuple[str, float], ...]) -> list[dict]:
    return [{"sample": sid, "value": val} for sid, val in values]


def curve_payload(curve: DensityCurve) -> dict:
    return {
        "grid": [float(g) for g in curve.grid],
        "density": [float(d) for d in curve.density],
        "bandwidth": curve.bandwidth,
    }


def _cohort_outliers_payload(co: CohortOutliers) -> dict:
    return {
        "fences": {
            "q1": co.fences.q1,
            "q3": co.fences.q3,
            "iqr": co.fences.iqr,
            "low": co.fences.low,
            "high": co.fences.high,
        },
        "entries": [
            {"sample": sid, "value": val, "flag": flag} for sid, val, flag in co.entries
        ],
    }


def outlier_payload(report: OutlierReport) -> dict:
    return {
        "a": _cohort_outliers_payload(report.cohort_a),
        "b": _cohort_outliers_payload(report.cohort_b),
    }


def distribution_payload(
    catalog: CellTypeCatalog,
    pair: DistributionPair,
    curves: Optional[tuple[DensityCurve, DensityCurve]] = None,
    outliers: Optional[OutlierReport] = None,
) -> dict:
    out = {
        "subject": subject_to_wire(catalog, pair.subject),
        "mode": pair.mode,
        "values": {"a": values_payload(pair.values_a), "b": values_payload(pair.values_b)},
    }
    if curves is not None:
        out["curves"] = {"a": curve_payload(curves[0]), "b": curve_payload(curves[1])}
    if outliers is not None:
        out["outliers"] = outlier_payload(outliers)
    return out


def heatmap_payload(catalog: CellTypeCatalog, result: HeatmapResult) -> dict:
    out = {
        "variant": result.variant,
        "labels": list(catalog.labels),
        "matrix": [[float(v) for v in row] for row in result.matrix],
        "max_abs": result.max_abs,
    }
    if result.metric is not None:
        out["metric"] = result.metric
    if result.flagged_a is not None:
        out["flagged_rows"] = {
            "a": [catalog.label(i) for i in range(len(catalog)) if result.flagged_a[i]],
            "b": [catalog.label(i) for i in range(len(catalog)) if result.flagged_b[i]],
        }
    out["sentinels"] = [[i, j] for i, j in result.sentinels]
    return out


def rank_payload(catalog: CellTypeCatalog, ranking: list[tuple[frozenset, float]]) -> list[dict]:
    out = []
    for subject, score in ranking:
        entry = {
            "types": [catalog.label(t) for t in sorted(subject)],
            "score": score,
            "sentinel": score == DUNN_SENTINEL,
        }
        out.append(entry)
    return out


def remaining_payload(
    catalog: CellTypeCatalog,
    entries: list[RemainingPlot],
    grid_size: Optional[int] = None,
) -> list[dict]:
    """Refinement list; with a grid size each entry carries the full
    raincloud data (curves and fences), same as a Selected plot."""
    from .outliers import flag_outliers
    from .stats import kde

    out = []
    for e in entries:
        curves = None
        outliers = None
        if grid_size is not None:
            curves = (kde(e.pair.a(), grid_size), kde(e.pair.b(), grid_size))
            outliers = flag_outliers(e.pair)
        out.append(
            {
                "extension": None if e.extension is None else catalog.label(e.extension),
                "query": query_to_wire(catalog, e.query),
                "distribution": distribution_payload(catalog, e.pair, curves, outliers),
                "score": e.score,
                "sentinel": e.score == DUNN_SENTINEL,
            }
        )
    return out


def geometry_payload(
    project: Project, sample: Sample, highlighted_ids: Optional[set[str]]
) -> dict:
    cells = []
    for i, cid in enumerate(sample.cell_ids):
        cell = {
            "cell_id": cid,
            "type": project.catalog.label(int(sample.type_ids[i])),
            "x": float(sample.x[i]),
            "y": float(sample.y[i]),
            "highlighted": bool(highlighted_ids and cid in highlighted_ids),
        }
        if sample.outlines is not None:
            cell["outline"] = [[float(x), float(y)] for x, y in sample.outlines[cid]]
        cells.append(cell)
    return {
        "sample": sample.sample_id,
        "cohort": project.cohort_of(sample.sample_id).role,
        "cells": cells,
    }
