"""Pairwise co-localization matrices and microenvironment queries.

The frequency matrix F of a cohort pools, for each center type i, the types
found in the microenvironments of all type-i cells across the cohort's
samples: F[i][j] is the fraction of those pooled neighbor slots occupied by
type j. Rows whose center type contributes no neighbor slots at all are zero
and flagged.

A query describes a microenvironment pattern: a cell matches when its own
type is one of the center types, every environment type occurs among its
neighbors, and (for exclusive queries) nothing else does.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .model import CellTypeCatalog, Cohort, Project, ProjectError, Sample
from .neighbors import NeighborhoodIndex, SampleIndex
from . import stats
from .stats import DistributionPair, RELATIVE

DIFFERENCE = "difference"
METRIC_SIGNED = "metric"


@dataclass(frozen=True)
class MicroQuery:
    """Center types (any-of), environment types (all-of), exclusivity flag."""

    center: frozenset[int]
    env: frozenset[int] = frozenset()
    exclusive: bool = False

    def __post_init__(self):
        object.__setattr__(self, "center", frozenset(int(t) for t in self.center))
        object.__setattr__(self, "env", frozenset(int(t) for t in self.env))
        if not self.center:
            raise ProjectError("query center set is empty")

    def with_env(self, type_id: int) -> "MicroQuery":
        return MicroQuery(self.center, self.env | {int(type_id)}, self.exclusive)

    def as_exclusive(self) -> "MicroQuery":
        return MicroQuery(self.center, self.env, True)


def query_from_wire(catalog: CellTypeCatalog, obj) -> MicroQuery:
    """Parse the JSON wire form {"center": [...], "env": [...], "exclusive": bool}."""
    if not isinstance(obj, dict) or "center" not in obj:
        raise ProjectError("query must be an object with a 'center' list")
    center = obj["center"]
    env = obj.get("env", [])
    exclusive = obj.get("exclusive", False)
    if not isinstance(center, list) or not isinstance(env, list) or not isinstance(exclusive, bool):
        raise ProjectError("malformed query: center/env must be lists, exclusive a boolean")
    return MicroQuery(
        catalog.resolve_all(center), catalog.resolve_all(env), exclusive
    )


def query_to_wire(catalog: CellTypeCatalog, query: MicroQuery) -> dict:
    return {
        "center": [catalog.label(t) for t in sorted(query.center)],
        "env": [catalog.label(t) for t in sorted(query.env)],
        "exclusive": query.exclusive,
    }


@dataclass(frozen=True)
class FrequencyMatrix:
    """Row-stochastic neighbor-type frequencies for one cohort."""

    values: np.ndarray        # (T, T) float64, flagged rows all-zero
    flagged_rows: np.ndarray  # (T,) bool, True where no neighbor slots pooled


@dataclass(frozen=True)
class HeatmapResult:
    """Signed T x T comparison matrix plus its colormap anchor."""

    matrix: np.ndarray
    variant: str                                # difference | metric
    max_abs: float
    metric: Optional[str] = None
    flagged_a: Optional[np.ndarray] = None      # difference variant only
    flagged_b: Optional[np.ndarray] = None
    sentinels: tuple[tuple[int, int], ...] = field(default_factory=tuple)


def frequency_matrix(
    cohort: Cohort, project: Project, index: NeighborhoodIndex
) -> FrequencyMatrix:
    """Pooled-slot neighbor frequencies over the cohort's samples."""
    n_types = project.n_types
    slots = np.zeros((n_types, n_types), dtype=np.float64)
    for sid in cohort.sample_ids:
        sample = project.samples[sid]
        sidx = index.sample_index(sid)
        np.add.at(slots, sample.type_ids, sidx.type_hist.astype(np.float64))
    totals = slots.sum(axis=1)
    flagged = totals == 0.0
    values = np.divide(
        slots, totals[:, None], out=np.zeros_like(slots), where=~flagged[:, None]
    )
    return FrequencyMatrix(values, flagged)


def difference_heatmap(project: Project, index: NeighborhoodIndex) -> HeatmapResult:
    """Entrywise frequency difference, cohort A minus cohort B."""
    fa = frequency_matrix(project.cohort_a, project, index)
    fb = frequency_matrix(project.cohort_b, project, index)
    diff = fa.values - fb.values
    return HeatmapResult(
        matrix=diff,
        variant=DIFFERENCE,
        max_abs=float(np.abs(diff).max()) if diff.size else 0.0,
        flagged_a=fa.flagged_rows,
        flagged_b=fb.flagged_rows,
    )


def metric_heatmap(
    project: Project, index: NeighborhoodIndex, metric: str = stats.SILHOUETTE
) -> HeatmapResult:
    """Separability of each ordered pair query (center {i}, environment {j}),
    signed by which cohort carries the larger mean relative abundance.

    Negative silhouette scores are clamped to zero first, so "no separation"
    never reads as separation for the opposite cohort.
    """
    stats.check_metric(metric)
    n_types = project.n_types
    frac_a = _pair_fraction_stack(project, index, project.cohort_a)
    frac_b = _pair_fraction_stack(project, index, project.cohort_b)
    matrix = np.zeros((n_types, n_types), dtype=np.float64)
    sentinels = []
    mean_gap = frac_a.mean(axis=0) - frac_b.mean(axis=0)
    for i in range(n_types):
        for j in range(n_types):
            score = (
                stats.silhouette_score(frac_a[:, i, j], frac_b[:, i, j])
                if metric == stats.SILHOUETTE
                else stats.dunn_index(frac_a[:, i, j], frac_b[:, i, j])
            )
            if metric == stats.SILHOUETTE:
                score = max(score, 0.0)
            elif score == stats.DUNN_SENTINEL:
                sentinels.append((i, j))
            matrix[i, j] = np.sign(mean_gap[i, j]) * score
    return HeatmapResult(
        matrix=matrix,
        variant=METRIC_SIGNED,
        max_abs=float(np.abs(matrix).max()) if matrix.size else 0.0,
        metric=metric,
        sentinels=tuple(sentinels),
    )


def _pair_fraction_stack(
    project: Project, index: NeighborhoodIndex, cohort: Cohort
) -> np.ndarray:
    """(n_samples, T, T) stack: fraction of each sample's cells that are type i
    with at least one type-j neighbor. Equals the relative-mode value of the
    query (center {i}, env {j}, non-exclusive) for every pair at once."""
    n_types = project.n_types
    out = np.zeros((len(cohort.sample_ids), n_types, n_types), dtype=np.float64)
    for k, sid in enumerate(cohort.sample_ids):
        sample = project.samples[sid]
        sidx = index.sample_index(sid)
        present = (sidx.type_hist >= 1).astype(np.float64)
        np.add.at(out[k], sample.type_ids, present)
        out[k] /= sample.n_cells
    return out


def match_mask(sample: Sample, sidx: SampleIndex, query: MicroQuery) -> np.ndarray:
    """Boolean row mask of cells matching the query."""
    center = np.fromiter(query.center, dtype=np.int32)
    mask = np.isin(sample.type_ids, center)
    env = sorted(query.env)
    if env:
        mask &= (sidx.type_hist[:, env] >= 1).all(axis=1)
    if query.exclusive:
        degrees = sidx.degrees()
        env_neighbors = (
            sidx.type_hist[:, env].sum(axis=1) if env else np.zeros_like(degrees)
        )
        mask &= degrees == env_neighbors
    return mask


def count_matches(
    sample: Sample, index: NeighborhoodIndex, query: MicroQuery
) -> tuple[int, list[str]]:
    """Matching cells of one sample: count plus sorted cell ids."""
    sidx = index.sample_index(sample.sample_id)
    n_types = sidx.type_hist.shape[1]
    bad = [t for t in (query.center | query.env) if t < 0 or t >= n_types]
    if bad:
        raise ProjectError(f"type id {bad[0]} outside the catalog")
    mask = match_mask(sample, sidx, query)
    rows = np.nonzero(mask)[0]
    return int(rows.size), [sample.cell_ids[r] for r in rows]


def matches_by_sample(
    project: Project, index: NeighborhoodIndex, query: MicroQuery
) -> dict[str, list[str]]:
    return {
        sid: count_matches(project.samples[sid], index, query)[1]
        for sid in project.sample_ids
    }


@dataclass(frozen=True)
class RemainingPlot:
    """One exploration step away from the current query. `extension` is the
    added environment type, or None for the exclusive ("nothing else") step."""

    extension: Optional[int]
    query: MicroQuery
    pair: DistributionPair
    score: float


def remaining_plots(
    project: Project,
    index: NeighborhoodIndex,
    query: MicroQuery,
    mode: str = RELATIVE,
    metric: str = stats.SILHOUETTE,
) -> list[RemainingPlot]:
    """Distributions for every one-step refinement of the query, ordered by
    descending separability (ties: the exclusive step first, then catalog
    order of the added type)."""
    stats.check_metric(metric)
    entries = []
    steps: list[tuple[Optional[int], MicroQuery]] = [(None, query.as_exclusive())]
    steps += [
        (t, query.with_env(t)) for t in range(project.n_types) if t not in query.env
    ]
    for extension, refined in steps:
        pair = stats.distribution(project, index, refined, mode)
        entries.append(
            RemainingPlot(extension, refined, pair, stats.separability(pair, metric))
        )
    entries.sort(
        key=lambda e: (-e.score, -1 if e.extension is None else e.extension)
    )
    return entries
