"""Per-sample abundance distributions, density estimation and cohort
separability scores.

A "subject" is whatever is being counted per sample: a set of type ids
(abundance of those types pooled) or a microenvironment query. Every subject
yields one value per sample, assembled into a DistributionPair with one side
per cohort.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Project, ProjectError, Sample
from .neighbors import NeighborhoodIndex

ABSOLUTE = "absolute"
RELATIVE = "relative"
MODES = (ABSOLUTE, RELATIVE)

SILHOUETTE = "silhouette"
DUNN = "dunn"
METRICS = (SILHOUETTE, DUNN)

# stands in for an infinite Dunn ratio (zero intra-cohort spread, separated
# cohorts) so sorting and serialization stay finite
DUNN_SENTINEL = 1e12

DEFAULT_GRID_SIZE = 256


@dataclass(frozen=True)
class DistributionPair:
    """Per-sample values for both cohorts, for one subject and mode."""

    subject: object
    mode: str
    values_a: tuple[tuple[str, float], ...]
    values_b: tuple[tuple[str, float], ...]

    def a(self) -> np.ndarray:
        return np.array([v for _, v in self.values_a], dtype=np.float64)

    def b(self) -> np.ndarray:
        return np.array([v for _, v in self.values_b], dtype=np.float64)

    def swapped(self) -> "DistributionPair":
        return DistributionPair(self.subject, self.mode, self.values_b, self.values_a)


@dataclass(frozen=True)
class DensityCurve:
    """Gaussian KDE sampled on a regular grid spanning the data +- 4 bandwidths."""

    grid: np.ndarray
    density: np.ndarray
    bandwidth: float


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ProjectError(f"unknown abundance mode '{mode}'")
    return mode


def check_metric(metric: str) -> str:
    if metric not in METRICS:
        raise ProjectError(f"unknown separability metric '{metric}'")
    return metric


def abundance(sample: Sample, types: set[int], mode: str = ABSOLUTE) -> float:
    """Number (or fraction) of cells in the sample whose type is in `types`."""
    check_mode(mode)
    if not types:
        raise ProjectError("empty type set")
    count = int(np.isin(sample.type_ids, np.fromiter(types, dtype=np.int32)).sum())
    if mode == ABSOLUTE:
        return float(count)
    return count / sample.n_cells


def distribution(
    project: Project,
    index: NeighborhoodIndex | None,
    subject,
    mode: str = RELATIVE,
) -> DistributionPair:
    """One value per sample of each cohort for the given subject.

    Type-set subjects need no index; microenvironment queries do.
    """
    check_mode(mode)
    from .microenv import MicroQuery, count_matches  # late: microenv builds on stats

    if isinstance(subject, MicroQuery):
        if index is None:
            raise ProjectError("microenvironment subjects require a neighborhood index")

        def value(sample: Sample) -> float:
            count, _ = count_matches(sample, index, subject)
            return count / sample.n_cells if mode == RELATIVE else float(count)

        subject_key = subject
    else:
        type_set = frozenset(int(t) for t in subject)
        if not type_set:
            raise ProjectError("empty type set")
        bad = [t for t in type_set if t < 0 or t >= project.n_types]
        if bad:
            raise ProjectError(f"type id {bad[0]} outside the catalog")

        def value(sample: Sample) -> float:
            return abundance(sample, type_set, mode)

        subject_key = type_set

    sides = []
    for cohort in (project.cohort_a, project.cohort_b):
        sides.append(
            tuple((sid, value(project.samples[sid])) for sid in cohort.sample_ids)
        )
    return DistributionPair(subject_key, mode, sides[0], sides[1])


def silverman_bandwidth(values: np.ndarray) -> float:
    """Rule-of-thumb bandwidth 0.9 * min(sd, IQR/1.34) * n^(-1/5).

    Zero-spread inputs fall back to a small positive width; a zero IQR with
    positive sd falls back to the sd alone so the bandwidth stays positive.
    """
    values = np.asarray(values, dtype=np.float64)
    sd = float(np.std(values))
    if sd == 0.0:
        return max(1e-3, 1e-3 * abs(float(values[0])))
    q1, q3 = np.percentile(values, [25.0, 75.0])
    iqr = float(q3 - q1)
    spread = sd if iqr == 0.0 else min(sd, iqr / 1.34)
    return 0.9 * spread * len(values) ** (-0.2)


def kde(values, grid_size: int = DEFAULT_GRID_SIZE) -> DensityCurve:
    """Gaussian kernel density estimate on a grid spanning the data +- 4h."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ProjectError("kde requires at least one value")
    if grid_size < 2:
        raise ProjectError("kde grid needs at least two points")
    h = silverman_bandwidth(values)
    lo = float(values.min()) - 4.0 * h
    hi = float(values.max()) + 4.0 * h
    grid = np.linspace(lo, hi, grid_size)
    z = (grid[:, None] - values[None, :]) / h
    density = np.exp(-0.5 * z * z).sum(axis=1) / (values.size * h * math.sqrt(2.0 * math.pi))
    return DensityCurve(grid, density, h)


def silhouette_score(values_a, values_b) -> float:
    """Mean silhouette with the two cohorts as clusters and distance |x - y|.

    Singletons get intra-distance 0; points with no spread at all score 0.
    """
    a = np.asarray(values_a, dtype=np.float64)
    b = np.asarray(values_b, dtype=np.float64)
    scores = []
    for own, other in ((a, b), (b, a)):
        n = own.size
        d_own = np.abs(own[:, None] - own[None, :])
        intra = d_own.sum(axis=1) / (n - 1) if n > 1 else np.zeros(n)
        inter = np.abs(own[:, None] - other[None, :]).mean(axis=1)
        denom = np.maximum(intra, inter)
        with np.errstate(invalid="ignore", divide="ignore"):
            s = np.where(denom > 0, (inter - intra) / np.where(denom > 0, denom, 1.0), 0.0)
        scores.append(s)
    return float(np.concatenate(scores).mean())


def dunn_index(values_a, values_b) -> float:
    """Min inter-cohort distance over max intra-cohort diameter.

    Zero diameter with separated cohorts returns DUNN_SENTINEL; fully
    degenerate input returns 0.
    """
    a = np.asarray(values_a, dtype=np.float64)
    b = np.asarray(values_b, dtype=np.float64)
    inter = float(np.abs(a[:, None] - b[None, :]).min())
    diameter = max(float(a.max() - a.min()), float(b.max() - b.min()))
    if diameter == 0.0:
        return DUNN_SENTINEL if inter > 0.0 else 0.0
    return inter / diameter


def separability(pair: DistributionPair, metric: str = SILHOUETTE) -> float:
    check_metric(metric)
    a, b = pair.a(), pair.b()
    if a.size == 0 or b.size == 0:
        raise ProjectError("separability needs at least one value per cohort")
    if metric == SILHOUETTE:
        return silhouette_score(a, b)
    return dunn_index(a, b)


def rank_subjects(
    project: Project,
    subjects: list[set[int]],
    metric: str = SILHOUETTE,
    mode: str = RELATIVE,
) -> list[tuple[frozenset[int], float]]:
    """Subjects ordered by descending separability; ties fall back to
    catalog order of the subject's first member type."""
    check_metric(metric)
    if not subjects:
        raise ProjectError("no subjects to rank")
    scored = []
    for subject in subjects:
        pair = distribution(project, None, subject, mode)
        scored.append((frozenset(subject), separability(pair, metric)))
    scored.sort(key=lambda item: (-item[1], tuple(sorted(item[0]))))
    return scored


def search_types(catalog, query: str) -> list[int]:
    """Case-insensitive substring matches first, then the rest; both halves
    keep catalog order."""
    needle = query.lower()
    hits = [i for i, label in enumerate(catalog.labels) if needle in label.lower()]
    misses = [i for i in range(len(catalog.labels)) if needle not in catalog.labels[i].lower()]
    return hits + misses
