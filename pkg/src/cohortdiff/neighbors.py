"""Per-cell microenvironment index: all cells within the project radius.

Membership is inclusive (distance <= radius, centroid to centroid) and only
ever within one sample. The index is built with a uniform grid whose bucket
size equals the radius, so every potential neighbor of a cell sits in the
3x3 block of buckets around it; candidate lookup is vectorized with one
searchsorted pass per block offset.

Neighbor lists are stored CSR-style in row order. Rows follow the sample's
canonical cell order (sorted by cell id), which makes every derived output
deterministic regardless of construction order.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .model import Project, ProjectError, Sample


class SampleIndex:
    """Neighbor lists and per-cell neighbor-type histograms for one sample."""

    def __init__(self, cell_ids: list[str], indptr: np.ndarray, indices: np.ndarray,
                 type_hist: np.ndarray):
        self.cell_ids = cell_ids
        self.indptr = indptr          # (n+1,) int64
        self.indices = indices        # (total,) int32, sorted within each row
        self.type_hist = type_hist    # (n, T) int32, row sums == neighbor counts
        self._row: dict[str, int] | None = None

    @property
    def n_cells(self) -> int:
        return len(self.cell_ids)

    def row_of(self, cell_id: str) -> int:
        if self._row is None:
            self._row = {cid: i for i, cid in enumerate(self.cell_ids)}
        try:
            return self._row[cell_id]
        except KeyError:
            raise ProjectError(f"unknown cell '{cell_id}'") from None

    def row_neighbors(self, row: int) -> np.ndarray:
        return self.indices[self.indptr[row]:self.indptr[row + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)


class NeighborhoodIndex:
    """Immutable per-sample neighbor index for one (project, radius)."""

    def __init__(self, radius: float, by_sample: dict[str, SampleIndex]):
        self.radius = radius
        self.by_sample = by_sample

    def sample_index(self, sample_id: str) -> SampleIndex:
        try:
            return self.by_sample[sample_id]
        except KeyError:
            raise ProjectError(f"unknown sample '{sample_id}'") from None


def build_index(project: Project) -> NeighborhoodIndex:
    """Compute neighbor lists for every cell of every sample."""
    n_types = project.n_types
    by_sample = {}
    for sid, sample in project.samples.items():
        by_sample[sid] = _build_sample_index(sample, project.radius, n_types)
    return NeighborhoodIndex(project.radius, by_sample)


def _build_sample_index(sample: Sample, radius: float, n_types: int) -> SampleIndex:
    n = sample.n_cells
    src, dst = _radius_pairs(sample.x, sample.y, radius)
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    counts = np.bincount(src, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    hist_flat = np.bincount(
        src.astype(np.int64) * n_types + sample.type_ids[dst],
        minlength=n * n_types,
    )
    type_hist = hist_flat.reshape(n, n_types).astype(np.int32)
    return SampleIndex(sample.cell_ids, indptr, dst.astype(np.int32), type_hist)


def _radius_pairs(x: np.ndarray, y: np.ndarray, radius: float) -> tuple[np.ndarray, np.ndarray]:
    """All ordered pairs (i, j), i != j, with euclidean(i, j) <= radius."""
    n = len(x)
    empty = np.zeros(0, dtype=np.int64)
    if n <= 1:
        return empty, empty
    inv = 1.0 / radius
    gx = np.floor(x * inv).astype(np.int64)
    gy = np.floor(y * inv).astype(np.int64)
    gx -= gx.min()
    gy -= gy.min()
    # shift gy by 1 and pad the stride so probes one bucket off the edge
    # cannot collide with a real key
    width = int(gy.max()) + 3
    key = gx * width + gy + 1
    order = np.argsort(key, kind="stable")
    sorted_keys = key[order]
    r2 = radius * radius
    src_parts, dst_parts = [], []
    cells = np.arange(n, dtype=np.int64)
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            probe = key + (dx * width + dy)
            left = np.searchsorted(sorted_keys, probe, side="left")
            right = np.searchsorted(sorted_keys, probe, side="right")
            counts = right - left
            total = int(counts.sum())
            if total == 0:
                continue
            src = np.repeat(cells, counts)
            run_starts = np.cumsum(counts) - counts
            within = np.arange(total, dtype=np.int64) - np.repeat(run_starts, counts)
            dst = order[np.repeat(left, counts) + within]
            ddx = x[src] - x[dst]
            ddy = y[src] - y[dst]
            keep = (ddx * ddx + ddy * ddy <= r2) & (src != dst)
            src_parts.append(src[keep])
            dst_parts.append(dst[keep])
    if not src_parts:
        return empty, empty
    return np.concatenate(src_parts), np.concatenate(dst_parts)


def neighbors_of(index: NeighborhoodIndex, sample_id: str, cell_id: str) -> list[str]:
    """Sorted neighbor cell ids of one cell."""
    sidx = index.sample_index(sample_id)
    row = sidx.row_of(cell_id)
    return [sidx.cell_ids[j] for j in sidx.row_neighbors(row)]


def project_content_hash(project: Project) -> str:
    """Stable digest of catalog, cohorts and cell tables (radius excluded)."""
    h = hashlib.sha256()
    h.update(json.dumps(project.catalog.labels).encode())
    for cohort in (project.cohort_a, project.cohort_b):
        h.update(json.dumps([cohort.label, cohort.role, list(cohort.sample_ids)]).encode())
    for sid in sorted(project.samples):
        sample = project.samples[sid]
        h.update(sid.encode())
        h.update(json.dumps(sample.cell_ids).encode())
        h.update(sample.x.tobytes())
        h.update(sample.y.tobytes())
        h.update(sample.type_ids.tobytes())
    return h.hexdigest()


def save_index(index: NeighborhoodIndex, project: Project, path: str | Path) -> None:
    """Dump the index to an npz cache keyed by content hash and radius."""
    arrays = {
        "__meta__": np.frombuffer(
            json.dumps(
                {
                    "hash": project_content_hash(project),
                    "radius": index.radius,
                    "samples": sorted(index.by_sample),
                }
            ).encode(),
            dtype=np.uint8,
        )
    }
    for sid, sidx in index.by_sample.items():
        arrays[f"{sid}/indptr"] = sidx.indptr
        arrays[f"{sid}/indices"] = sidx.indices
        arrays[f"{sid}/hist"] = sidx.type_hist
    np.savez_compressed(path, **arrays)


def load_index(path: str | Path, project: Project) -> NeighborhoodIndex:
    """Reload a cached index; rejects caches built for different content or radius."""
    with np.load(path) as data:
        meta = json.loads(bytes(data["__meta__"]).decode())
        if meta["hash"] != project_content_hash(project):
            raise ProjectError("index cache was built for different project content")
        if meta["radius"] != project.radius:
            raise ProjectError("index cache was built for a different radius")
        by_sample = {}
        for sid in meta["samples"]:
            by_sample[sid] = SampleIndex(
                project.samples[sid].cell_ids,
                data[f"{sid}/indptr"],
                data[f"{sid}/indices"],
                data[f"{sid}/hist"],
            )
    return NeighborhoodIndex(meta["radius"], by_sample)
