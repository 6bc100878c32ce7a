"""Deterministic synthetic project generator with planted effects.

Samples are homogeneous random point patterns at a fixed local density: the
side length of each sample's square is chosen so the expected number of
neighbors within the radius stays constant across sample sizes. Two effects
can be planted, both in cohort A:

  * an enriched type: its abundance weight is multiplied, every other type
    keeps the shared base weight;
  * a co-located pair (i, j): a fraction of type-j cells is moved next to a
    random type-i cell (within the radius), leaving all type counts intact.

Everything is drawn from one seeded generator, so equal specs produce equal
projects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np

from .model import CellTypeCatalog, Cohort, Project, ProjectError, Sample


@dataclass(frozen=True)
class SyntheticSpec:
    samples_a: int = 13
    samples_b: int = 7
    cells_min: int = 2000
    cells_max: int = 5000
    n_types: int = 12
    radius: float = 20.0
    mean_neighbors: float = 8.0
    # defaults plant the enrichment on the pair's center type: the abundance
    # shift then compounds the co-localization signal instead of competing
    # with it, which keeps both planted effects detectable at once
    enriched_type: Optional[int] = 1
    enrichment: float = 1.5
    pair: Optional[tuple[int, int]] = (1, 2)
    pair_fraction: float = 0.95
    seed: int = 0
    label_a: str = "Cohort A"
    label_b: str = "Cohort B"

    @classmethod
    def from_dict(cls, raw: dict) -> "SyntheticSpec":
        known = {f: raw[f] for f in cls.__dataclass_fields__ if f in raw}
        unknown = set(raw) - set(cls.__dataclass_fields__)
        if unknown:
            raise ProjectError(f"unknown generator field '{sorted(unknown)[0]}'")
        if "pair" in known and known["pair"] is not None:
            known["pair"] = tuple(known["pair"])
        return cls(**known)

    def to_dict(self) -> dict:
        out = asdict(self)
        if out["pair"] is not None:
            out["pair"] = list(out["pair"])
        return out


def _validate(spec: SyntheticSpec) -> None:
    if spec.n_types < 1:
        raise ProjectError("generator needs at least one cell type")
    if spec.samples_a < 1 or spec.samples_b < 1:
        raise ProjectError("each cohort needs at least one sample")
    if not (1 <= spec.cells_min <= spec.cells_max):
        raise ProjectError("cells_min must be in [1, cells_max]")
    if spec.radius <= 0:
        raise ProjectError("radius must be positive", field="radius")
    if spec.mean_neighbors <= 0:
        raise ProjectError("mean_neighbors must be positive")
    if spec.enrichment <= 0:
        raise ProjectError("enrichment must be positive")
    if not (0.0 <= spec.pair_fraction <= 1.0):
        raise ProjectError("pair_fraction must be in [0, 1]")
    planted = [] if spec.enriched_type is None else [spec.enriched_type]
    if spec.pair is not None:
        if len(spec.pair) != 2:
            raise ProjectError("pair must name exactly two types")
        planted += list(spec.pair)
    for t in planted:
        if not (0 <= t < spec.n_types):
            raise ProjectError(
                f"planted type {t} outside the catalog of {spec.n_types} types"
            )


def generate_synthetic(spec: SyntheticSpec) -> Project:
    """Generate a fully validated project from the spec's seed."""
    _validate(spec)
    # one child stream per sample: planting draws in one sample can never
    # shift the base draws of another sample or of the unplanted variant
    streams = np.random.SeedSequence(spec.seed).spawn(spec.samples_a + spec.samples_b)
    catalog = CellTypeCatalog([f"type-{i:02d}" for i in range(spec.n_types)])

    base = np.full(spec.n_types, 1.0 / spec.n_types)
    weights_a = base.copy()
    if spec.enriched_type is not None:
        weights_a[spec.enriched_type] *= spec.enrichment
        weights_a /= weights_a.sum()

    samples: dict[str, Sample] = {}
    cohort_ids: dict[str, list[str]] = {"A": [], "B": []}
    width = len(str(max(spec.samples_a, spec.samples_b)))
    stream = iter(streams)
    for role, count, weights, plant_pair in (
        ("A", spec.samples_a, weights_a, spec.pair),
        ("B", spec.samples_b, base, None),
    ):
        for k in range(count):
            sid = f"{role}{k + 1:0{width}d}"
            cohort_ids[role].append(sid)
            rng = np.random.default_rng(next(stream))
            samples[sid] = _generate_sample(sid, spec, weights, plant_pair, rng)

    return Project(
        catalog,
        Cohort(spec.label_a, "A", tuple(cohort_ids["A"])),
        Cohort(spec.label_b, "B", tuple(cohort_ids["B"])),
        samples,
        spec.radius,
    )


def _generate_sample(
    sid: str,
    spec: SyntheticSpec,
    weights: np.ndarray,
    plant_pair: Optional[tuple[int, int]],
    rng: np.random.Generator,
) -> Sample:
    n = int(rng.integers(spec.cells_min, spec.cells_max + 1))
    # side length for a constant expected neighbor count n * pi r^2 / E^2
    extent = math.sqrt(n * math.pi * spec.radius**2 / spec.mean_neighbors)
    xy = rng.uniform(0.0, extent, size=(n, 2))
    types = rng.choice(spec.n_types, size=n, p=weights).astype(np.int32)
    if plant_pair is not None:
        _plant_colocalization(xy, types, plant_pair, spec, extent, rng)
    digits = len(str(n))
    cell_ids = [f"c{i:0{digits}d}" for i in range(n)]
    return Sample(sid, cell_ids, xy[:, 0], xy[:, 1], types)


def _plant_colocalization(
    xy: np.ndarray,
    types: np.ndarray,
    pair: tuple[int, int],
    spec: SyntheticSpec,
    extent: float,
    rng: np.random.Generator,
) -> None:
    """Move a fraction of type-j cells next to type-i anchors, in place.

    Type counts are untouched, so the pair shows up in co-localization but
    not in abundance.
    """
    center_type, env_type = pair
    anchors = np.nonzero(types == center_type)[0]
    movers = np.nonzero(types == env_type)[0]
    if anchors.size == 0 or movers.size == 0:
        return
    n_moved = int(math.floor(spec.pair_fraction * movers.size))
    moved = rng.permutation(movers)[:n_moved]
    for row in moved:
        anchor = int(rng.choice(anchors))
        if anchor == row:  # same-type pair: never anchor a cell to itself
            if anchors.size == 1:
                continue
            while anchor == row:
                anchor = int(rng.choice(anchors))
        d = rng.uniform(0.05, 0.85) * spec.radius
        theta = rng.uniform(0.0, 2.0 * math.pi)
        xy[row, 0] = min(max(xy[anchor, 0] + d * math.cos(theta), 0.0), extent)
        xy[row, 1] = min(max(xy[anchor, 1] + d * math.sin(theta), 0.0), extent)
