"""Domain model: cell tables, cohorts and the validated project container.

A project is immutable once constructed; all analytics treat it as read-only
shared state. Cells within a sample are kept in a canonical order (sorted by
cell id) so that derived outputs are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np


class ProjectError(ValueError):
    """Raised for any malformed project input. `field` names the offending
    config field when one can be pinpointed."""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field


@dataclass(frozen=True)
class CellRecord:
    """One segmented cell: position in micrometres plus its type label index."""

    sample_id: str
    cell_id: str
    x: float
    y: float
    type_id: int


class CellTypeCatalog:
    """Ordered list of display labels; type ids are positions 0..T-1.

    Labels may repeat (search works on substrings), but repeated labels
    cannot be resolved back to a single id.
    """

    def __init__(self, labels: list[str]):
        if not labels:
            raise ProjectError("cell type catalog is empty", field="types")
        for i, label in enumerate(labels):
            if not isinstance(label, str) or not label:
                raise ProjectError(f"cell type label at index {i} is empty", field="types")
        self.labels: list[str] = list(labels)
        self._by_label: dict[str, list[int]] = {}
        for i, label in enumerate(self.labels):
            self._by_label.setdefault(label, []).append(i)

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other) -> bool:
        return isinstance(other, CellTypeCatalog) and self.labels == other.labels

    def label(self, type_id: int) -> str:
        return self.labels[type_id]

    def resolve(self, label: str) -> int:
        """Map a display label to its type id.

        Raises for unknown labels and for labels shared by several types
        (ambiguous references are rejected rather than silently unioned).
        """
        ids = self._by_label.get(label)
        if ids is None:
            raise ProjectError(f"unknown cell type label '{label}'")
        if len(ids) > 1:
            raise ProjectError(f"ambiguous cell type label '{label}'")
        return ids[0]

    def resolve_all(self, labels) -> set[int]:
        return {self.resolve(label) for label in labels}


class Sample:
    """One segmented, cell-typed image. Cells are stored column-wise in
    cell-id order; `outlines`, when present, covers every cell."""

    def __init__(
        self,
        sample_id: str,
        cell_ids: list[str],
        x: np.ndarray,
        y: np.ndarray,
        type_ids: np.ndarray,
        outlines: Optional[dict[str, np.ndarray]] = None,
    ):
        self.sample_id = sample_id
        self.cell_ids = cell_ids
        self.x = np.asarray(x, dtype=np.float64)
        self.y = np.asarray(y, dtype=np.float64)
        self.type_ids = np.asarray(type_ids, dtype=np.int32)
        self.outlines = outlines
        self._row: dict[str, int] = {cid: i for i, cid in enumerate(cell_ids)}

    @classmethod
    def from_records(
        cls,
        sample_id: str,
        records: list[CellRecord],
        outlines: Optional[dict[str, np.ndarray]] = None,
    ) -> "Sample":
        if not records:
            raise ProjectError(f"sample '{sample_id}' has no cells")
        seen: set[str] = set()
        for rec in records:
            if rec.cell_id in seen:
                raise ProjectError(
                    f"duplicate cell_id '{rec.cell_id}' in sample '{sample_id}'"
                )
            seen.add(rec.cell_id)
            if not (math.isfinite(rec.x) and math.isfinite(rec.y)):
                raise ProjectError(
                    f"non-finite coordinate for cell '{rec.cell_id}' in sample '{sample_id}'"
                )
        ordered = sorted(records, key=lambda r: r.cell_id)
        sample = cls(
            sample_id,
            [r.cell_id for r in ordered],
            np.array([r.x for r in ordered]),
            np.array([r.y for r in ordered]),
            np.array([r.type_id for r in ordered]),
            outlines,
        )
        if outlines is not None:
            missing = [cid for cid in sample.cell_ids if cid not in outlines]
            if missing:
                raise ProjectError(
                    f"outline missing for cell '{missing[0]}' in sample '{sample_id}'"
                )
        return sample

    @property
    def n_cells(self) -> int:
        return len(self.cell_ids)

    def row(self, cell_id: str) -> int:
        try:
            return self._row[cell_id]
        except KeyError:
            raise ProjectError(
                f"unknown cell '{cell_id}' in sample '{self.sample_id}'"
            ) from None

    def records(self) -> Iterator[CellRecord]:
        for i, cid in enumerate(self.cell_ids):
            yield CellRecord(
                self.sample_id, cid, float(self.x[i]), float(self.y[i]), int(self.type_ids[i])
            )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Sample):
            return NotImplemented
        if (
            self.sample_id != other.sample_id
            or self.cell_ids != other.cell_ids
            or not np.array_equal(self.x, other.x)
            or not np.array_equal(self.y, other.y)
            or not np.array_equal(self.type_ids, other.type_ids)
        ):
            return False
        if (self.outlines is None) != (other.outlines is None):
            return False
        if self.outlines is not None:
            if set(self.outlines) != set(other.outlines):
                return False
            return all(
                np.array_equal(self.outlines[k], other.outlines[k]) for k in self.outlines
            )
        return True


@dataclass(frozen=True)
class Cohort:
    """A named group of samples; role is the fixed comparison slot A or B."""

    label: str
    role: str
    sample_ids: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.role not in ("A", "B"):
            raise ProjectError(f"cohort role must be 'A' or 'B', got '{self.role}'")
        if not self.sample_ids:
            raise ProjectError(f"cohort '{self.label}' has no samples")
        object.__setattr__(self, "sample_ids", tuple(sorted(self.sample_ids)))


class Project:
    """Two cohorts of samples over a shared type catalog, plus the
    microenvironment radius in micrometres."""

    def __init__(
        self,
        catalog: CellTypeCatalog,
        cohort_a: Cohort,
        cohort_b: Cohort,
        samples: dict[str, Sample],
        radius: float,
    ):
        if not (isinstance(radius, (int, float)) and math.isfinite(radius) and radius > 0):
            raise ProjectError("radius must be positive", field="radius")
        if cohort_a.role != "A" or cohort_b.role != "B":
            raise ProjectError("cohorts must carry roles A and B exactly once")
        overlap = set(cohort_a.sample_ids) & set(cohort_b.sample_ids)
        if overlap:
            raise ProjectError(
                f"sample '{sorted(overlap)[0]}' assigned to both cohorts", field="cohorts"
            )
        assigned = set(cohort_a.sample_ids) | set(cohort_b.sample_ids)
        for sid in assigned:
            if sid not in samples:
                raise ProjectError(f"cohort references missing sample '{sid}'")
        for sid in samples:
            if sid not in assigned:
                raise ProjectError(f"sample '{sid}' belongs to no cohort")
        n_types = len(catalog)
        for sample in samples.values():
            bad = (sample.type_ids < 0) | (sample.type_ids >= n_types)
            if bad.any():
                row = int(np.nonzero(bad)[0][0])
                raise ProjectError(
                    f"cell '{sample.cell_ids[row]}' in sample '{sample.sample_id}' "
                    f"has type id outside the catalog"
                )
        self.catalog = catalog
        self.cohort_a = cohort_a
        self.cohort_b = cohort_b
        self.samples = samples
        self.radius = float(radius)

    @property
    def n_types(self) -> int:
        return len(self.catalog)

    @property
    def sample_ids(self) -> list[str]:
        return list(self.cohort_a.sample_ids) + list(self.cohort_b.sample_ids)

    def cohort(self, role: str) -> Cohort:
        if role == "A":
            return self.cohort_a
        if role == "B":
            return self.cohort_b
        raise ProjectError(f"unknown cohort role '{role}'")

    def cohort_of(self, sample_id: str) -> Cohort:
        if sample_id in self.cohort_a.sample_ids:
            return self.cohort_a
        if sample_id in self.cohort_b.sample_ids:
            return self.cohort_b
        raise ProjectError(f"unknown sample '{sample_id}'")

    def sample(self, sample_id: str) -> Sample:
        try:
            return self.samples[sample_id]
        except KeyError:
            raise ProjectError(f"unknown sample '{sample_id}'") from None

    def total_cells(self) -> int:
        return sum(s.n_cells for s in self.samples.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Project):
            return NotImplemented
        return (
            self.catalog == other.catalog
            and self.cohort_a == other.cohort_a
            and self.cohort_b == other.cohort_b
            and self.radius == other.radius
            and set(self.samples) == set(other.samples)
            and all(self.samples[k] == other.samples[k] for k in self.samples)
        )
