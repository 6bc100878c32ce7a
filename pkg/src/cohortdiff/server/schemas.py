"""Request/response models for the HTTP API."""

from __future__ import annotations

from typing import Optional, Union

from pydantic import BaseModel


class QueryModel(BaseModel):
    center: list[str]
    env: list[str] = []
    exclusive: bool = False


class CohortSummary(BaseModel):
    label: str
    samples: list[str]
    n_samples: int
    n_cells: int


class ProjectSummary(BaseModel):
    types: list[str]
    radius: float
    cohorts: dict[str, CohortSummary]
    n_cells: int


class LoadResponse(BaseModel):
    summary: ProjectSummary
    revision: int


class SampleValue(BaseModel):
    sample: str
    value: float


class Curve(BaseModel):
    grid: list[float]
    density: list[float]
    bandwidth: float


class FencesModel(BaseModel):
    q1: float
    q3: float
    iqr: float
    low: float
    high: float


class OutlierEntry(BaseModel):
    sample: str
    value: float
    flag: str


class CohortOutliersModel(BaseModel):
    fences: FencesModel
    entries: list[OutlierEntry]


class OutliersModel(BaseModel):
    a: CohortOutliersModel
    b: CohortOutliersModel


class DistributionModel(BaseModel):
    subject: Union[QueryModel, list[str]]
    mode: str
    values: dict[str, list[SampleValue]]
    curves: Optional[dict[str, Curve]] = None
    outliers: Optional[OutliersModel] = None


class DistributionResponse(DistributionModel):
    revision: int


class HeatmapResponse(BaseModel):
    variant: str
    labels: list[str]
    matrix: list[list[float]]
    max_abs: float
    metric: Optional[str] = None
    flagged_rows: Optional[dict[str, list[str]]] = None
    sentinels: list[list[int]]
    revision: int


class QueryRequest(BaseModel):
    query: QueryModel
    mode: Optional[str] = None
    metric: Optional[str] = None
    grid: Optional[int] = None


class RemainingEntry(BaseModel):
    extension: Optional[str]
    query: QueryModel
    distribution: DistributionModel
    score: float
    sentinel: bool


class QueryResponse(BaseModel):
    distribution: DistributionModel
    matches: dict[str, list[str]]
    remaining: list[RemainingEntry]
    revision: int


class GeometryCell(BaseModel):
    cell_id: str
    type: str
    x: float
    y: float
    highlighted: bool
    outline: Optional[list[list[float]]] = None


class GeometryResponse(BaseModel):
    sample: str
    cohort: str
    cells: list[GeometryCell]
    revision: int


class RankEntry(BaseModel):
    types: list[str]
    score: float
    sentinel: bool


class RankResponse(BaseModel):
    metric: str
    mode: str
    ranking: list[RankEntry]
    revision: int


class ErrorResponse(BaseModel):
    error: str
    field: Optional[str] = None
