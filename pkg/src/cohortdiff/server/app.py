"""Stateless JSON API over one loaded project.

One project is resident per server instance. Loading swaps an immutable
(project, index, revision) snapshot under a lock, so readers never observe a
half-built index; every GET is a pure function of the snapshot revision and
its query string.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Optional

from fastapi import Body, FastAPI, Query
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .. import serialize
from ..ingest import load_project, project_from_config, project_summary
from ..microenv import (
    DIFFERENCE,
    METRIC_SIGNED,
    MicroQuery,
    count_matches,
    difference_heatmap,
    matches_by_sample,
    metric_heatmap,
    remaining_plots,
)
from ..model import Project, ProjectError
from ..neighbors import NeighborhoodIndex, build_index
from ..outliers import flag_outliers
from ..stats import (
    DEFAULT_GRID_SIZE,
    RELATIVE,
    SILHOUETTE,
    check_metric,
    check_mode,
    distribution,
    kde,
    rank_subjects,
)
from . import schemas


class NoProjectError(RuntimeError):
    pass


class Session:
    """Holds the loaded project and its index; swap is atomic."""

    def __init__(self):
        self._lock = threading.Lock()
        self._snapshot: Optional[tuple[Project, NeighborhoodIndex, int]] = None
        self._revision = 0
        self.default_metric = SILHOUETTE
        self.default_mode = RELATIVE

    def load_config(self, config: dict, base_dir: str = ".") -> tuple[Project, NeighborhoodIndex, int]:
        project = project_from_config(config, base_dir)
        return self._install(project)

    def load_path(self, path: str | Path) -> tuple[Project, NeighborhoodIndex, int]:
        return self._install(load_project(path))

    def _install(self, project: Project) -> tuple[Project, NeighborhoodIndex, int]:
        index = build_index(project)
        with self._lock:
            self._revision += 1
            snapshot = (project, index, self._revision)
            self._snapshot = snapshot
        return snapshot

    def snapshot(self) -> tuple[Project, NeighborhoodIndex, int]:
        snapshot = self._snapshot
        if snapshot is None:
            raise NoProjectError("no project loaded")
        return snapshot


def _error(status: int, message: str, field: Optional[str] = None) -> JSONResponse:
    content = {"error": message}
    if field is not None:
        content["field"] = field
    return JSONResponse(status_code=status, content=content)


def _parse_subject_param(project: Project, raw: str):
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError:
        raise ProjectError("subject must be URL-encoded JSON") from None
    return serialize.subject_from_wire(project.catalog, obj)


def create_app(project_path: Optional[str] = None, ui_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="cohortdiff", version="0.1.0")
    session = Session()
    app.state.session = session
    if project_path is not None:
        session.load_path(project_path)

    @app.exception_handler(ProjectError)
    async def on_project_error(request, exc: ProjectError):
        return _error(400, str(exc), exc.field)

    @app.exception_handler(NoProjectError)
    async def on_no_project(request, exc: NoProjectError):
        return _error(409, str(exc))

    @app.post("/project", response_model=schemas.LoadResponse)
    def load(config: dict = Body(...)):
        project, _, revision = session.load_config(config)
        return {"summary": project_summary(project), "revision": revision}

    @app.get("/project", response_model=schemas.LoadResponse)
    def current_project():
        project, _, revision = session.snapshot()
        return {"summary": project_summary(project), "revision": revision}

    @app.get("/distributions", response_model=schemas.DistributionResponse)
    def distributions(
        subject: str = Query(...),
        mode: Optional[str] = None,
        grid: int = DEFAULT_GRID_SIZE,
    ):
        project, index, revision = session.snapshot()
        mode = check_mode(mode or session.default_mode)
        parsed = _parse_subject_param(project, subject)
        pair = distribution(project, index, parsed, mode)
        curves = (kde(pair.a(), grid), kde(pair.b(), grid))
        payload = serialize.distribution_payload(
            project.catalog, pair, curves, flag_outliers(pair)
        )
        payload["revision"] = revision
        return payload

    @app.get("/heatmap", response_model=schemas.HeatmapResponse)
    def heatmap(variant: str = DIFFERENCE, metric: Optional[str] = None):
        project, index, revision = session.snapshot()
        if variant == DIFFERENCE:
            result = difference_heatmap(project, index)
        elif variant == METRIC_SIGNED:
            result = metric_heatmap(project, index, check_metric(metric or session.default_metric))
        else:
            raise ProjectError(f"unknown heatmap variant '{variant}'")
        payload = serialize.heatmap_payload(project.catalog, result)
        payload["revision"] = revision
        return payload

    @app.post("/query", response_model=schemas.QueryResponse)
    def query(request: schemas.QueryRequest):
        project, index, revision = session.snapshot()
        mode = check_mode(request.mode or session.default_mode)
        metric = check_metric(request.metric or session.default_metric)
        grid = request.grid or DEFAULT_GRID_SIZE
        parsed = serialize.subject_from_wire(
            project.catalog, request.query.model_dump()
        )
        pair = distribution(project, index, parsed, mode)
        curves = (kde(pair.a(), grid), kde(pair.b(), grid))
        dist_payload = serialize.distribution_payload(
            project.catalog, pair, curves, flag_outliers(pair)
        )
        remaining = remaining_plots(project, index, parsed, mode, metric)
        return {
            "distribution": dist_payload,
            "matches": matches_by_sample(project, index, parsed),
            "remaining": serialize.remaining_payload(project.catalog, remaining, grid),
            "revision": revision,
        }

    @app.get("/samples/{sample_id}/geometry", response_model=schemas.GeometryResponse)
    def geometry(sample_id: str, highlight: Optional[str] = None):
        project, index, revision = session.snapshot()
        if sample_id not in project.samples:
            return _error(404, f"unknown sample '{sample_id}'")
        sample = project.samples[sample_id]
        highlighted: Optional[set[str]] = None
        if highlight is not None:
            parsed = _parse_subject_param(project, highlight)
            if isinstance(parsed, MicroQuery):
                _, ids = count_matches(sample, index, parsed)
                highlighted = set(ids)
            else:
                highlighted = {
                    sample.cell_ids[i]
                    for i in range(sample.n_cells)
                    if int(sample.type_ids[i]) in parsed
                }
        payload = serialize.geometry_payload(project, sample, highlighted)
        payload["revision"] = revision
        return payload

    @app.get("/rank", response_model=schemas.RankResponse)
    def rank(metric: Optional[str] = None, mode: Optional[str] = None):
        project, _, revision = session.snapshot()
        metric = check_metric(metric or session.default_metric)
        mode = check_mode(mode or session.default_mode)
        ranking = rank_subjects(
            project, [{t} for t in range(project.n_types)], metric, mode
        )
        return {
            "metric": metric,
            "mode": mode,
            "ranking": serialize.rank_payload(project.catalog, ranking),
            "revision": revision,
        }

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
