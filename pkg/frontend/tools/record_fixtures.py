"""Record real API responses as JSON fixtures for the UI tests.

Builds two small deterministic projects (a demo project with planted effects
and an injected outlier sample, and an identical-cohorts twin of it), drives
the actual server in-process, and captures every request the UI tests replay.
Re-run after changing the engine or the demo spec:

    python frontend/tools/record_fixtures.py
"""

import json
from pathlib import Path

import numpy as np
from fastapi.testclient import TestClient

from cohortdiff.model import Cohort, Project, Sample
from cohortdiff.server import create_app
from cohortdiff.synthetic import SyntheticSpec, generate_synthetic

OUT_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

DEMO_SPEC = SyntheticSpec(
    samples_a=5,
    samples_b=4,
    cells_min=120,
    cells_max=220,
    n_types=4,
    radius=25.0,
    mean_neighbors=6.0,
    enriched_type=1,
    enrichment=1.6,
    pair=(1, 2),
    pair_fraction=0.95,
    seed=20,
    label_a="hot",
    label_b="cold",
)

OUTLIER_SAMPLE = "A3"
OUTLIER_TYPE = 3  # type-03 made dominant in one cohort-A sample


def build_demo_project() -> Project:
    project = generate_synthetic(DEMO_SPEC)
    sample = project.samples[OUTLIER_SAMPLE]
    types = sample.type_ids.copy()
    rng = np.random.default_rng(99)
    flip = rng.choice(len(types), size=int(0.45 * len(types)), replace=False)
    types[flip] = OUTLIER_TYPE
    project.samples[OUTLIER_SAMPLE] = Sample(
        sample.sample_id, sample.cell_ids, sample.x, sample.y, types, sample.outlines
    )
    return project


def build_twin_project() -> Project:
    base = generate_synthetic(
        SyntheticSpec(samples_a=4, samples_b=4, cells_min=100, cells_max=160,
                      n_types=3, radius=25.0, mean_neighbors=6.0,
                      enriched_type=None, pair=None, seed=33,
                      label_a="left", label_b="right")
    )
    samples = {}
    a_ids, b_ids = [], []
    for sid in base.cohort_a.sample_ids:
        source = base.samples[sid]
        samples[sid] = source
        a_ids.append(sid)
        twin_id = f"{sid}t"
        samples[twin_id] = Sample(
            twin_id, list(source.cell_ids), source.x.copy(), source.y.copy(),
            source.type_ids.copy(),
        )
        b_ids.append(twin_id)
    return Project(
        base.catalog,
        Cohort("left", "A", tuple(a_ids)),
        Cohort("twin", "B", tuple(b_ids)),
        samples,
        base.radius,
    )


class Recorder:
    def __init__(self, client: TestClient):
        self.client = client
        self.records = []

    def get(self, path: str, params: dict):
        response = self.client.get(path, params=params)
        assert response.status_code == 200, response.text
        body = response.json()
        self.records.append(
            {"request": {"method": "GET", "path": path, "params": params}, "response": body}
        )
        return body

    def post(self, path: str, body: dict):
        response = self.client.post(path, json=body)
        assert response.status_code == 200, response.text
        payload = response.json()
        self.records.append(
            {"request": {"method": "POST", "path": path, "body": body}, "response": payload}
        )
        return payload


def record_project(project: Project, name: str, script) -> None:
    app = create_app()
    client = TestClient(app)
    app.state.session._install(project)
    recorder = Recorder(client)
    script(recorder)
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    (OUT_DIR / f"{name}.json").write_text(json.dumps(recorder.records, indent=1))
    print(f"{name}: {len(recorder.records)} exchanges")


def demo_script(rec: Recorder) -> None:
    project = rec.get("/project", {})
    labels = project["summary"]["types"]
    samples = (
        project["summary"]["cohorts"]["A"]["samples"]
        + project["summary"]["cohorts"]["B"]["samples"]
    )
    rec.get("/rank", {"metric": "silhouette", "mode": "relative"})
    rec.get("/rank", {"metric": "dunn", "mode": "relative"})
    heatmap = rec.get("/heatmap", {"variant": "difference"})
    rec.get("/heatmap", {"variant": "metric", "metric": "silhouette"})
    first_high = None
    for label in labels:
        dist = rec.get(
            "/distributions",
            {"subject": json.dumps([label]), "mode": "relative", "grid": "128"},
        )
        if first_high is None:
            for entry in dist["outliers"]["a"]["entries"]:
                if entry["flag"] == "high":
                    first_high = (entry["sample"], label)
                    break
    assert first_high is not None, "demo project lost its planted outlier"

    # the cell the linking test clicks: the difference matrix's max-|value|
    # entry (the app starts on the difference variant)
    matrix = np.array(heatmap["matrix"])
    i, j = np.unravel_index(np.abs(matrix).argmax(), matrix.shape)
    base_query = {"center": [labels[i]], "env": [labels[j]], "exclusive": False}
    base = rec.post("/query", {"query": base_query, "mode": "relative", "metric": "silhouette"})

    # the refinement the test drags: the first Remaining entry
    first = base["remaining"][0]
    if first["extension"] is None:
        extended = {**base_query, "exclusive": True}
    else:
        extended = {**base_query, "env": base_query["env"] + [first["extension"]]}
    rec.post("/query", {"query": extended, "mode": "relative", "metric": "silhouette"})

    # tissue geometry for every highlight state the linking flow passes
    # through: initial (none), after the heatmap click (base query), after
    # the drop (extended query)
    for subject in (None, base_query, extended):
        for sid in samples:
            params = {} if subject is None else {"highlight": json.dumps(subject)}
            rec.get(f"/samples/{sid}/geometry", params)
    # after the outlier tick click only that sample stays visible, with the
    # clicked plot's type set as the highlight subject (first cohort-A high
    # flag in catalog order, the same rule the linking test applies)
    outlier_sample, outlier_label = first_high
    rec.get(
        f"/samples/{outlier_sample}/geometry",
        {"highlight": json.dumps([outlier_label])},
    )


def twin_script(rec: Recorder) -> None:
    project = rec.get("/project", {})
    labels = project["summary"]["types"]
    rec.get("/rank", {"metric": "silhouette", "mode": "relative"})
    rec.get("/heatmap", {"variant": "difference"})
    for label in labels:
        rec.get("/distributions", {"subject": json.dumps([label]), "mode": "relative", "grid": "128"})
    for sid in (
        project["summary"]["cohorts"]["A"]["samples"]
        + project["summary"]["cohorts"]["B"]["samples"]
    ):
        rec.get(f"/samples/{sid}/geometry", {})


def main() -> None:
    record_project(build_demo_project(), "demo", demo_script)
    record_project(build_twin_project(), "twin", twin_script)


if __name__ == "__main__":
    main()
