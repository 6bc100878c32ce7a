"""Acceptance suite: every criterion at its stated tolerance, one summary
line per criterion at the end of the run."""

import math
import time

import numpy as np
import pytest

from cohortdiff.microenv import (
    MicroQuery,
    count_matches,
    difference_heatmap,
    frequency_matrix,
    metric_heatmap,
)
from cohortdiff.neighbors import build_index
from cohortdiff.outliers import flag_outliers
from cohortdiff.stats import (
    DistributionPair,
    dunn_index,
    kde,
    rank_subjects,
    silhouette_score,
)
from cohortdiff.synthetic import SyntheticSpec, generate_synthetic

import oracles
from conftest import identical_cohorts_project, random_project, swap_cohorts


# ---------------------------------------------------------------------------
# shared random corpus: 200 samples (<= 2,000 cells, T <= 20) across 40
# projects with random radii, with dense-matrix oracle neighbor lists
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def corpus():
    rng = np.random.default_rng(20260811)
    projects = []
    for k in range(40):
        n_types = int(rng.integers(2, 21))
        project = random_project(
            rng,
            n_a=2,
            n_b=3,
            n_types=n_types,
            radius=float(rng.uniform(0.5, 20.0)),
            n_min=2,
            n_max=2000,
            extent=float(rng.uniform(30.0, 150.0)),
        )
        index = build_index(project)
        oracle_lists = {
            sid: oracles.brute_force_neighbors_dense(
                project.samples[sid].x, project.samples[sid].y, project.radius
            )
            for sid in project.sample_ids
        }
        projects.append((project, index, oracle_lists))
    return projects


def random_query(rng, n_types):
    center = frozenset(
        rng.choice(n_types, size=int(rng.integers(1, min(3, n_types) + 1)), replace=False).tolist()
    )
    env_size = int(rng.integers(0, min(3, n_types) + 1))
    env = frozenset(rng.choice(n_types, size=env_size, replace=False).tolist())
    return MicroQuery(center, env, bool(rng.integers(0, 2)))


def test_query_oracle_equivalence(corpus, acceptance):
    acceptance("query-oracle equivalence: 500 random queries, 0 mismatches, < 60 s")
    rng = np.random.default_rng(7)
    start = time.time()
    mismatches = 0
    for _ in range(500):
        project, index, oracle_lists = corpus[int(rng.integers(0, len(corpus)))]
        sid = project.sample_ids[int(rng.integers(0, len(project.sample_ids)))]
        sample = project.samples[sid]
        query = random_query(rng, project.n_types)
        _, ids = count_matches(sample, index, query)
        rows = oracles.brute_force_matches(
            sample.type_ids.tolist(), oracle_lists[sid],
            query.center, query.env, query.exclusive,
        )
        if ids != [sample.cell_ids[r] for r in rows]:
            mismatches += 1
    elapsed = time.time() - start
    assert mismatches == 0
    assert elapsed < 60.0


def test_neighborhood_oracle_equivalence(corpus, acceptance):
    acceptance("neighborhood-oracle equivalence: grid == brute force; symmetry on 10,000 point sets")
    for project, index, oracle_lists in corpus:
        for sid in project.sample_ids:
            sidx = index.by_sample[sid]
            got = [sidx.row_neighbors(i).tolist() for i in range(sidx.n_cells)]
            assert got == oracle_lists[sid]

    rng = np.random.default_rng(99)
    checked = 0
    for batch in range(10):
        project = random_project(
            rng, n_a=500, n_b=500, n_types=3,
            radius=float(rng.uniform(1.0, 30.0)), n_min=2, n_max=40,
            extent=40.0,
        )
        index = build_index(project)
        for sidx in index.by_sample.values():
            n = sidx.n_cells
            src = np.repeat(np.arange(n), np.diff(sidx.indptr))
            dst = sidx.indices.astype(np.int64)
            assert np.all(src != dst)  # irreflexive
            fwd = np.sort(src * n + dst)
            rev = np.sort(dst * n + src)
            assert np.array_equal(fwd, rev)  # symmetric
            checked += 1
    assert checked == 10_000


def test_frequency_matrix_normalization(corpus, fixture_project, acceptance):
    acceptance("frequency matrix: unflagged rows sum to 1 +- 1e-9; fixture F[A][B] = F[B][A] = 1")
    for project, index, _ in corpus:
        for cohort in (project.cohort_a, project.cohort_b):
            fm = frequency_matrix(cohort, project, index)
            sums = fm.values.sum(axis=1)
            assert np.all(np.abs(sums[~fm.flagged_rows] - 1.0) <= 1e-9)
            assert np.all(sums[fm.flagged_rows] == 0.0)
    fm = frequency_matrix(fixture_project.cohort_a, fixture_project, build_index(fixture_project))
    assert fm.values[0][1] == 1.0
    assert fm.values[1][0] == 1.0


def test_heatmap_antisymmetry(acceptance):
    acceptance("difference heatmap: cohort swap negates exactly on 50 projects; identical cohorts ~ 0")
    rng = np.random.default_rng(11)
    for _ in range(50):
        project = random_project(rng, n_types=int(rng.integers(2, 8)),
                                 n_min=10, n_max=150)
        index = build_index(project)
        fwd = difference_heatmap(project, index).matrix
        rev = difference_heatmap(swap_cohorts(project), index).matrix
        assert np.array_equal(rev, -fwd)
    base = random_project(np.random.default_rng(12), n_types=5, n_min=20, n_max=100)
    twin = identical_cohorts_project(base)
    matrix = difference_heatmap(twin, build_index(twin)).matrix
    assert np.all(np.abs(matrix) < 1e-12)


def test_metric_correctness(acceptance):
    acceptance("metrics: silhouette 0.85641 +- 1e-5, dunn 6.0; ranges on 1,000 random pairs")
    assert abs(silhouette_score([1, 2], [8, 9]) - 0.85641) <= 1e-5
    assert dunn_index([1, 2], [8, 9]) == 6.0
    assert silhouette_score([0, 0], [10, 10]) == 1.0
    rng = np.random.default_rng(13)
    for _ in range(1000):
        a = rng.uniform(-10, 10, int(rng.integers(1, 15)))
        b = rng.uniform(-10, 10, int(rng.integers(1, 15)))
        s = silhouette_score(a, b)
        d = dunn_index(a, b)
        assert -1.0 <= s <= 1.0
        assert d >= 0.0
        assert s == pytest.approx(oracles.silhouette_brute(a.tolist(), b.tolist()), abs=1e-12)


def test_kde_properties(acceptance):
    acceptance("kde: integral in [0.99, 1.01] x 1,000; translation equivariance 1e-9; peak 1e-9")
    rng = np.random.default_rng(14)
    for _ in range(1000):
        values = rng.normal(rng.uniform(-5, 5), rng.uniform(0.1, 4),
                            int(rng.integers(1, 30)))
        curve = kde(values)
        area = np.trapezoid(curve.density, curve.grid)
        assert 0.99 <= area <= 1.01
    values = rng.uniform(0, 10, 20)
    base = kde(values, grid_size=200)
    shifted = kde(values + 2.5, grid_size=200)
    assert np.allclose(shifted.density, base.density, atol=1e-9)
    curve = kde([3.0], grid_size=101)
    peak = 1.0 / (curve.bandwidth * math.sqrt(2 * math.pi))
    assert abs(curve.density[50] - peak) <= 1e-9


def test_planted_pattern_detection(acceptance):
    acceptance("planted patterns: enriched type first (both metrics) and pair is max-|value| "
               "heatmap cell, >= 19/20 seeds, < 30 s")
    start = time.time()
    successes = 0
    for seed in range(20):
        spec = SyntheticSpec(seed=seed)
        project = generate_synthetic(spec)
        index = build_index(project)
        subjects = [{t} for t in range(spec.n_types)]
        planted_type = frozenset({spec.enriched_type})
        # the pair is planted as an unordered co-localization: either directed
        # entry of the matrix detects it
        pair_cells = {spec.pair, spec.pair[::-1]}
        ok = all(
            rank_subjects(project, subjects, metric, "relative")[0][0] == planted_type
            for metric in ("silhouette", "dunn")
        )
        for metric in ("silhouette", "dunn"):
            matrix = metric_heatmap(project, index, metric).matrix
            argmax = np.unravel_index(np.abs(matrix).argmax(), matrix.shape)
            ok = ok and (int(argmax[0]), int(argmax[1])) in pair_cells
        successes += ok
    elapsed = time.time() - start
    assert successes >= 19
    assert elapsed < 30.0


def test_outlier_fixture(acceptance):
    acceptance("outliers: cohort [1, 2, 2, 3, 16] flags exactly 16 at fence 4.5")
    pair = DistributionPair(
        frozenset({0}), "absolute",
        tuple((f"A{i}", float(v)) for i, v in enumerate([1, 2, 2, 3, 16])),
        tuple((f"B{i}", 1.0) for i in range(4)),
    )
    report = flag_outliers(pair)
    assert report.cohort_a.fences.high == 4.5
    flagged = [(sid, val) for sid, val, flag in report.cohort_a.entries if flag != "none"]
    assert flagged == [("A4", 16.0)]


def test_scale_target(acceptance):
    acceptance("scale: ~400k cells / 47 samples indexes < 10 s, single query < 500 ms")
    spec = SyntheticSpec(samples_a=19, samples_b=28, cells_min=6000, cells_max=11000,
                         n_types=60, seed=4)
    project = generate_synthetic(spec)
    total = project.total_cells()
    assert 300_000 <= total <= 500_000
    start = time.time()
    index = build_index(project)
    build_elapsed = time.time() - start
    assert build_elapsed < 10.0
    query = MicroQuery(frozenset({1}), frozenset({2, 3}), False)
    start = time.time()
    for sid in project.sample_ids:
        count_matches(project.samples[sid], index, query)
    query_elapsed = time.time() - start
    assert query_elapsed < 0.5


def test_monotonicity_suite(corpus, acceptance):
    acceptance("monotonicity: env-superset, exclusivity bound, center disjunction, 0 violations")
    rng = np.random.default_rng(15)
    violations = 0
    for project, index, _ in corpus:
        n_types = project.n_types
        for sid in project.sample_ids:
            sample = project.samples[sid]
            query = random_query(rng, n_types)
            base = MicroQuery(query.center, query.env, False)
            n_base = count_matches(sample, index, base)[0]
            extra = int(rng.integers(0, n_types))
            if count_matches(sample, index, MicroQuery(base.center, base.env | {extra}, False))[0] > n_base:
                violations += 1
            if count_matches(sample, index, base.as_exclusive())[0] > n_base:
                violations += 1
            if n_types >= 2:
                i, j = rng.choice(n_types, size=2, replace=False).tolist()
                split = (
                    count_matches(sample, index, MicroQuery({i}, base.env, False))[0]
                    + count_matches(sample, index, MicroQuery({j}, base.env, False))[0]
                )
                union = count_matches(sample, index, MicroQuery({i, j}, base.env, False))[0]
                if union != split:
                    violations += 1
    assert violations == 0
