"""Independent brute-force reference implementations.

Everything in here is deliberately slow and simple: plain loops or dense
all-pairs matrices straight from the definitions, no shared code with the
package under test. Tests compare the fast implementations against these.
"""

import math

import numpy as np


def brute_force_neighbors(xs, ys, radius):
    """All-pairs neighbor lists: j in N(i) iff i != j and dist(i,j) <= radius.

    Returns a list of sorted row-index lists, one per point.
    """
    n = len(xs)
    out = [[] for _ in range(n)]
    r2 = radius * radius
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            dx = xs[i] - xs[j]
            dy = ys[i] - ys[j]
            if dx * dx + dy * dy <= r2:
                out[i].append(j)
    return out


def brute_force_neighbors_dense(xs, ys, radius):
    """All-pairs neighbor lists via one dense distance matrix (no grid)."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    d2 = (xs[:, None] - xs[None, :]) ** 2 + (ys[:, None] - ys[None, :]) ** 2
    within = d2 <= radius * radius
    np.fill_diagonal(within, False)
    return [np.nonzero(row)[0].tolist() for row in within]


def brute_force_matches(type_ids, neighbor_lists, center, env, exclusive):
    """Row indices of cells matching a microenvironment query.

    A cell matches iff its type is in `center`, every type in `env` occurs
    among its neighbors, and (if exclusive) no neighbor has a type outside
    `env`.
    """
    matched = []
    for i, t in enumerate(type_ids):
        if t not in center:
            continue
        nbr_types = {type_ids[j] for j in neighbor_lists[i]}
        if not all(e in nbr_types for e in env):
            continue
        if exclusive and any(nt not in env for nt in nbr_types):
            continue
        matched.append(i)
    return matched


def silhouette_brute(values_a, values_b):
    """Mean silhouette over both cohorts, clusters = cohorts, distance = |x-y|.

    A point alone in its cohort gets intra-distance 0; a point with
    max(a, b) == 0 scores 0.
    """
    scores = []
    for own, other in ((values_a, values_b), (values_b, values_a)):
        for idx, x in enumerate(own):
            rest = [abs(x - y) for k, y in enumerate(own) if k != idx]
            a = sum(rest) / len(rest) if rest else 0.0
            b = sum(abs(x - y) for y in other) / len(other)
            m = max(a, b)
            scores.append(0.0 if m == 0 else (b - a) / m)
    return sum(scores) / len(scores)


def dunn_brute(values_a, values_b, sentinel=1e12):
    """Min inter-cohort distance over max intra-cohort diameter."""
    inter = min(abs(a - b) for a in values_a for b in values_b)
    diam = 0.0
    for vals in (values_a, values_b):
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                diam = max(diam, abs(vals[i] - vals[j]))
    if diam == 0.0:
        return sentinel if inter > 0 else 0.0
    return inter / diam


def gaussian_mixture_density(values, bandwidth, grid):
    """Closed-form Gaussian KDE evaluated point-by-point at `grid`."""
    n = len(values)
    norm = 1.0 / (n * bandwidth * math.sqrt(2.0 * math.pi))
    out = []
    for g in grid:
        total = 0.0
        for v in values:
            z = (g - v) / bandwidth
            total += math.exp(-0.5 * z * z)
        out.append(norm * total)
    return out


def tukey_fences(values):
    """Q1/Q3 by linear interpolation and the 1.5*IQR fences."""
    s = sorted(values)
    n = len(s)

    def percentile(p):
        pos = p * (n - 1)
        lo = int(math.floor(pos))
        hi = int(math.ceil(pos))
        return s[lo] + (s[hi] - s[lo]) * (pos - lo)

    q1 = percentile(0.25)
    q3 = percentile(0.75)
    iqr = q3 - q1
    return q1, q3, q1 - 1.5 * iqr, q3 + 1.5 * iqr
