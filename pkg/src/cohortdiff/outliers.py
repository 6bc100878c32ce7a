"""Tukey-fence outlier flagging of samples within their cohort.

Quartiles use linear interpolation; values strictly outside
[Q1 - 1.5*IQR, Q3 + 1.5*IQR] are flagged. Cohorts with fewer than four
samples report their fences but never flag, since quartiles of so few
points say little.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .stats import DistributionPair

MIN_COHORT_FOR_FLAGS = 4

FLAG_LOW = "low"
FLAG_HIGH = "high"
FLAG_NONE = "none"


@dataclass(frozen=True)
class Fences:
    q1: float
    q3: float
    iqr: float
    low: float
    high: float


@dataclass(frozen=True)
class CohortOutliers:
    fences: Fences
    entries: tuple[tuple[str, float, str], ...]  # (sample_id, value, flag)


@dataclass(frozen=True)
class OutlierReport:
    subject: object
    mode: str
    cohort_a: CohortOutliers
    cohort_b: CohortOutliers


def _cohort_outliers(values: tuple[tuple[str, float], ...]) -> CohortOutliers:
    data = np.array([v for _, v in values], dtype=np.float64)
    q1, q3 = (float(q) for q in np.percentile(data, [25.0, 75.0]))
    iqr = q3 - q1
    fences = Fences(q1, q3, iqr, q1 - 1.5 * iqr, q3 + 1.5 * iqr)
    flag_enabled = data.size >= MIN_COHORT_FOR_FLAGS
    entries = []
    for sid, value in values:
        if not flag_enabled:
            flag = FLAG_NONE
        elif value < fences.low:
            flag = FLAG_LOW
        elif value > fences.high:
            flag = FLAG_HIGH
        else:
            flag = FLAG_NONE
        entries.append((sid, value, flag))
    return CohortOutliers(fences, tuple(entries))


def flag_outliers(pair: DistributionPair) -> OutlierReport:
    """Flag per-cohort outliers of a distribution pair."""
    if not pair.values_a or not pair.values_b:
        raise ValueError("each cohort needs at least one value")
    return OutlierReport(
        subject=pair.subject,
        mode=pair.mode,
        cohort_a=_cohort_outliers(pair.values_a),
        cohort_b=_cohort_outliers(pair.values_b),
    )
