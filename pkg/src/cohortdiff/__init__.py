"""Cohort comparison engine for spatially-resolved single-cell data."""

__version__ = "0.1.0"

from .model import CellRecord, CellTypeCatalog, Cohort, Project, ProjectError, Sample
from .ingest import load_project, project_from_config, save_project
from .synthetic import SyntheticSpec, generate_synthetic
from .neighbors import NeighborhoodIndex, build_index, neighbors_of
from .stats import (
    DistributionPair,
    DensityCurve,
    abundance,
    distribution,
    kde,
    rank_subjects,
    search_types,
    separability,
)
from .microenv import (
    MicroQuery,
    count_matches,
    difference_heatmap,
    frequency_matrix,
    metric_heatmap,
    remaining_plots,
)
from .outliers import OutlierReport, flag_outliers

__all__ = [
    "CellRecord",
    "CellTypeCatalog",
    "Cohort",
    "Project",
    "ProjectError",
    "Sample",
    "load_project",
    "project_from_config",
    "save_project",
    "SyntheticSpec",
    "generate_synthetic",
    "NeighborhoodIndex",
    "build_index",
    "neighbors_of",
    "DistributionPair",
    "DensityCurve",
    "abundance",
    "distribution",
    "kde",
    "rank_subjects",
    "search_types",
    "separability",
    "MicroQuery",
    "count_matches",
    "difference_heatmap",
    "frequency_matrix",
    "metric_heatmap",
    "remaining_plots",
    "OutlierReport",
    "flag_outliers",
]
