"""Fuzzy clustering of gamma-ray burst catalogs: FANNY-style membership
optimization on dissimilarity matrices, cluster validity indices, membership
PCA, and catalog feature derivation."""

__version__ = "0.1.0"

from .core import (
    DistanceMatrix,
    FeatureTable,
    euclidean_distance_matrix,
    standardize_columns,
)
from .fanny import (
    FannyConfig,
    FannyResult,
    MembershipMatrix,
    closest_hard_clustering,
    fanny_iterate,
    fanny_objective,
    fanny_solve,
    initial_memberships,
    normalized_dunn_partition_coefficient,
)

__all__ = [
    "DistanceMatrix",
    "FeatureTable",
    "euclidean_distance_matrix",
    "standardize_columns",
    "FannyConfig",
    "FannyResult",
    "MembershipMatrix",
    "closest_hard_clustering",
    "fanny_iterate",
    "fanny_objective",
    "fanny_solve",
    "initial_memberships",
    "normalized_dunn_partition_coefficient",
    "__version__",
]
