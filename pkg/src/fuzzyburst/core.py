"""Feature tables and dissimilarity matrices shared by the clustering stack."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import pdist, squareform


@dataclass
class FeatureTable:
    """An N x p table of finite real-valued features.

    Parameters
    ----------
    values : (N, p) array of finite floats
        Feature values, one row per object.
    column_names : sequence of str, length p
        Names of the feature columns.
    row_ids : sequence, length N
        Identifiers for the rows (e.g. catalog trigger numbers).
    """

    values: np.ndarray
    column_names: tuple = ()
    row_ids: tuple = ()

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise ValueError("values must be a 2-D array")
        n, p = self.values.shape
        if n < 1 or p < 1:
            raise ValueError("empty input: need at least one row and one column")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("values contain NaN or infinity")
        if not self.column_names:
            self.column_names = tuple(f"x{j}" for j in range(p))
        else:
            self.column_names = tuple(self.column_names)
        if not self.row_ids:
            self.row_ids = tuple(range(n))
        else:
            self.row_ids = tuple(self.row_ids)
        if len(self.column_names) != p:
            raise ValueError(f"expected {p} column names, got {len(self.column_names)}")
        if len(self.row_ids) != n:
            raise ValueError(f"expected {n} row ids, got {len(self.row_ids)}")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


class DistanceMatrix:
    """Symmetric nonnegative N x N dissimilarity matrix with zero diagonal.

    Only the packed lower triangle is stored (length N*(N-1)/2, same layout as
    :func:`scipy.spatial.distance.pdist`); symmetry and the zero diagonal hold
    exactly in the expanded view by construction.
    """

    def __init__(self, condensed, n: int):
        condensed = np.asarray(condensed, dtype=float).ravel()
        if n < 1:
            raise ValueError("need at least one object")
        expected = n * (n - 1) // 2
        if condensed.size != expected:
            raise ValueError(
                f"condensed length {condensed.size} does not match n={n} "
                f"(expected {expected})"
            )
        if not np.all(np.isfinite(condensed)):
            raise ValueError("distances contain NaN or infinity")
        if condensed.size and condensed.min() < 0:
            raise ValueError("distances must be nonnegative")
        self._condensed = condensed
        self._n = n

    @classmethod
    def from_square(cls, d) -> "DistanceMatrix":
        """Build from a full square matrix, checking symmetry and zero diagonal."""
        d = np.asarray(d, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("expected a square matrix")
        if not np.all(np.isfinite(d)):
            raise ValueError("distances contain NaN or infinity")
        if np.any(np.diag(d) != 0.0):
            raise ValueError("diagonal must be exactly zero")
        if not np.array_equal(d, d.T):
            raise ValueError("matrix is not symmetric")
        n = d.shape[0]
        iu = np.triu_indices(n, k=1)
        return cls(d[iu], n)

    @property
    def n(self) -> int:
        return self._n

    @property
    def condensed(self) -> np.ndarray:
        """Packed strict upper/lower triangle in pdist order (read-only view)."""
        v = self._condensed.view()
        v.flags.writeable = False
        return v

    def full(self) -> np.ndarray:
        """Expand to the full symmetric N x N array (fresh copy)."""
        if self._n == 1:
            return np.zeros((1, 1))
        return squareform(self._condensed)

    def value(self, i: int, j: int) -> float:
        """Single entry d(i, j)."""
        if not (0 <= i < self._n and 0 <= j < self._n):
            raise IndexError("object index out of range")
        if i == j:
            return 0.0
        if i > j:
            i, j = j, i
        # condensed index for the pair (i, j), i < j, in pdist row-major order
        idx = i * self._n - (i * (i + 1)) // 2 + (j - i - 1)
        return float(self._condensed[idx])


def euclidean_distance_matrix(features) -> DistanceMatrix:
    """Pairwise Euclidean distances between the rows of a feature table.

    Parameters
    ----------
    features : FeatureTable or (N, p) array
        Input rows; must be finite with at least one row.

    Returns
    -------
    DistanceMatrix
        d(i, j) = sqrt(sum_c (x_ic - x_jc)^2).
    """
    values = features.values if isinstance(features, FeatureTable) else np.asarray(features, float)
    if values.ndim != 2 or values.size == 0:
        raise ValueError("empty input")
    if not np.all(np.isfinite(values)):
        raise ValueError("features contain NaN or infinity")
    return DistanceMatrix(pdist(values, metric="euclidean"), values.shape[0])


def standardize_columns(features: FeatureTable) -> FeatureTable:
    """Rescale each column to mean 0 and sample standard deviation 1.

    The standard deviation uses the N-1 denominator. A constant column (or a
    single-row table, where the sample sd is undefined) is an error naming the
    offending column.
    """
    x = features.values
    if x.shape[0] < 2:
        raise ValueError(
            f"column '{features.column_names[0]}' is constant: "
            "cannot standardize fewer than two rows"
        )
    mu = x.mean(axis=0)
    sd = x.std(axis=0, ddof=1)
    bad = np.flatnonzero(sd == 0.0)
    if bad.size:
        raise ValueError(f"column '{features.column_names[bad[0]]}' is constant (sd = 0)")
    return FeatureTable((x - mu) / sd, features.column_names, features.row_ids)
