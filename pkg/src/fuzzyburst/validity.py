"""Hard-partition quality metrics and partition comparison."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import DistanceMatrix
from .fanny import MembershipMatrix, _as_membership_array


@dataclass
class HardPartition:
    """Cluster labels in [1..K] for N objects; clusters may be empty."""

    labels: np.ndarray
    k: int

    def __post_init__(self):
        self.labels = np.asarray(self.labels)
        if self.labels.ndim != 1:
            raise ValueError("labels must be a 1-D sequence")
        if not np.issubdtype(self.labels.dtype, np.integer):
            as_int = self.labels.astype(int)
            if np.any(as_int != self.labels):
                raise ValueError("labels must be integers")
            self.labels = as_int
        self.k = int(self.k)
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.labels.size and (self.labels.min() < 1 or self.labels.max() > self.k):
            raise ValueError(f"labels must lie in [1..{self.k}]")

    @property
    def n(self) -> int:
        return self.labels.size

    def sizes(self) -> np.ndarray:
        """Cluster sizes indexed 0..K-1 (size 0 for empty clusters)."""
        return np.bincount(self.labels - 1, minlength=self.k)


@dataclass
class CrossTab:
    """Contingency table of two partitions of the same objects.

    counts[a][b] counts objects in cluster a+1 of the first partition and
    cluster b+1 of the second; row_percentages are per-row (0 for empty rows).
    """

    counts: np.ndarray
    row_percentages: np.ndarray


@dataclass
class ClusterMembershipStats:
    """Top-membership summary for the objects assigned to one cluster."""

    cluster: int
    size: int
    mean: float | None
    median: float | None


@dataclass
class MembershipReport:
    """Per-cluster top-membership statistics plus the weakly-assigned count."""

    clusters: list = field(default_factory=list)
    below_half_count: int = 0
    below_half_pct: float = 0.0


def connectivity_index(partition: HardPartition, d: DistanceMatrix, L: int) -> float:
    """Neighborhood-disagreement penalty of a hard partition; lower is tighter.

    For each object the L nearest neighbors (by distance, ties toward the
    lower object index, self excluded) contribute 1/j when the j-th neighbor
    sits in a different cluster, else 0.
    """
    n = d.n
    if partition.n != n:
        raise ValueError("partition and distance matrix disagree on N")
    if not 1 <= L <= n - 1:
        raise ValueError(f"L must be in [1, {n - 1}], got {L}")
    dm = d.full()
    labels = partition.labels
    ranks = 1.0 / np.arange(1, L + 1)
    total = 0.0
    for i in range(n):
        order = np.argsort(dm[i], kind="stable")
        order = order[order != i][:L]
        total += float(ranks[labels[order] != labels[i]].sum())
    return total


def dunn_index(partition: HardPartition, d: DistanceMatrix) -> float:
    """Minimum inter-cluster separation over maximum cluster diameter.

    Separation is single linkage between clusters. When every cluster has
    zero diameter the ratio degenerates: returns +inf if the separation is
    positive, NaN if the partition also has zero separation.
    """
    if partition.k < 2:
        raise ValueError("need at least two clusters")
    n = d.n
    if partition.n != n:
        raise ValueError("partition and distance matrix disagree on N")
    sizes = partition.sizes()
    if np.any(sizes == 0):
        empty = int(np.flatnonzero(sizes == 0)[0]) + 1
        raise ValueError(f"cluster {empty} is empty")
    dm = d.full()
    labels = partition.labels
    members = [np.flatnonzero(labels == c + 1) for c in range(partition.k)]

    max_diam = 0.0
    for idx in members:
        if idx.size > 1:
            max_diam = max(max_diam, float(dm[np.ix_(idx, idx)].max()))
    min_sep = math.inf
    for a in range(partition.k - 1):
        for b in range(a + 1, partition.k):
            min_sep = min(min_sep, float(dm[np.ix_(members[a], members[b])].min()))

    if max_diam == 0.0:
        return math.inf if min_sep > 0.0 else math.nan
    return min_sep / max_diam


def cross_tabulate(a: HardPartition, b: HardPartition) -> CrossTab:
    """Contingency counts of partition ``a`` (rows) against ``b`` (columns)."""
    if a.n != b.n:
        raise ValueError(f"partitions disagree on N: {a.n} vs {b.n}")
    counts = np.zeros((a.k, b.k), dtype=int)
    np.add.at(counts, (a.labels - 1, b.labels - 1), 1)
    row_sums = counts.sum(axis=1)
    pct = np.zeros_like(counts, dtype=float)
    nonzero = row_sums > 0
    pct[nonzero] = 100.0 * counts[nonzero] / row_sums[nonzero, None]
    return CrossTab(counts=counts, row_percentages=pct)


def membership_report(m, labels: HardPartition) -> MembershipReport:
    """Summarize each object's membership in its assigned cluster.

    Per cluster: size, mean and median of m[i, label(i)] over the assigned
    objects (None when empty). Globally: how many objects sit in their own
    cluster with membership below 0.5, as a count and percentage of N.
    """
    marr = _as_membership_array(m)
    if labels.n != marr.shape[0]:
        raise ValueError("partition and memberships disagree on N")
    if labels.k > marr.shape[1]:
        raise ValueError("partition has more clusters than the membership matrix")
    top = marr[np.arange(marr.shape[0]), labels.labels - 1]
    clusters = []
    for c in range(1, labels.k + 1):
        vals = top[labels.labels == c]
        if vals.size:
            clusters.append(
                ClusterMembershipStats(c, int(vals.size), float(vals.mean()), float(np.median(vals)))
            )
        else:
            clusters.append(ClusterMembershipStats(c, 0, None, None))
    below = int((top < 0.5).sum())
    return MembershipReport(
        clusters=clusters,
        below_half_count=below,
        below_half_pct=100.0 * below / marr.shape[0],
    )
