"""Principal component analysis of fuzzy membership matrices.

Because membership rows sum to 1, the centered columns satisfy one exact
linear dependence, so a K-cluster membership matrix has exactly K-1
non-degenerate principal components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fanny import MembershipMatrix, _as_membership_array
from .validity import HardPartition

# eigenvalues at or below this fraction of the largest count as degenerate
DEGENERATE_RTOL = 1e-10


def jacobi_eigh(a, max_sweeps: int = 64):
    """Eigendecomposition of a small symmetric matrix by cyclic Jacobi rotations.

    Returns (eigenvalues, eigenvectors) with eigenvalues sorted descending and
    eigenvectors in the matching columns, so a = V diag(w) V^T.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-12 * max(1.0, float(np.abs(a).max(initial=0.0)))):
        raise ValueError("matrix is not symmetric")
    n = a.shape[0]
    A = (a + a.T) / 2.0
    V = np.eye(n)
    scale = max(1.0, float(np.abs(A).max(initial=0.0)))
    for _ in range(max_sweeps):
        off = math.sqrt(float((A**2).sum() - (np.diag(A) ** 2).sum()))
        if off <= 1e-15 * scale * n:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-18 * scale:
                    A[p, q] = A[q, p] = 0.0
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * A[:, p] - s * A[:, q]
                rot_q = s * A[:, p] + c * A[:, q]
                A[:, p], A[:, q] = rot_p, rot_q
                rot_p = c * A[p, :] - s * A[q, :]
                rot_q = s * A[p, :] + c * A[q, :]
                A[p, :], A[q, :] = rot_p, rot_q
                A[p, q] = A[q, p] = 0.0
                rot_p = c * V[:, p] - s * V[:, q]
                rot_q = s * V[:, p] + c * V[:, q]
                V[:, p], V[:, q] = rot_p, rot_q
    w = np.diag(A).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


@dataclass
class PcaResult:
    """Scores and spectrum of a membership PCA.

    scores : (N, K) component scores, zero-mean per column
    eigenvalues : K covariance eigenvalues, non-increasing
    components : (K, K) orthonormal direction vectors in the columns
    explained_fraction : eigenvalue shares normalized over all K components
    explained_fraction_nondegenerate : shares normalized over the
        non-degenerate components only (zero elsewhere); this matches how the
        variance split of the K-1 informative components is usually quoted
    column_means, column_sds : the centering/scaling applied to the input
        (column_sds is None when only centering was applied)
    centered_only : True when standardization fell back to centering because
        of a constant membership column
    """

    scores: np.ndarray
    eigenvalues: np.ndarray
    components: np.ndarray
    explained_fraction: np.ndarray
    explained_fraction_nondegenerate: np.ndarray
    column_means: np.ndarray
    column_sds: np.ndarray | None
    centered_only: bool = False

    def n_nondegenerate(self) -> int:
        if self.eigenvalues[0] <= 0.0:
            return 0
        return int((self.eigenvalues > DEGENERATE_RTOL * self.eigenvalues[0]).sum())


def membership_pca(m, standardize: bool = True, allow_centering_fallback: bool = True) -> PcaResult:
    """PCA of the membership columns via the covariance eigendecomposition.

    With ``standardize`` each column is scaled to mean 0 and sample sd 1
    before the K x K covariance matrix is formed. A constant column makes
    standardization impossible: by default the analysis falls back to
    centering only (flagged on the result); pass
    ``allow_centering_fallback=False`` to make that an error. A membership
    matrix whose columns are all constant has no variance to analyze and is
    always an error.
    """
    x = _as_membership_array(m)
    n, k = x.shape
    if k < 2:
        raise ValueError("need at least two membership columns")
    if n < 2:
        raise ValueError("need at least two objects")
    means = x.mean(axis=0)
    z = x - means
    sds = x.std(axis=0, ddof=1)
    if np.all(sds == 0.0):
        raise ValueError("all membership columns are constant; nothing to analyze")
    used_sds = None
    centered_only = False
    if standardize:
        if np.any(sds == 0.0):
            if not allow_centering_fallback:
                col = int(np.flatnonzero(sds == 0.0)[0])
                raise ValueError(f"membership column {col + 1} is constant (sd = 0)")
            centered_only = True
        else:
            z = z / sds
            used_sds = sds.copy()

    cov = (z.T @ z) / (n - 1)
    eigenvalues, components = jacobi_eigh(cov)

    # deterministic sign: largest-|coordinate| entry of each direction positive
    for j in range(k):
        col = components[:, j]
        pivot = int(np.argmax(np.abs(col)))
        if col[pivot] < 0:
            components[:, j] = -col

    scores = z @ components
    clamped = np.maximum(eigenvalues, 0.0)
    total = clamped.sum()
    explained = clamped / total
    nondeg = eigenvalues > DEGENERATE_RTOL * max(eigenvalues[0], 0.0)
    explained_nd = np.zeros(k)
    if nondeg.any():
        explained_nd[nondeg] = clamped[nondeg] / clamped[nondeg].sum()

    return PcaResult(
        scores=scores,
        eigenvalues=eigenvalues,
        components=components,
        explained_fraction=explained,
        explained_fraction_nondegenerate=explained_nd,
        column_means=means,
        column_sds=used_sds,
        centered_only=centered_only,
    )


def emit_pc_scatter(p: PcaResult, labels: HardPartition) -> list:
    """Rows of (PC1 score, PC2 score, hard label) for plotting.

    Requires at least two non-degenerate components.
    """
    if p.n_nondegenerate() < 2:
        raise ValueError("fewer than 2 non-degenerate components")
    if labels.n != p.scores.shape[0]:
        raise ValueError("partition and scores disagree on N")
    return [
        (float(p.scores[i, 0]), float(p.scores[i, 1]), int(labels.labels[i]))
        for i in range(p.scores.shape[0])
    ]
