"""Dissimilarity-based fuzzy clustering by iterative membership optimization.

The solver distributes N objects over K fuzzy clusters by minimizing

    sum_k [ sum_i sum_j m_ik^r m_jk^r d(i,j) ] / [ 2 sum_i m_ik^r ]

over row-stochastic membership matrices, where r > 1 controls the fuzziness.
Each sweep applies the Lagrangian stationarity update: with

    a_iv = sum_j m_jv^r d(i,j) / sum_j m_jv^r
         - sum_j sum_l m_jv^r m_lv^r d(j,l) / (2 (sum_j m_jv^r)^2)

the new row is m_iv proportional to (1/a_iv)^(1/(r-1)), normalized over v.
Objects with a_iv <= 0 for some cluster are closer than average to that
cluster and get a crisp split over all such clusters for the sweep. A
backtracking guard toward the input matrix keeps the objective non-increasing
in every sweep.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import DistanceMatrix

INIT_MODES = ("seeded-random", "deterministic-stripes")

# halvings of the step toward the candidate before declaring a stalled sweep
_MAX_BACKTRACK = 60


@dataclass
class MembershipMatrix:
    """Row-stochastic N x K matrix of fuzzy memberships.

    Every entry is nonnegative and each row sums to 1 within 1e-12.
    """

    m: np.ndarray

    def __post_init__(self):
        self.m = np.asarray(self.m, dtype=float)
        if self.m.ndim != 2:
            raise ValueError("memberships must be a 2-D array")
        if not np.all(np.isfinite(self.m)):
            raise ValueError("memberships contain NaN or infinity")
        if self.m.min(initial=0.0) < 0.0:
            raise ValueError("memberships must be nonnegative")
        row_sums = self.m.sum(axis=1)
        if np.max(np.abs(row_sums - 1.0), initial=0.0) > 1e-12:
            raise ValueError("membership rows must sum to 1 within 1e-12")

    @property
    def n(self) -> int:
        return self.m.shape[0]

    @property
    def k(self) -> int:
        return self.m.shape[1]


@dataclass
class FannyConfig:
    """Solver settings.

    k : number of clusters (>= 2, and < N at solve time)
    r : fuzzifier, must exceed 1 for the update to be defined
    max_iter : sweep budget
    tol : relative objective-change threshold for convergence
    init : "seeded-random" rows drawn uniformly from the K-simplex, or
        "deterministic-stripes" assigning object i mainly to cluster (i mod K)+1
    seed : RNG seed for the random initialization
    n_starts : independent restarts; the solve with the lowest final objective
        wins. Restarts after the first always use seeded-random initialization
        with seeds seed+1, seed+2, ... Small instances have many local minima,
        so raise this when a near-global optimum matters.
    """

    k: int
    r: float = 1.3
    max_iter: int = 500
    tol: float = 1e-9
    init: str = "seeded-random"
    seed: int = 42
    n_starts: int = 1

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 2:
            raise ValueError("k must be an integer >= 2")
        self.k = int(self.k)
        if not self.r > 1.0:
            raise ValueError("fuzzifier r must be greater than 1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")
        if self.init not in INIT_MODES:
            raise ValueError(f"init must be one of {INIT_MODES}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        self.seed = int(self.seed)
        if int(self.n_starts) != self.n_starts or self.n_starts < 1:
            raise ValueError("n_starts must be a positive integer")
        self.n_starts = int(self.n_starts)


@dataclass
class FannyResult:
    """Converged memberships plus diagnostics.

    objective_trace[0] is the objective of the initialization and each later
    entry follows one sweep, so the list is non-increasing and has
    n_iter + 1 entries. hard_labels are 1-based.
    """

    memberships: MembershipMatrix
    objective_trace: list = field(default_factory=list)
    hard_labels: np.ndarray = None
    n_iter: int = 0
    converged: bool = False
    n_dpc: float = 0.0


def _as_membership_array(m) -> np.ndarray:
    return m.m if isinstance(m, MembershipMatrix) else np.asarray(m, dtype=float)


def _as_distance_array(d) -> np.ndarray:
    return d.full() if isinstance(d, DistanceMatrix) else np.asarray(d, dtype=float)


def _objective(m: np.ndarray, d: np.ndarray, r: float) -> float:
    w = m**r
    s = w.sum(axis=0)
    t = np.einsum("ik,ik->k", w, d @ w)
    live = s > 0.0
    return float((t[live] / (2.0 * s[live])).sum())


def fanny_objective(m, d, r: float) -> float:
    """Evaluate the fuzzy clustering objective for memberships ``m``.

    Clusters with sum_i m_ik^r = 0 contribute 0. ``m`` may be a
    MembershipMatrix or plain array; ``d`` a DistanceMatrix or square array.
    """
    if not r > 1.0:
        raise ValueError("fuzzifier r must be greater than 1")
    marr = _as_membership_array(m)
    darr = _as_distance_array(d)
    if marr.shape[0] != darr.shape[0]:
        raise ValueError(
            f"dimension mismatch: {marr.shape[0]} membership rows vs "
            f"{darr.shape[0]} objects in the distance matrix"
        )
    return _objective(marr, darr, r)


def _stationarity_step(m: np.ndarray, d: np.ndarray, r: float) -> np.ndarray:
    """One simultaneous stationarity update of every membership row."""
    n, k = m.shape
    w = m**r
    s = w.sum(axis=0)
    p = d @ w
    t = np.einsum("ik,ik->k", w, p)

    a = np.full((n, k), np.inf)
    live = s > 0.0
    a[:, live] = p[:, live] / s[live] - t[live] / (2.0 * s[live] ** 2)

    out = np.empty_like(m)
    crisp = a <= 0.0
    crisp_rows = crisp.any(axis=1)
    if crisp_rows.any():
        counts = crisp[crisp_rows].sum(axis=1, dtype=float)
        out[crisp_rows] = crisp[crisp_rows] / counts[:, None]
    soft_rows = ~crisp_rows
    if soft_rows.any():
        a_soft = a[soft_rows]
        # scale by the row minimum so the powers stay in (0, 1]
        ratio = a_soft.min(axis=1, keepdims=True) / a_soft
        weights = ratio ** (1.0 / (r - 1.0))
        out[soft_rows] = weights / weights.sum(axis=1, keepdims=True)
    return out


def _guarded_sweep(m, f_in, d, r):
    """Candidate sweep with backtracking so the objective never increases.

    Returns (new_m, new_f). Falls back to the input matrix when no step along
    the segment toward the candidate decreases the objective.
    """
    cand = _stationarity_step(m, d, r)
    f_cand = _objective(cand, d, r)
    if f_cand <= f_in:
        return cand, f_cand
    step = cand - m
    scale = 0.5
    for _ in range(_MAX_BACKTRACK):
        trial = m + scale * step
        trial /= trial.sum(axis=1, keepdims=True)
        f_trial = _objective(trial, d, r)
        if f_trial <= f_in:
            return trial, f_trial
        scale *= 0.5
    return m, f_in


def fanny_iterate(m, d, r: float) -> MembershipMatrix:
    """One guarded sweep: returns memberships with an objective no larger
    than that of the input (within 1e-12)."""
    if not r > 1.0:
        raise ValueError("fuzzifier r must be greater than 1")
    marr = _as_membership_array(m)
    darr = _as_distance_array(d)
    if marr.shape[0] != darr.shape[0]:
        raise ValueError("dimension mismatch between memberships and distances")
    f_in = _objective(marr, darr, r)
    out, _ = _guarded_sweep(marr, f_in, darr, r)
    return MembershipMatrix(out)


def initial_memberships(n: int, k: int, init: str = "seeded-random", seed: int = 42) -> MembershipMatrix:
    """Starting memberships for the solver.

    "seeded-random" draws each row uniformly from the K-simplex (normalized
    exponential transforms of seeded uniform draws); "deterministic-stripes"
    gives object i membership 0.9 in cluster (i mod K)+1 and splits the
    remaining 0.1 over the other clusters.
    """
    if init not in INIT_MODES:
        raise ValueError(f"init must be one of {INIT_MODES}")
    if k < 1 or n < 1:
        raise ValueError("need n >= 1 and k >= 1")
    if init == "seeded-random":
        rng = np.random.default_rng(seed)
        u = rng.random((n, k))
        e = -np.log1p(-u)  # Exp(1) variates from uniforms in [0, 1)
        sums = e.sum(axis=1, keepdims=True)
        dead = sums[:, 0] == 0.0
        if dead.any():
            e[dead] = 1.0
            sums = e.sum(axis=1, keepdims=True)
        m = e / sums
    else:
        if k == 1:
            m = np.ones((n, 1))
        else:
            m = np.full((n, k), 0.1 / (k - 1))
            m[np.arange(n), np.arange(n) % k] = 0.9
    return MembershipMatrix(m)


def _solve_single(darr: np.ndarray, config: FannyConfig, init: str, seed: int) -> FannyResult:
    n = darr.shape[0]
    m = initial_memberships(n, config.k, init, seed).m
    f = _objective(m, darr, config.r)
    trace = [f]
    converged = False
    n_iter = 0
    for _ in range(config.max_iter):
        m, f_new = _guarded_sweep(m, f, darr, config.r)
        n_iter += 1
        trace.append(f_new)
        rel = abs(f_new - f) / max(f, 1e-300)
        f = f_new
        if rel < config.tol:
            converged = True
            break

    memberships = MembershipMatrix(m)
    return FannyResult(
        memberships=memberships,
        objective_trace=trace,
        hard_labels=closest_hard_clustering(memberships),
        n_iter=n_iter,
        converged=converged,
        n_dpc=normalized_dunn_partition_coefficient(memberships),
    )


def fanny_solve(d: DistanceMatrix, config: FannyConfig) -> FannyResult:
    """Run the fuzzy clustering solver on a precomputed dissimilarity matrix.

    Iterates guarded sweeps from the configured initialization until the
    relative objective change drops below ``config.tol`` or ``config.max_iter``
    sweeps have run. With ``n_starts > 1`` the restart whose final objective is
    lowest wins (ties go to the earliest start). The result carries the full
    objective trace of the winning start, the closest hard clustering, and the
    normalized Dunn partition coefficient.
    """
    n = d.n
    if config.k >= n:
        raise ValueError(f"k={config.k} must be smaller than the number of objects n={n}")
    darr = d.full()
    if not np.all(np.isfinite(darr)):
        raise ValueError("distance matrix contains non-finite values")

    best = None
    for start in range(config.n_starts):
        init = config.init if start == 0 else "seeded-random"
        result = _solve_single(darr, config, init, config.seed + start)
        if best is None or result.objective_trace[-1] < best.objective_trace[-1]:
            best = result
    return best


def closest_hard_clustering(m) -> np.ndarray:
    """1-based label of the highest-membership cluster per object.

    Ties break toward the lowest cluster index.
    """
    marr = _as_membership_array(m)
    return np.argmax(marr, axis=1).astype(int) + 1


def normalized_dunn_partition_coefficient(m) -> float:
    """Crispness of a fuzzy partition on the [0, 1] scale.

        [ (K/N) sum_i sum_k m_ik^2 - 1 ] / (K - 1)

    1 for a hard partition, 0 for the fully fuzzy one.
    """
    marr = _as_membership_array(m)
    n, k = marr.shape
    if k < 2:
        raise ValueError("undefined for one cluster")
    ssq = float((marr * marr).sum())
    value = (k * ssq / n - 1.0) / (k - 1.0)
    # the exact range is [0, 1]; clamp away float residue
    return min(1.0, max(0.0, value))
