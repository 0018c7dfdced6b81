"""Supporting statistics: pairwise t-tests over per-problem effect samples and
k-means clustering with silhouette-selected K plus a 2-component projection.

The t-test is the pooled-variance two-sample form (equal variances assumed),
two-sided, with the p-value taken from the regularized incomplete beta
function.  Negative t means the second sample's mean exceeds the first's.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import betainc


@dataclass(frozen=True)
class EffectSample:
    """Per-problem index values for one (parameter, effect-kind) pair."""

    param: str
    kind: str                  # "direct" or "interaction"
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if v.ndim != 1 or not np.isfinite(v).all():
            raise ValueError("effect samples must be finite 1-D vectors")

    @property
    def label(self) -> tuple[str, str]:
        return (self.param, self.kind)


@dataclass(frozen=True)
class TTestResult:
    t: float
    p: float
    df: int
    infinite: bool = False     # zero pooled variance with unequal means


def pairwise_ttest(a, b) -> TTestResult:
    """Pooled two-sample t statistic and two-sided p-value."""
    a = np.asarray(a.values if isinstance(a, EffectSample) else a, dtype=float)
    b = np.asarray(b.values if isinstance(b, EffectSample) else b, dtype=float)
    n1, n2 = a.size, b.size
    if n1 < 2 or n2 < 2:
        raise ValueError("each sample needs at least two values")
    df = n1 + n2 - 2
    pooled = ((n1 - 1) * a.var(ddof=1) + (n2 - 1) * b.var(ddof=1)) / df
    diff = a.mean() - b.mean()
    if pooled <= 0.0:
        if diff == 0.0:
            return TTestResult(t=0.0, p=1.0, df=df)
        return TTestResult(t=float(np.sign(diff)) * float("inf"), p=0.0,
                           df=df, infinite=True)
    se = np.sqrt(pooled * (1.0 / n1 + 1.0 / n2))
    t = diff / se
    # two-sided p from the t CDF via the regularized incomplete beta function
    p = float(betainc(df / 2.0, 0.5, df / (df + t * t)))
    return TTestResult(t=float(t), p=p, df=df)


def ttest_matrix(samples: list[EffectSample]) -> list[dict]:
    """Lower-triangular pairwise t-tests over all effect samples."""
    rows = []
    for i in range(1, len(samples)):
        for j in range(i):
            res = pairwise_ttest(samples[i], samples[j])
            rows.append({
                "param_a": samples[i].param, "kind_a": samples[i].kind,
                "param_b": samples[j].param, "kind_b": samples[j].kind,
                "t": res.t, "p": res.p,
            })
    return rows


# ---------------------------------------------------------------------------
# k-means + silhouette + projection
# ---------------------------------------------------------------------------

@dataclass
class ClusterResult:
    assignments: np.ndarray
    K: int
    silhouette_curve: dict[int, float]
    projection: np.ndarray       # (items, 2) principal-component coordinates
    inertia: float
    degenerate: bool = False


def _lloyd(X: np.ndarray, k: int, rng: np.random.Generator,
           max_iter: int = 300) -> tuple[np.ndarray, np.ndarray, float]:
    n = X.shape[0]
    centers = X[rng.choice(n, size=k, replace=False)].copy()
    assign = np.zeros(n, dtype=int)
    for _ in range(max_iter):
        d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_assign = d2.argmin(axis=1)
        for c in range(k):
            members = X[new_assign == c]
            if members.shape[0] == 0:
                # reseed an empty cluster at the point farthest from its center
                far = int(d2.min(axis=1).argmax())
                centers[c] = X[far]
                new_assign[far] = c
            else:
                centers[c] = members.mean(axis=0)
        if np.array_equal(new_assign, assign):
            assign = new_assign
            break
        assign = new_assign
    d2 = ((X - centers[assign]) ** 2).sum(axis=1)
    return assign, centers, float(d2.sum())


def silhouette_score(X: np.ndarray, assign: np.ndarray) -> float:
    """Mean Euclidean silhouette; singleton-cluster points score 0."""
    n = X.shape[0]
    labels = np.unique(assign)
    if labels.size < 2:
        raise ValueError("silhouette needs at least two clusters")
    dist = np.sqrt(((X[:, None, :] - X[None, :, :]) ** 2).sum(axis=2))
    scores = np.zeros(n)
    for i in range(n):
        own = assign == assign[i]
        own_size = own.sum()
        if own_size == 1:
            scores[i] = 0.0
            continue
        a = dist[i, own].sum() / (own_size - 1)
        b = min(dist[i, assign == lab].mean() for lab in labels if lab != assign[i])
        scores[i] = (b - a) / max(a, b) if max(a, b) > 0 else 0.0
    return float(scores.mean())


def _principal_projection(X: np.ndarray) -> np.ndarray:
    centered = X - X.mean(axis=0)
    n, f = centered.shape
    cov = centered.T @ centered / max(n - 1, 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    comps = eigvecs[:, order[: min(2, f)]].T
    # sign convention: the largest-magnitude loading of each component positive
    for row in comps:
        if row[np.abs(row).argmax()] < 0:
            row *= -1.0
    proj = centered @ comps.T
    if proj.shape[1] < 2:
        proj = np.column_stack([proj, np.zeros(n)])
    return proj


def kmeans_silhouette(matrix: np.ndarray, k_candidates, seed: int,
                      restarts: int = 10) -> ClusterResult:
    """Multi-restart k-means per candidate K; K = max{2, argmax silhouette}.

    Candidates larger than the item count are skipped; ties in silhouette go
    to the smallest candidate.  All-identical items set the degenerate flag
    and force K = 2.
    """
    X = np.asarray(matrix, dtype=float)
    if X.ndim != 2 or X.shape[0] < 3:
        raise ValueError("need an (items, features) matrix with at least 3 items")
    if not np.isfinite(X).all():
        raise ValueError("features must be finite")
    projection = _principal_projection(X)

    if np.allclose(X, X[0]):
        return ClusterResult(
            assignments=np.zeros(X.shape[0], dtype=int), K=2,
            silhouette_curve={}, projection=projection, inertia=0.0,
            degenerate=True,
        )

    rng = np.random.default_rng(seed)
    curve: dict[int, float] = {}
    best_runs: dict[int, tuple[np.ndarray, float]] = {}
    for k in sorted(set(int(k) for k in k_candidates)):
        if k < 2 or k > X.shape[0]:
            continue
        best = None
        for _ in range(restarts):
            assign, _, inertia = _lloyd(X, k, rng)
            if best is None or inertia < best[1]:
                best = (assign, inertia)
        curve[k] = silhouette_score(X, best[0]) if np.unique(best[0]).size > 1 else -1.0
        best_runs[k] = best
    if not curve:
        raise ValueError("no usable K candidate (all exceed the item count)")

    ks = sorted(curve)
    chosen = max(2, ks[int(np.argmax([curve[k] for k in ks]))])
    assign, inertia = best_runs[chosen]
    return ClusterResult(assignments=assign, K=chosen, silhouette_curve=curve,
                         projection=projection, inertia=inertia)
