"""Performance scoring: best solution for SOO; GD, IGD, HV for MOO.

GD follows the root-of-summed-squares form sqrt(sum d_i^2) / |A|; IGD is the
plain average of reference-to-front nearest distances.  The hypervolume is
exact for two and three objectives via a dimension sweep that maintains a 2-D
dominance staircase.  MOO metrics are meant to be computed on the deduplicated
non-dominated subset of a run's whole-generation archive (population-fair).
"""

from __future__ import annotations

import bisect
import warnings
from dataclasses import dataclass

import numpy as np

METRIC_ORIENTATION = {"best": "minimize", "gd": "minimize",
                      "igd": "minimize", "hv": "maximize"}


class MetricError(ValueError):
    """A metric was requested on inputs where it is undefined."""


@dataclass(frozen=True)
class MetricValue:
    metric: str
    value: float

    @property
    def orientation(self) -> str:
        return METRIC_ORIENTATION[self.metric]


def _as_front(points, name: str) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise MetricError(f"{name}: need a non-empty (n, m) point set")
    return pts


def gd(front: np.ndarray, reference: np.ndarray) -> float:
    """Root of summed squared nearest-distances from the front, over |front|."""
    A = _as_front(front, "gd")
    Z = _as_front(reference, "gd")
    if A.shape[1] != Z.shape[1]:
        raise MetricError("gd: front and reference dimensions differ")
    d = np.sqrt(((A[:, None, :] - Z[None, :, :]) ** 2).sum(axis=2)).min(axis=1)
    return float(np.sqrt((d ** 2).sum()) / A.shape[0])


def igd(front: np.ndarray, reference: np.ndarray) -> float:
    """Average distance from each reference point to its nearest front point."""
    A = _as_front(front, "igd")
    Z = _as_front(reference, "igd")
    if A.shape[1] != Z.shape[1]:
        raise MetricError("igd: front and reference dimensions differ")
    d = np.sqrt(((Z[:, None, :] - A[None, :, :]) ** 2).sum(axis=2)).min(axis=1)
    return float(d.mean())


# ---------------------------------------------------------------------------
# non-dominated filtering (minimization)
# ---------------------------------------------------------------------------

def nondominated_filter(points: np.ndarray) -> np.ndarray:
    """Deduplicated non-dominated subset (minimization)."""
    pts = _as_front(points, "nondominated_filter")
    pts = np.unique(pts, axis=0)  # dedup; also sorts lexicographically
    m = pts.shape[1]
    if m == 1:
        return pts[:1]
    if m == 2:
        keep = []
        best_y = np.inf
        for row in pts:  # x ascending; ties resolved by ascending y
            if row[1] < best_y:
                keep.append(row)
                best_y = row[1]
        return np.asarray(keep)
    # m >= 3: a point survives iff no other point dominates it; chunked to
    # bound the broadcast memory on large archives
    n = pts.shape[0]
    keep = np.ones(n, dtype=bool)
    block = 512
    for start in range(0, n, block):
        chunk = pts[start:start + block]
        le = (pts[:, None, :] <= chunk[None, :, :]).all(axis=2)
        lt = (pts[:, None, :] < chunk[None, :, :]).any(axis=2)
        keep[start:start + block] = ~(le & lt).any(axis=0)
    return pts[keep]


# ---------------------------------------------------------------------------
# exact hypervolume (m <= 3)
# ---------------------------------------------------------------------------

class _Staircase2D:
    """Mutually non-dominated 2-D points (x ascending, y strictly descending)."""

    def __init__(self) -> None:
        self.xs: list[float] = []
        self.ys: list[float] = []

    def insert(self, x: float, y: float) -> bool:
        i = bisect.bisect_right(self.xs, x)
        if i > 0 and self.ys[i - 1] <= y:
            return False
        j = i
        while j < len(self.xs) and self.ys[j] >= y:
            j += 1
        self.xs[i:j] = [x]
        self.ys[i:j] = [y]
        return True

    def area(self, r1: float, r2: float) -> float:
        total = 0.0
        for idx, y in enumerate(self.ys):
            nxt = self.xs[idx + 1] if idx + 1 < len(self.xs) else r1
            total += (nxt - self.xs[idx]) * (r2 - y)
        return total


def hv(front: np.ndarray, reference: np.ndarray) -> float:
    """Exact hypervolume dominated by ``front`` up to the reference point.

    Points that do not strictly dominate the reference contribute nothing.
    Supports two and three objectives (dimension sweep).
    """
    A = _as_front(front, "hv")
    r = np.asarray(reference, dtype=float)
    m = A.shape[1]
    if r.shape != (m,):
        raise MetricError(f"hv: reference must have {m} coordinates")
    if m not in (2, 3):
        raise MetricError("hv: exact sweep implemented for 2 or 3 objectives")

    if np.any(r <= A.min(axis=0)):
        warnings.warn("hypervolume reference leaves no dominating points in "
                      "at least one objective", stacklevel=2)
    A = A[(A < r).all(axis=1)]
    if A.shape[0] == 0:
        return 0.0

    if m == 2:
        stair = _Staircase2D()
        for x, y in np.unique(A, axis=0):
            stair.insert(float(x), float(y))
        return stair.area(float(r[0]), float(r[1]))

    # m == 3: sweep the third objective, accumulating staircase area per slab
    A = np.unique(A, axis=0)
    order = np.argsort(A[:, 2], kind="stable")
    A = A[order]
    zs = A[:, 2]
    stair = _Staircase2D()
    volume = 0.0
    i = 0
    n = A.shape[0]
    while i < n:
        z = zs[i]
        while i < n and zs[i] == z:
            stair.insert(float(A[i, 0]), float(A[i, 1]))
            i += 1
        z_next = zs[i] if i < n else float(r[2])
        volume += stair.area(float(r[0]), float(r[1])) * (z_next - z)
    return volume


def hv_reference(front_points: np.ndarray, factor: float = 1.1) -> np.ndarray:
    """Componentwise nadir of an analytic front sample, scaled outward."""
    pts = _as_front(front_points, "hv_reference")
    return pts.max(axis=0) * factor


# ---------------------------------------------------------------------------
# run scoring
# ---------------------------------------------------------------------------

def archive_front(archive) -> np.ndarray:
    """Deduplicated non-dominated subset of a whole-generation archive."""
    pts = archive.points if hasattr(archive, "points") else np.asarray(archive)
    return nondominated_filter(pts)


def score_run(run, metric: str, reference=None) -> MetricValue:
    """Score one optimizer run.

    ``best`` takes a single-objective RunResult; ``gd``/``igd`` need the true
    front sample as ``reference``; ``hv`` needs the reference point.  Failed
    runs score NaN so downstream estimators can apply their drop rules.
    """
    if metric == "best":
        if getattr(run, "failed", False):
            return MetricValue("best", float("nan"))
        return MetricValue("best", float(np.min(run.history)))
    if metric not in ("gd", "igd", "hv"):
        raise MetricError(f"unknown metric {metric!r}")
    if getattr(run, "failed", False):
        return MetricValue(metric, float("nan"))
    archive = run.archive if hasattr(run, "archive") else run
    front = archive_front(archive)
    if reference is None:
        raise MetricError(f"{metric} needs reference data")
    if metric == "gd":
        return MetricValue("gd", gd(front, reference))
    if metric == "igd":
        return MetricValue("igd", igd(front, reference))
    return MetricValue("hv", hv(front, np.asarray(reference, dtype=float)))


def mean_over_runs(values) -> float:
    """Arithmetic mean of the finite run values (NaN when none are finite)."""
    arr = np.asarray(values, dtype=float)
    finite = arr[np.isfinite(arr)]
    return float(finite.mean()) if finite.size else float("nan")
