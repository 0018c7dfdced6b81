"""NSGA-III and MOEA/D with the shared SBX / polynomial-mutation operators.

Both optimizers run to a fixed evaluation budget and append every
generation's population to a :class:`ParetoArchive` so performance metrics
can be computed population-fairly (on the union of all generations, not just
the final population).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .problems.base import Problem


class BudgetError(ValueError):
    """The evaluation budget does not allow a single generation."""


class ArchiveCapacityError(RuntimeError):
    """A bounded archive received more points than its capacity allows."""


# ---------------------------------------------------------------------------
# configs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MooCommonConfig:
    lambda_: int = 100
    sbx_prob: float = 0.9
    sbx_di: float = 20.0
    pm_prob: float = 0.1
    pm_di: float = 20.0

    def __post_init__(self) -> None:
        if not 10 <= self.lambda_ <= 1000:
            raise ValueError(f"lambda must lie in [10, 1000], got {self.lambda_}")
        for name, value, lo, hi in (
            ("sbx_prob", self.sbx_prob, 0.0, 1.0),
            ("sbx_di", self.sbx_di, 1.0, 200.0),
            ("pm_prob", self.pm_prob, 0.0, 1.0),
            ("pm_di", self.pm_di, 1.0, 200.0),
        ):
            if not lo <= value <= hi:
                raise ValueError(f"{name} must lie in [{lo}, {hi}], got {value}")


@dataclass(frozen=True)
class Nsga3Config:
    common: MooCommonConfig = field(default_factory=MooCommonConfig)
    tournament_k: int = 2

    def __post_init__(self) -> None:
        if not 2 <= int(self.tournament_k) <= 10:
            raise ValueError(f"tournament_k must lie in [2, 10], got {self.tournament_k}")


MOEAD_MODES = ("pbi", "tchebycheff", "tchebycheff-normalized", "modified-tchebycheff")


@dataclass(frozen=True)
class MoeadConfig:
    common: MooCommonConfig = field(default_factory=MooCommonConfig)
    mode: str = "tchebycheff"
    neighbor_ratio: float = 0.2

    def __post_init__(self) -> None:
        if self.mode not in MOEAD_MODES:
            raise ValueError(f"mode must be one of {MOEAD_MODES}, got {self.mode!r}")
        if not 0.05 <= self.neighbor_ratio <= 0.5:
            raise ValueError(f"neighbor_ratio must lie in [0.05, 0.5], got {self.neighbor_ratio}")


@dataclass
class ParetoArchive:
    """Union of every generation's objective vectors, in generation order."""

    m: int
    capacity: int | None = None
    _blocks: list[np.ndarray] = field(default_factory=list)
    generation_sizes: list[int] = field(default_factory=list)

    def append(self, objs: np.ndarray) -> None:
        objs = np.asarray(objs, dtype=float)
        if objs.ndim != 2 or objs.shape[1] != self.m:
            raise ValueError(f"expected (pop, {self.m}) objectives, got {objs.shape}")
        if self.capacity is not None and self.size + objs.shape[0] > self.capacity:
            raise ArchiveCapacityError(
                f"archive capacity {self.capacity} exceeded"
            )
        self._blocks.append(objs.copy())
        self.generation_sizes.append(objs.shape[0])

    @property
    def size(self) -> int:
        return sum(self.generation_sizes)

    @property
    def points(self) -> np.ndarray:
        if not self._blocks:
            return np.empty((0, self.m))
        return np.vstack(self._blocks)


@dataclass
class MooRunResult:
    archive: ParetoArchive
    final_X: np.ndarray
    final_F: np.ndarray
    evals_used: int
    generations: int
    failed: bool = False


# ---------------------------------------------------------------------------
# non-dominated sorting and reference points
# ---------------------------------------------------------------------------

def fast_nondominated_sort(objs: np.ndarray) -> list[np.ndarray]:
    """Partition a population into fronts F1, F2, ... (minimization).

    A point dominates another when it is no worse in every objective and
    strictly better in at least one; duplicated points share a front.
    """
    objs = np.asarray(objs, dtype=float)
    if objs.ndim != 2:
        raise ValueError("expected a (pop, m) objective matrix")
    if not np.isfinite(objs).all():
        raise ValueError("objective matrix contains non-finite values")
    s = objs.shape[0]
    le = (objs[:, None, :] <= objs[None, :, :]).all(axis=2)
    lt = (objs[:, None, :] < objs[None, :, :]).any(axis=2)
    dominates = le & lt                      # dominates[i, j]: i dominates j
    n_dominators = dominates.sum(axis=0).astype(int)

    fronts: list[np.ndarray] = []
    remaining = np.ones(s, dtype=bool)
    while remaining.any():
        current = remaining & (n_dominators == 0)
        if not current.any():  # pragma: no cover - impossible for finite inputs
            raise AssertionError("non-dominated sort failed to make progress")
        idx = np.flatnonzero(current)
        fronts.append(idx)
        remaining[idx] = False
        n_dominators -= dominates[idx].sum(axis=0)
        n_dominators[~remaining] = -1
    return fronts


def das_dennis_points(m: int, divisions: int) -> np.ndarray:
    """Simplex lattice {i/divisions} summing to 1, in lexicographic order."""
    if m < 2:
        raise ValueError("need at least two objectives")
    if divisions < 1:
        raise ValueError("need at least one division")

    rows: list[list[float]] = []

    def recurse(prefix: list[int], left: int, dims_left: int) -> None:
        if dims_left == 1:
            rows.append([v / divisions for v in prefix + [left]])
            return
        for v in range(left + 1):
            recurse(prefix + [v], left - v, dims_left - 1)

    recurse([], divisions, m)
    points = np.asarray(rows, dtype=float)
    assert points.shape[0] == comb(divisions + m - 1, m - 1)
    return points


def _directions_at_least(m: int, count: int) -> np.ndarray:
    H = 1
    while comb(H + m - 1, m - 1) < count:
        H += 1
    return das_dennis_points(m, H)


# ---------------------------------------------------------------------------
# variation operators
# ---------------------------------------------------------------------------

def sbx_pair(p1, p2, lower, upper, prob, di, rng):
    """Bounded simulated binary crossover on one parent pair."""
    c1, c2 = p1.copy(), p2.copy()
    if rng.uniform() > prob:
        return c1, c2
    cross = rng.uniform(size=p1.size) <= 0.5
    diff = np.abs(p1 - p2)
    cross &= diff > 1e-14
    if not cross.any():
        return c1, c2
    lo, hi = lower[cross], upper[cross]
    x1 = np.minimum(p1[cross], p2[cross])
    x2 = np.maximum(p1[cross], p2[cross])
    d = x2 - x1
    u = rng.uniform(size=d.size)

    beta = 1.0 + 2.0 * (x1 - lo) / d
    alpha = 2.0 - beta ** -(di + 1.0)
    bq = np.where(u <= 1.0 / alpha,
                  (u * alpha) ** (1.0 / (di + 1.0)),
                  (1.0 / (2.0 - u * alpha)) ** (1.0 / (di + 1.0)))
    child1 = 0.5 * ((x1 + x2) - bq * d)

    beta = 1.0 + 2.0 * (hi - x2) / d
    alpha = 2.0 - beta ** -(di + 1.0)
    bq = np.where(u <= 1.0 / alpha,
                  (u * alpha) ** (1.0 / (di + 1.0)),
                  (1.0 / (2.0 - u * alpha)) ** (1.0 / (di + 1.0)))
    child2 = 0.5 * ((x1 + x2) + bq * d)

    swap = rng.uniform(size=d.size) <= 0.5
    child1[swap], child2[swap] = child2[swap], child1[swap].copy()
    c1[cross] = np.clip(child1, lo, hi)
    c2[cross] = np.clip(child2, lo, hi)
    return c1, c2


def polynomial_mutation(X, lower, upper, prob, di, rng):
    """Bounded polynomial mutation; ``prob`` applies per decision variable."""
    X = np.atleast_2d(X).copy()
    span = upper - lower
    site = rng.uniform(size=X.shape) < prob
    if not site.any():
        return X
    u = rng.uniform(size=X.shape)
    d1 = (X - lower) / span
    d2 = (upper - X) / span
    low_mask = site & (u <= 0.5)
    hi_mask = site & (u > 0.5)
    mpow = 1.0 / (di + 1.0)
    if low_mask.any():
        uu = u[low_mask]
        delta = (2.0 * uu + (1.0 - 2.0 * uu)
                 * (1.0 - d1[low_mask]) ** (di + 1.0)) ** mpow - 1.0
        X[low_mask] += delta * np.broadcast_to(span, X.shape)[low_mask]
    if hi_mask.any():
        uu = u[hi_mask]
        delta = 1.0 - (2.0 * (1.0 - uu) + 2.0 * (uu - 0.5)
                       * (1.0 - d2[hi_mask]) ** (di + 1.0)) ** mpow
        X[hi_mask] += delta * np.broadcast_to(span, X.shape)[hi_mask]
    return np.clip(X, lower, upper)


# ---------------------------------------------------------------------------
# NSGA-III
# ---------------------------------------------------------------------------

def _achievement_extremes(Fn: np.ndarray) -> np.ndarray:
    m = Fn.shape[1]
    extremes = np.empty(m, dtype=int)
    for j in range(m):
        w = np.full(m, 1e-6)
        w[j] = 1.0
        extremes[j] = int(np.argmin((Fn / w).max(axis=1)))
    return extremes


def _normalize_objectives(F: np.ndarray) -> np.ndarray:
    """Ideal-point translation plus hyperplane-intercept scaling."""
    ideal = F.min(axis=0)
    Ft = F - ideal
    m = F.shape[1]
    extremes = _achievement_extremes(Ft)
    intercepts = None
    E = Ft[extremes]
    try:
        coeff = np.linalg.solve(E, np.ones(m))
        if np.all(np.isfinite(coeff)) and np.all(coeff > 1e-12):
            intercepts = 1.0 / coeff
    except np.linalg.LinAlgError:
        intercepts = None
    if intercepts is None or np.any(intercepts < 1e-12):
        intercepts = Ft.max(axis=0)  # degenerate hyperplane fallback
    intercepts = np.where(intercepts > 1e-12, intercepts, 1e-12)
    return Ft / intercepts


def _associate(Fn: np.ndarray, dirs: np.ndarray):
    """Closest reference direction per member and the perpendicular distance."""
    unit = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
    proj = Fn @ unit.T                                     # (pop, n_dirs)
    sq = (Fn ** 2).sum(axis=1, keepdims=True)
    d_perp = np.sqrt(np.maximum(sq - proj ** 2, 0.0))
    assoc = d_perp.argmin(axis=1)
    return assoc, d_perp[np.arange(Fn.shape[0]), assoc]


def _niche_select(need: int, cand_assoc, cand_dist, rho, rng):
    """Deb-Jain niche preservation over the split front."""
    chosen: list[int] = []
    available = np.ones(cand_assoc.size, dtype=bool)
    live_dirs = np.ones(rho.size, dtype=bool)
    while len(chosen) < need:
        live = np.flatnonzero(live_dirs)
        j = live[rho[live] == rho[live].min()]
        j = int(rng.choice(j))
        members = np.flatnonzero(available & (cand_assoc == j))
        if members.size == 0:
            live_dirs[j] = False
            continue
        if rho[j] == 0:
            pick = int(members[np.argmin(cand_dist[members])])
        else:
            pick = int(rng.choice(members))
        chosen.append(pick)
        available[pick] = False
        rho[j] += 1
    return chosen


def _environmental_selection(X, F, lam, dirs, rng):
    fronts = fast_nondominated_sort(F)
    rank = np.empty(F.shape[0], dtype=int)
    for level, front in enumerate(fronts):
        rank[front] = level

    selected: list[int] = []
    level = 0
    while level < len(fronts) and len(selected) + len(fronts[level]) <= lam:
        selected.extend(int(i) for i in fronts[level])
        level += 1

    if len(selected) < lam:
        last = fronts[level]
        pool = np.array(selected + [int(i) for i in last], dtype=int)
        Fn = _normalize_objectives(F[pool])
        assoc, dist = _associate(Fn, dirs)
        n_sel = len(selected)
        rho = np.bincount(assoc[:n_sel], minlength=dirs.shape[0])
        picks = _niche_select(lam - n_sel, assoc[n_sel:], dist[n_sel:], rho, rng)
        selected.extend(int(last[p]) for p in picks)

    sel = np.asarray(selected, dtype=int)
    Xs, Fs, ranks = X[sel], F[sel], rank[sel]
    # niche counts of the surviving set drive the tournament comparator
    assoc, _ = _associate(_normalize_objectives(Fs), dirs)
    rho = np.bincount(assoc, minlength=dirs.shape[0])
    niche = rho[assoc]
    return Xs, Fs, ranks, niche


def _tournament(rank, niche, k, rng):
    cand = rng.integers(0, rank.size, size=k)
    keys = [(rank[c], niche[c]) for c in cand]
    return int(cand[min(range(k), key=lambda i: keys[i])])


def run_nsga3(problem: Problem, config: Nsga3Config, budget: int, seed: int) -> MooRunResult:
    """Reference-point NSGA-III to an evaluation budget; archives every generation."""
    lam = config.common.lambda_
    if budget < lam:
        raise BudgetError(f"budget {budget} is below the population size {lam}")
    rng = np.random.default_rng(seed)
    lower, upper = problem.lower, problem.upper
    dirs = _directions_at_least(problem.m, lam)

    X = rng.uniform(lower, upper, size=(lam, problem.n))
    F = problem.evaluate_many(X)
    evals = lam
    archive = ParetoArchive(problem.m)
    archive.append(F)

    X, F, rank, niche = _environmental_selection(X, F, lam, dirs, rng)

    generations = 0
    cc = config.common
    while evals + lam <= budget:
        offspring = np.empty((lam, problem.n))
        for i in range(0, lam, 2):
            a = _tournament(rank, niche, config.tournament_k, rng)
            b = _tournament(rank, niche, config.tournament_k, rng)
            c1, c2 = sbx_pair(X[a], X[b], lower, upper, cc.sbx_prob, cc.sbx_di, rng)
            offspring[i] = c1
            if i + 1 < lam:
                offspring[i + 1] = c2
        offspring = polynomial_mutation(offspring, lower, upper, cc.pm_prob, cc.pm_di, rng)
        Fo = problem.evaluate_many(offspring)
        evals += lam
        generations += 1
        X, F, rank, niche = _environmental_selection(
            np.vstack([X, offspring]), np.vstack([F, Fo]), lam, dirs, rng)
        archive.append(F)

    return MooRunResult(archive=archive, final_X=X, final_F=F,
                        evals_used=evals, generations=generations)


# ---------------------------------------------------------------------------
# MOEA/D
# ---------------------------------------------------------------------------

def decompose(f, w, z_star, mode, theta: float = 5.0, nadir=None) -> float:
    """Scalarize one objective vector against a weight vector and ideal point."""
    f = np.asarray(f, dtype=float)
    w = np.asarray(w, dtype=float)
    z = np.asarray(z_star, dtype=float)
    if not (f.shape == w.shape == z.shape):
        raise ValueError("objectives, weights and ideal point must share a shape")
    w = np.where(w <= 0.0, 1e-6, w)
    diff = np.abs(f - z)
    if mode == "tchebycheff":
        return float((w * diff).max())
    if mode == "modified-tchebycheff":
        return float((diff / w).max())
    if mode == "tchebycheff-normalized":
        if nadir is None:
            raise ValueError("normalized Tchebycheff needs a nadir estimate")
        span = np.maximum(np.asarray(nadir, dtype=float) - z, 1e-12)
        return float((w * diff / span).max())
    if mode == "pbi":
        norm_w = np.linalg.norm(w)
        d1 = float((f - z) @ w) / norm_w
        d2 = float(np.linalg.norm(f - z - d1 * w / norm_w))
        return d1 + theta * d2
    raise ValueError(f"unknown decomposition mode {mode!r}")


def _decompose_paired(F, W, z, mode, theta, nadir):
    """Row-paired ``decompose``: row i of F scored against row i of W."""
    W = np.where(W <= 0.0, 1e-6, W)
    diff = np.abs(F - z)
    if mode == "tchebycheff":
        return (diff * W).max(axis=1)
    if mode == "modified-tchebycheff":
        return (diff / W).max(axis=1)
    if mode == "tchebycheff-normalized":
        span = np.maximum(nadir - z, 1e-12)
        return (W * diff / span).max(axis=1)
    norm_w = np.linalg.norm(W, axis=1)
    d1 = ((F - z) * W).sum(axis=1) / norm_w
    d2 = np.linalg.norm(F - z - d1[:, None] * W / norm_w[:, None], axis=1)
    return d1 + theta * d2


def moead_weights(m: int, lam: int) -> np.ndarray:
    """lam weight vectors: closest lattice with count >= lam, truncated."""
    dirs = _directions_at_least(m, lam)
    return dirs[:lam]  # drop the lexicographically last vectors


def run_moead(problem: Problem, config: MoeadConfig, budget: int, seed: int) -> MooRunResult:
    """Decomposition MOEA with neighborhood mating and unbounded replacement."""
    lam = config.common.lambda_
    if budget < lam:
        raise BudgetError(f"budget {budget} is below the population size {lam}")
    rng = np.random.default_rng(seed)
    lower, upper = problem.lower, problem.upper
    cc = config.common

    W = moead_weights(problem.m, lam)
    T = max(2, int(round(config.neighbor_ratio * lam)))
    dist = np.linalg.norm(W[:, None, :] - W[None, :, :], axis=2)
    neighbors = np.argsort(dist, axis=1, kind="stable")[:, :T]

    X = rng.uniform(lower, upper, size=(lam, problem.n))
    F = problem.evaluate_many(X)
    evals = lam
    z_star = F.min(axis=0)
    archive = ParetoArchive(problem.m)
    archive.append(F)

    generations = 0
    while evals + lam <= budget:
        nadir = F.max(axis=0)  # running nadir estimate for the normalized mode
        for i in range(lam):
            pick = rng.choice(T, size=2, replace=False)
            p1, p2 = neighbors[i][pick]
            c1, _ = sbx_pair(X[p1], X[p2], lower, upper, cc.sbx_prob, cc.sbx_di, rng)
            child = polynomial_mutation(c1, lower, upper, cc.pm_prob, cc.pm_di, rng)[0]
            fc = problem.evaluate(child)
            evals += 1
            z_star = np.minimum(z_star, fc)
            hood = neighbors[i]
            Wh = W[hood]
            g_old = _decompose_paired(F[hood], Wh, z_star, config.mode, 5.0, nadir)
            g_new = _decompose_paired(np.broadcast_to(fc, Wh.shape), Wh, z_star,
                                      config.mode, 5.0, nadir)
            improved = hood[g_new <= g_old]
            X[improved] = child
            F[improved] = fc
        generations += 1
        archive.append(F)

    return MooRunResult(archive=archive, final_X=X, final_F=F,
                        evals_used=evals, generations=generations)
