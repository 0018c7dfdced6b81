"""Sensitivity indices from model outputs.

Elementary effects: for trajectory step j that moved dimension d with sign s,

    EE_d = s * (y[j+1] - y[j]) / delta

so every effect is the forward-difference quotient along +delta.  Column means
give the overall influence mu_i, column sample standard deviations (r-1
divisor) give the interaction signal sigma_i; mean absolute effects are kept
as the mu* diagnostic.

Variance-based indices use the paired-matrix dot-product estimators

    f0^2 = (mean yA)^2
    S_i  = (mean(yA * yC_i) - f0^2) / (mean(yA * yA) - f0^2)
    ST_i = 1 - (mean(yB * yC_i) - f0^2) / (mean(yA * yA) - f0^2)

Raw estimates may land slightly outside [0, 1]; clamped copies are kept
alongside the raw values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .sampling import Trajectory


class NonFiniteOutputError(ValueError):
    """A model output needed by an estimator is NaN or infinite."""


class DegenerateModelError(ValueError):
    """The model output has zero variance; indices are undefined."""


@dataclass(frozen=True)
class EEMatrix:
    """r x k elementary effects, one row per trajectory, plus the drop tally."""

    values: np.ndarray
    dropped: int = 0

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if v.ndim != 2:
            raise ValueError("elementary-effect matrix must be 2-D")
        if not np.isfinite(v).all():
            raise NonFiniteOutputError("elementary-effect matrix contains non-finite entries")

    @property
    def r(self) -> int:
        return self.values.shape[0]

    @property
    def k(self) -> int:
        return self.values.shape[1]


def elementary_effects(traj: Trajectory, y: np.ndarray, delta: float) -> np.ndarray:
    """Per-dimension elementary effects of one trajectory's k+1 outputs."""
    y = np.asarray(y, dtype=float)
    k = traj.moved_dim.size
    if y.shape != (k + 1,):
        raise ValueError(f"expected {k + 1} outputs, got shape {y.shape}")
    if not np.isfinite(y).all():
        raise NonFiniteOutputError("trajectory outputs contain non-finite values")
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    ee = np.empty(k, dtype=float)
    for j, d in enumerate(traj.moved_dim):
        ee[d] = traj.delta_signs[j] * (y[j + 1] - y[j]) / delta
    return ee


def ee_matrix(trajectories, outputs, delta: float) -> EEMatrix:
    """Stack per-trajectory effects, dropping trajectories with failed outputs.

    ``outputs`` holds one length-(k+1) vector per trajectory; any trajectory
    whose outputs are non-finite is dropped and counted (optimizer runs can
    fail on some problem/configuration pairs).
    """
    rows = []
    dropped = 0
    for traj, y in zip(trajectories, outputs):
        try:
            rows.append(elementary_effects(traj, y, delta))
        except NonFiniteOutputError:
            dropped += 1
    if not rows:
        raise NonFiniteOutputError("every trajectory was dropped; no finite outputs")
    return EEMatrix(np.vstack(rows), dropped=dropped)


@dataclass(frozen=True)
class MorrisStats:
    mu: np.ndarray
    sigma: np.ndarray | None   # None when r = 1 (sample sd undefined)
    mu_star: np.ndarray


def morris_mu_sigma(ee: EEMatrix | np.ndarray) -> MorrisStats:
    """Column means, sample standard deviations, and mean absolute effects."""
    values = ee.values if isinstance(ee, EEMatrix) else np.asarray(ee, dtype=float)
    if values.ndim != 2 or values.shape[0] < 1:
        raise ValueError("need an r x k matrix with r >= 1")
    mu = values.mean(axis=0)
    mu_star = np.abs(values).mean(axis=0)
    sigma = values.std(axis=0, ddof=1) if values.shape[0] >= 2 else None
    return MorrisStats(mu=mu, sigma=sigma, mu_star=mu_star)


@dataclass(frozen=True)
class SobolResult:
    S: np.ndarray
    ST: np.ndarray
    S_clamped: np.ndarray
    ST_clamped: np.ndarray
    variance: float
    f0_sq: float
    dropped_rows: int = 0


def sobol_indices(yA: np.ndarray, yB: np.ndarray, yC, jansen: bool = False) -> SobolResult:
    """First-order and total-effect indices from A/B/C_i output vectors.

    Rows where any of yA, yB, or a yC_i is non-finite are removed from every
    vector so the estimators stay paired.  ``jansen=True`` switches to the
    squared-difference estimators for cross-checking.
    """
    yA = np.asarray(yA, dtype=float)
    yB = np.asarray(yB, dtype=float)
    yCs = [np.asarray(c, dtype=float) for c in yC]
    N = yA.shape[0]
    if yB.shape != (N,) or any(c.shape != (N,) for c in yCs):
        raise ValueError("yA, yB and every yC_i must share the same length")

    keep = np.isfinite(yA) & np.isfinite(yB)
    for c in yCs:
        keep &= np.isfinite(c)
    dropped = int(N - keep.sum())
    if keep.sum() < 2:
        raise NonFiniteOutputError("fewer than two finite rows remain after drops")
    yA, yB = yA[keep], yB[keep]
    yCs = [c[keep] for c in yCs]
    n = yA.shape[0]

    f0_sq = float(yA.mean() ** 2)
    # centering leaves the true indices unchanged (variance decomposition is
    # shift invariant) and removes the large-mean noise term of the
    # dot-product estimators; the formulas below are applied verbatim to the
    # centered outputs
    shift = 0.5 * (yA.mean() + yB.mean())
    ya, yb = yA - shift, yB - shift
    f0c = ya.mean() ** 2
    variance = ya @ ya / n - f0c
    if variance <= 0:
        raise DegenerateModelError(
            "model output variance on the A block is zero; sensitivity indices undefined"
        )

    k = len(yCs)
    S = np.empty(k)
    ST = np.empty(k)
    for i, yCi in enumerate(yCs):
        yc = yCi - shift
        if jansen:
            # C_i shares only column i with A and differs from B only in i
            S[i] = (variance - 0.5 * np.mean((ya - yc) ** 2)) / variance
            ST[i] = 0.5 * np.mean((yb - yc) ** 2) / variance
        else:
            S[i] = (ya @ yc / n - f0c) / variance
            ST[i] = 1.0 - (yb @ yc / n - f0c) / variance
    return SobolResult(
        S=S,
        ST=ST,
        S_clamped=np.clip(S, 0.0, 1.0),
        ST_clamped=np.clip(ST, 0.0, 1.0),
        variance=float(variance),
        f0_sq=float(f0_sq),
        dropped_rows=dropped,
    )


# ---------------------------------------------------------------------------
# Normalization, ranking, reports
# ---------------------------------------------------------------------------

def minmax_normalize(values: np.ndarray) -> tuple[np.ndarray, float, float]:
    """Rescale into [0, 1]; an all-equal vector maps to all zeros."""
    values = np.asarray(values, dtype=float)
    lo, hi = float(values.min()), float(values.max())
    if hi > lo:
        return (values - lo) / (hi - lo), lo, hi
    return np.zeros_like(values), lo, hi


@dataclass(frozen=True)
class SensitivityReport:
    """Per-parameter direct/interaction indices, normalized, plus the ranking.

    ``direct`` is mu for Morris methods and S for Sobol; ``interaction`` is
    sigma / ST.  ``ranking`` sorts parameters descending by the sum of the two
    normalized fields, ties broken by parameter order.
    """

    method: str
    param_names: tuple[str, ...]
    direct: np.ndarray
    interaction: np.ndarray
    direct_norm: np.ndarray
    interaction_norm: np.ndarray
    ranking: tuple[int, ...]
    gap: np.ndarray                      # interaction - direct, raw scale
    direct_range: tuple[float, float]    # min/max used by the normalization
    interaction_range: tuple[float, float]
    extras: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.param_names)

    def ranked_names(self) -> tuple[str, ...]:
        return tuple(self.param_names[i] for i in self.ranking)

    def to_rows(self) -> list[dict]:
        """Flat rows (param, direct, interaction, norms, rank) for CSV export."""
        rank_of = {p: pos for pos, p in enumerate(self.ranking)}
        return [
            {
                "param": self.param_names[i],
                "direct": float(self.direct[i]),
                "interaction": float(self.interaction[i]),
                "direct_norm": float(self.direct_norm[i]),
                "interaction_norm": float(self.interaction_norm[i]),
                "rank": rank_of[i] + 1,
            }
            for i in range(self.k)
        ]

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "param_names": list(self.param_names),
            "direct": self.direct.tolist(),
            "interaction": self.interaction.tolist(),
            "direct_norm": self.direct_norm.tolist(),
            "interaction_norm": self.interaction_norm.tolist(),
            "ranking": list(self.ranking),
            "gap": self.gap.tolist(),
            "direct_range": list(self.direct_range),
            "interaction_range": list(self.interaction_range),
            "extras": {k: (v.tolist() if isinstance(v, np.ndarray) else v)
                       for k, v in self.extras.items()},
        }


def build_report(method: str, param_names, direct: np.ndarray,
                 interaction: np.ndarray, extras: dict | None = None) -> SensitivityReport:
    """Normalize raw index pairs and rank parameters by combined influence."""
    param_names = tuple(param_names)
    direct = np.asarray(direct, dtype=float)
    interaction = np.asarray(interaction, dtype=float)
    if direct.shape != (len(param_names),) or interaction.shape != direct.shape:
        raise ValueError("index vectors must have one entry per parameter")
    if not (np.isfinite(direct).all() and np.isfinite(interaction).all()):
        raise NonFiniteOutputError("raw indices must be finite")
    dn, dlo, dhi = minmax_normalize(direct)
    inorm, ilo, ihi = minmax_normalize(interaction)
    combined = dn + inorm
    # stable sort on the negated sum leaves ties in parameter order
    ranking = tuple(int(i) for i in np.argsort(-combined, kind="stable"))
    return SensitivityReport(
        method=method,
        param_names=param_names,
        direct=direct,
        interaction=interaction,
        direct_norm=dn,
        interaction_norm=inorm,
        ranking=ranking,
        gap=interaction - direct,
        direct_range=(dlo, dhi),
        interaction_range=(ilo, ihi),
        extras=dict(extras or {}),
    )


def morris_report(method: str, param_names, ee: EEMatrix) -> SensitivityReport:
    """Build the report for a Morris-style run; sigma needs r >= 2."""
    stats = morris_mu_sigma(ee)
    if stats.sigma is None:
        raise ValueError("need at least two trajectories to report sigma")
    return build_report(
        method, param_names, stats.mu, stats.sigma,
        extras={"mu_star": stats.mu_star, "dropped_trajectories": ee.dropped},
    )


def sobol_report(param_names, result: SobolResult) -> SensitivityReport:
    return build_report(
        "sobol", param_names, result.S, result.ST,
        extras={
            "S_clamped": result.S_clamped,
            "ST_clamped": result.ST_clamped,
            "variance": result.variance,
            "f0_sq": result.f0_sq,
            "dropped_rows": result.dropped_rows,
        },
    )
