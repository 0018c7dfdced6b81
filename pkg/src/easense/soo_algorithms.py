"""CMA-ES and differential evolution with the tunable surfaces under study.

Both optimizers run to a fixed function-evaluation budget: whole generations
only, so ``evals_used`` always lands in ``(budget - lambda, budget]``.
``history[g]`` records the best value seen up to and including generation g,
hence is non-increasing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .problems.base import Problem


class BudgetError(ValueError):
    """The evaluation budget does not allow a single generation."""


class PopulationTooSmallError(ValueError):
    """DE mutation needs at least four distinct population members."""


DE_B_TYPES = ("best", "target-to-best", "rand-to-best", "rand")


@dataclass(frozen=True)
class CmaesConfig:
    lambda_: int = 50
    alpha_mu: float = 1.0
    sigma0: float = 0.5
    sigma0_scale: bool = False
    mu_lambda_ratio: float = 0.5

    def __post_init__(self) -> None:
        if not 10 <= self.lambda_ <= 1000:
            raise ValueError(f"lambda must lie in [10, 1000], got {self.lambda_}")
        if not 0.0 <= self.alpha_mu <= 4.0:
            raise ValueError(f"alpha_mu must lie in [0, 4], got {self.alpha_mu}")
        if not 0.1 <= self.sigma0 <= 2.0:
            raise ValueError(f"sigma0 must lie in [0.1, 2], got {self.sigma0}")
        if not 0.1 <= self.mu_lambda_ratio <= 1.0:
            raise ValueError(f"mu_lambda_ratio must lie in [0.1, 1], got {self.mu_lambda_ratio}")


@dataclass(frozen=True)
class DeConfig:
    lambda_: int = 50
    crossover: str = "bin"
    crossover_prob: float = 0.9
    beta_min: float = 0.2
    beta_max: float = 0.8
    b_type: str = "rand"
    b_lambda_ratio: float = 0.1

    def __post_init__(self) -> None:
        if not 10 <= self.lambda_ <= 1000:
            raise ValueError(f"lambda must lie in [10, 1000], got {self.lambda_}")
        if self.crossover not in ("bin", "exp"):
            raise ValueError(f"crossover must be 'bin' or 'exp', got {self.crossover!r}")
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ValueError(f"crossover_prob must lie in [0, 1], got {self.crossover_prob}")
        if not 0.0 <= self.beta_min <= 1.0:
            raise ValueError(f"beta_min must lie in [0, 1], got {self.beta_min}")
        if not 0.0 <= self.beta_max <= 2.0:
            raise ValueError(f"beta_max must lie in [0, 2], got {self.beta_max}")
        if self.b_type not in DE_B_TYPES:
            raise ValueError(f"b_type must be one of {DE_B_TYPES}, got {self.b_type!r}")
        if not 0.01 <= self.b_lambda_ratio <= 0.5:
            raise ValueError(f"b_lambda_ratio must lie in [0.01, 0.5], got {self.b_lambda_ratio}")


@dataclass
class RunResult:
    best_value: float
    best_point: np.ndarray
    evals_used: int
    history: np.ndarray          # best-so-far per generation
    generations: int
    failed: bool = False
    diagnostics: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# differential evolution
# ---------------------------------------------------------------------------

def de_donor(base: np.ndarray, x_r2: np.ndarray, x_r3: np.ndarray, beta: float) -> np.ndarray:
    """Donor vector: base plus the scaled difference vector."""
    base = np.asarray(base, dtype=float)
    x_r2 = np.asarray(x_r2, dtype=float)
    x_r3 = np.asarray(x_r3, dtype=float)
    if not (base.shape == x_r2.shape == x_r3.shape):
        raise ValueError("donor inputs must share a dimension")
    return base + beta * (x_r2 - x_r3)


def _pick_distinct(rng: np.random.Generator, lam: int, excl: set[int]) -> int:
    if len(excl) >= lam:
        raise PopulationTooSmallError(
            f"population of {lam} cannot supply {len(excl) + 1} distinct members"
        )
    while True:
        idx = int(rng.integers(lam))
        if idx not in excl:
            return idx


def _crossover_mask(n: int, kind: str, prob: float, rng: np.random.Generator) -> np.ndarray:
    """Which coordinates come from the donor; at least one always does."""
    if kind == "bin":
        mask = rng.uniform(size=n) < prob
        mask[rng.integers(n)] = True
        return mask
    # exponential: a contiguous run starting at a random position
    mask = np.zeros(n, dtype=bool)
    start = rng.integers(n)
    length = 1
    while length < n and rng.uniform() < prob:
        length += 1
    idx = (start + np.arange(length)) % n
    mask[idx] = True
    return mask


def run_de(problem: Problem, config: DeConfig, budget: int, seed: int) -> RunResult:
    """Classic DE with configurable base-vector selection and crossover."""
    lam = config.lambda_
    if budget < lam:
        raise BudgetError(f"budget {budget} is below the population size {lam}")
    if lam < 4:
        raise PopulationTooSmallError("DE needs at least 4 population members")
    rng = np.random.default_rng(seed)
    n = problem.n
    lower, upper = problem.lower, problem.upper

    X = rng.uniform(lower, upper, size=(lam, n))
    f = problem.evaluate_many(X)
    evals = lam

    best_idx = int(np.argmin(f))
    best_value = float(f[best_idx])
    best_point = X[best_idx].copy()
    history = [best_value]

    beta_hi = max(config.beta_min, config.beta_max)
    pool = max(1, int(np.ceil(config.b_lambda_ratio * lam)))
    generations = 0

    while evals + lam <= budget:
        beta = rng.uniform(config.beta_min, beta_hi) if beta_hi > config.beta_min \
            else config.beta_min
        order = np.argsort(f, kind="stable")
        trials = np.empty_like(X)
        for t in range(lam):
            # pool of top-ranked members feeds the 'best'-flavored variants
            leader = int(order[rng.integers(pool)])
            if config.b_type == "best":
                base = X[leader]
                excl = {t, leader}
            elif config.b_type == "target-to-best":
                base = X[t] + beta * (X[leader] - X[t])
                excl = {t, leader}
            elif config.b_type == "rand-to-best":
                r1 = _pick_distinct(rng, lam, {t})
                base = X[r1] + beta * (X[leader] - X[r1])
                excl = {t, r1, leader}
            else:
                r1 = _pick_distinct(rng, lam, {t})
                base = X[r1]
                excl = {t, r1}
            r2 = _pick_distinct(rng, lam, excl)
            r3 = _pick_distinct(rng, lam, excl | {r2})
            donor = de_donor(base, X[r2], X[r3], beta)
            mask = _crossover_mask(n, config.crossover, config.crossover_prob, rng)
            trials[t] = np.where(mask, donor, X[t])
        trials = np.clip(trials, lower, upper)
        f_trials = problem.evaluate_many(trials)
        evals += lam
        generations += 1

        improved = f_trials <= f
        X[improved] = trials[improved]
        f[improved] = f_trials[improved]

        gen_best = int(np.argmin(f))
        if f[gen_best] < best_value:
            best_value = float(f[gen_best])
            best_point = X[gen_best].copy()
        history.append(best_value)

    return RunResult(best_value=best_value, best_point=best_point,
                     evals_used=evals, history=np.asarray(history),
                     generations=generations)


# ---------------------------------------------------------------------------
# CMA-ES
# ---------------------------------------------------------------------------

def run_cmaes(problem: Problem, config: CmaesConfig, budget: int, seed: int) -> RunResult:
    """Covariance matrix adaptation ES with canonical constants.

    ``mu_lambda_ratio`` sets the selected fraction, ``alpha_mu`` scales the
    rank-mu covariance learning rate (1 recovers the textbook update, 0
    disables it), and ``sigma0_scale`` rescales the initial step size by the
    mean half-width of the problem box.
    """
    lam = config.lambda_
    if budget < lam:
        raise BudgetError(f"budget {budget} is below the population size {lam}")
    rng = np.random.default_rng(seed)
    n = problem.n
    lower, upper = problem.lower, problem.upper

    sigma = config.sigma0
    if config.sigma0_scale:
        sigma *= float(np.mean(upper - lower)) / 2.0

    mu = max(1, int(np.ceil(config.mu_lambda_ratio * lam)))
    weights = np.log(mu + 0.5) - np.log(np.arange(1, mu + 1))
    weights /= weights.sum()
    mu_eff = 1.0 / (weights ** 2).sum()

    c_sigma = (mu_eff + 2.0) / (n + mu_eff + 5.0)
    d_sigma = 1.0 + 2.0 * max(0.0, np.sqrt((mu_eff - 1.0) / (n + 1.0)) - 1.0) + c_sigma
    c_c = (4.0 + mu_eff / n) / (n + 4.0 + 2.0 * mu_eff / n)
    c_1 = 2.0 / ((n + 1.3) ** 2 + mu_eff)
    c_mu_default = 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((n + 2.0) ** 2 + mu_eff)
    c_mu = min(1.0 - c_1, config.alpha_mu * c_mu_default)
    chi_n = np.sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n ** 2))

    mean = rng.uniform(lower, upper)
    C = np.eye(n)
    p_sigma = np.zeros(n)
    p_c = np.zeros(n)

    best_value = np.inf
    best_point = mean.copy()
    history = []
    evals = 0
    generations = 0
    repairs = 0
    failed = False

    max_gens = budget // lam
    for gen in range(max_gens):
        try:
            eigvals, eigvecs = np.linalg.eigh(C)
        except np.linalg.LinAlgError:
            failed = True
            break
        if (eigvals <= 0).any() or not np.isfinite(eigvals).all():
            eigvals = np.clip(eigvals, 1e-12, None)
            repairs += 1
            if not np.isfinite(eigvals).all():
                failed = True
                break
        D = np.sqrt(eigvals)
        inv_sqrt_C = eigvecs @ np.diag(1.0 / D) @ eigvecs.T

        Z = rng.standard_normal((lam, n))
        X = mean + sigma * (Z * D) @ eigvecs.T
        X = np.clip(X, lower, upper)
        f = problem.evaluate_many(X)
        evals += lam
        generations += 1

        order = np.argsort(f, kind="stable")
        if f[order[0]] < best_value:
            best_value = float(f[order[0]])
            best_point = X[order[0]].copy()
        history.append(best_value)

        selected = X[order[:mu]]
        new_mean = weights @ selected
        y_w = (new_mean - mean) / sigma

        p_sigma = ((1.0 - c_sigma) * p_sigma
                   + np.sqrt(c_sigma * (2.0 - c_sigma) * mu_eff) * (inv_sqrt_C @ y_w))
        norm_ps = np.linalg.norm(p_sigma)
        h_sigma = (norm_ps / np.sqrt(1.0 - (1.0 - c_sigma) ** (2 * (gen + 1)))
                   < (1.4 + 2.0 / (n + 1.0)) * chi_n)
        p_c = ((1.0 - c_c) * p_c
               + (np.sqrt(c_c * (2.0 - c_c) * mu_eff) * y_w if h_sigma else 0.0))

        artmp = (selected - mean) / sigma
        rank_mu = (weights[:, None] * artmp).T @ artmp
        C = ((1.0 - c_1 - c_mu) * C
             + c_1 * (np.outer(p_c, p_c) + (0.0 if h_sigma else c_c * (2.0 - c_c)) * C)
             + c_mu * rank_mu)
        C = 0.5 * (C + C.T)
        sigma *= np.exp(min(1.0, (c_sigma / d_sigma) * (norm_ps / chi_n - 1.0)))

        mean = new_mean
        if not (np.isfinite(mean).all() and np.isfinite(sigma) and np.isfinite(C).all()):
            failed = True
            break

    if not history:
        failed = True
        history = [np.inf]
    return RunResult(best_value=float(best_value), best_point=best_point,
                     evals_used=evals, history=np.asarray(history, dtype=float),
                     generations=generations, failed=failed,
                     diagnostics={"eigen_repairs": repairs})
