"""Benchmark problem container shared by the single- and multi-objective suites."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np


class UnknownFrontError(ValueError):
    """The problem has no analytic Pareto-front sampler."""


@dataclass
class ClampStats:
    """Caller-owned tally of out-of-bounds evaluations (clamp-and-flag)."""

    clamped: int = 0


@dataclass(frozen=True)
class Problem:
    """A benchmark objective with box bounds.

    ``batch_eval`` maps a (pop, n) decision matrix to (pop,) values for
    single-objective problems and to (pop, m) for multi-objective ones.
    Instances are immutable and evaluation is reentrant, so a problem can be
    shared across concurrently executing runs.
    """

    name: str
    n: int
    bounds: np.ndarray                       # (n, 2) lower/upper
    m: int
    batch_eval: Callable[[np.ndarray], np.ndarray]
    front_sampler: Callable[[int], np.ndarray] | None = None
    optimum_point: np.ndarray | None = None
    optimum_value: float | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        b = np.asarray(self.bounds, dtype=float)
        if b.shape != (self.n, 2) or not (b[:, 0] < b[:, 1]).all():
            raise ValueError(f"{self.name}: bounds must be (n, 2) with lower < upper")
        object.__setattr__(self, "bounds", b)

    @property
    def lower(self) -> np.ndarray:
        return self.bounds[:, 0]

    @property
    def upper(self) -> np.ndarray:
        return self.bounds[:, 1]

    def clamp(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lower, self.upper)

    def evaluate(self, x: np.ndarray, stats: ClampStats | None = None):
        """Evaluate one decision vector; out-of-bounds input is clamped and flagged."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"{self.name}: expected {self.n} variables, got {x.shape}")
        clipped = self.clamp(x)
        if stats is not None and not np.array_equal(clipped, x):
            stats.clamped += 1
        out = self.batch_eval(clipped[None, :])[0]
        return float(out) if self.m == 1 else np.asarray(out, dtype=float)

    def evaluate_many(self, X: np.ndarray, stats: ClampStats | None = None) -> np.ndarray:
        """Evaluate a (pop, n) batch with the same clamp-and-flag rule."""
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n:
            raise ValueError(f"{self.name}: expected (pop, {self.n}) batch, got {X.shape}")
        clipped = self.clamp(X)
        if stats is not None:
            stats.clamped += int((clipped != X).any(axis=1).sum())
        return np.asarray(self.batch_eval(clipped), dtype=float)

    def sample_true_front(self, count: int) -> np.ndarray:
        """``count`` structured points on the analytic Pareto front (MOO only)."""
        if self.front_sampler is None:
            raise UnknownFrontError(f"{self.name}: no analytic front sampler available")
        if count < 1:
            raise ValueError("count must be >= 1")
        return self.front_sampler(count)


def uniform_bounds(n: int, lower: float, upper: float) -> np.ndarray:
    return np.tile(np.array([lower, upper], dtype=float), (n, 1))
