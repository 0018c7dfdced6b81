"""Sample-plan generators over the unit cube.

Three schemes are provided:

* ``morris_sample``    -- one-at-a-time random-walk trajectories on a p-level grid
* ``morris_lhs_sample``-- the same walk mechanics with stratified (Latin
  hypercube) start levels, one start per grid level per dimension, recycling
  level permutations when the trajectory count exceeds the level count
* ``sobol_sample``     -- paired A/B matrices plus the k column-swap matrices
  C_i used by the variance-based estimators

All generators are pure functions of ``(space, sizes, seed)``: the same seed
gives a bit-identical plan.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .hyperspace import HyperSpace, grid_delta

# A whole trajectory identical to an earlier one is re-drawn up to this many
# times; tiny grids (e.g. k=1, p=2) cannot always avoid duplicates.
_MAX_REDRAWS = 50


@dataclass(frozen=True)
class Trajectory:
    """A walk of k+1 grid points changing one coordinate at a time.

    ``moved_dim[j]`` is the single coordinate that changes between
    ``points[j]`` and ``points[j+1]``; ``delta_signs[j]`` is the direction of
    that step.  Each dimension moves exactly once.
    """

    points: np.ndarray       # (k+1, k) unit coordinates
    moved_dim: np.ndarray    # (k,)  int
    delta_signs: np.ndarray  # (k,)  int, +1 or -1


@dataclass(frozen=True)
class MorrisPlan:
    """A batch of OAT trajectories plus the grid geometry they live on."""

    method: str              # "morris" or "morris_lhs"
    param_names: tuple[str, ...]
    p: int
    delta: float
    seed: int
    trajectories: tuple[Trajectory, ...]

    @property
    def r(self) -> int:
        return len(self.trajectories)

    @property
    def k(self) -> int:
        return len(self.param_names)

    @property
    def n_points(self) -> int:
        return self.r * (self.k + 1)

    def points(self) -> np.ndarray:
        """All evaluation points, trajectory-major: shape (r*(k+1), k)."""
        return np.vstack([t.points for t in self.trajectories])

    def to_manifest(self) -> dict:
        return {
            "method": self.method,
            "param_names": list(self.param_names),
            "p": self.p,
            "delta": self.delta,
            "seed": self.seed,
            "r": self.r,
            "k": self.k,
            "lhs_starts_snapped": self.method == "morris_lhs",
            "points": [t.points.tolist() for t in self.trajectories],
            "moved_dim": [t.moved_dim.tolist() for t in self.trajectories],
            "delta_signs": [t.delta_signs.tolist() for t in self.trajectories],
        }

    @classmethod
    def from_manifest(cls, d: dict) -> "MorrisPlan":
        trajs = tuple(
            Trajectory(
                points=np.asarray(pts, dtype=float),
                moved_dim=np.asarray(md, dtype=int),
                delta_signs=np.asarray(ds, dtype=int),
            )
            for pts, md, ds in zip(d["points"], d["moved_dim"], d["delta_signs"])
        )
        return cls(
            method=d["method"],
            param_names=tuple(d["param_names"]),
            p=int(d["p"]),
            delta=float(d["delta"]),
            seed=int(d["seed"]),
            trajectories=trajs,
        )


@dataclass(frozen=True)
class SobolPlan:
    """A/B sample matrices and the k swap matrices C_i.

    ``C[i]`` equals B with column i replaced by column i of A; the plan holds
    ``N * (k + 2)`` evaluation points in block order [A, B, C_0, ..., C_{k-1}].
    """

    method: str
    param_names: tuple[str, ...]
    seed: int
    A: np.ndarray            # (N, k)
    B: np.ndarray            # (N, k)
    C: tuple[np.ndarray, ...]
    low_discrepancy: bool = False

    @property
    def N(self) -> int:
        return self.A.shape[0]

    @property
    def k(self) -> int:
        return self.A.shape[1]

    @property
    def n_points(self) -> int:
        return self.N * (self.k + 2)

    def points(self) -> np.ndarray:
        return np.vstack([self.A, self.B, *self.C])

    def to_manifest(self) -> dict:
        # C is derivable from A/B by the column-swap rule, so only A/B are stored
        return {
            "method": self.method,
            "param_names": list(self.param_names),
            "seed": self.seed,
            "N": self.N,
            "k": self.k,
            "low_discrepancy": self.low_discrepancy,
            "A": self.A.tolist(),
            "B": self.B.tolist(),
        }

    @classmethod
    def from_manifest(cls, d: dict) -> "SobolPlan":
        A = np.asarray(d["A"], dtype=float)
        B = np.asarray(d["B"], dtype=float)
        return cls(
            method="sobol",
            param_names=tuple(d["param_names"]),
            seed=int(d["seed"]),
            A=A,
            B=B,
            C=_swap_columns(A, B),
            low_discrepancy=bool(d.get("low_discrepancy", False)),
        )


def _swap_columns(A: np.ndarray, B: np.ndarray) -> tuple[np.ndarray, ...]:
    out = []
    for i in range(A.shape[1]):
        Ci = B.copy()
        Ci[:, i] = A[:, i]
        out.append(Ci)
    return tuple(out)


# ---------------------------------------------------------------------------
# Morris trajectory construction
# ---------------------------------------------------------------------------

def _walk(start_idx: np.ndarray, order: np.ndarray, signs: np.ndarray,
          p: int) -> Trajectory:
    """Build the trajectory from integer level indices; the index step is p/2."""
    k = start_idx.size
    half = p // 2
    idx = np.empty((k + 1, k), dtype=np.int64)
    idx[0] = start_idx
    for j, d in enumerate(order):
        idx[j + 1] = idx[j]
        idx[j + 1, d] += signs[d] * half
    if idx.min() < 0 or idx.max() > p - 1:
        raise AssertionError("trajectory walked off the grid")  # pragma: no cover
    return Trajectory(
        points=idx.astype(float) / (p - 1),
        moved_dim=np.asarray(order, dtype=int),
        delta_signs=np.asarray([signs[d] for d in order], dtype=int),
    )


def _draw_plain(rng: np.random.Generator, k: int, p: int):
    """Random sign per dimension, then a uniform admissible start level.

    With step p/2, levels {0..p/2-1} admit +delta and {p/2..p-1} admit -delta,
    so the start never lets a step leave [0, 1].
    """
    half = p // 2
    signs = rng.choice(np.array([-1, 1]), size=k)
    start = np.where(signs > 0,
                     rng.integers(0, half, size=k),
                     rng.integers(half, p, size=k))
    order = rng.permutation(k)
    return start, order, signs


def morris_sample(space: HyperSpace, r: int, p: int, seed: int) -> MorrisPlan:
    """r one-at-a-time trajectories with uniformly random starts, orders, signs."""
    if r < 1:
        raise ValueError(f"need at least one trajectory, got r={r}")
    delta = grid_delta(p)
    rng = np.random.default_rng(seed)
    k = space.k
    seen: set[bytes] = set()
    trajectories = []
    for _ in range(r):
        for _attempt in range(_MAX_REDRAWS):
            start, order, signs = _draw_plain(rng, k, p)
            key = start.tobytes() + order.tobytes() + signs.tobytes()
            if key not in seen:
                break
        seen.add(key)
        trajectories.append(_walk(start, order, signs, p))
    return MorrisPlan("morris", space.names, int(p), delta, int(seed),
                      tuple(trajectories))


def morris_lhs_sample(space: HyperSpace, r: int, p: int, seed: int) -> MorrisPlan:
    """Trajectories whose start levels are stratified over the grid.

    Per dimension the r starts are assigned grid levels by concatenating fresh
    random permutations of all p levels (so r = p hits every level exactly
    once and larger r recycles the strata).  The step direction is the one the
    level admits; walk mechanics match ``morris_sample``.
    """
    if r < 1:
        raise ValueError(f"need at least one trajectory, got r={r}")
    delta = grid_delta(p)
    rng = np.random.default_rng(seed)
    k = space.k
    half = p // 2

    blocks = -(-r // p)  # ceil
    levels = np.empty((r, k), dtype=np.int64)
    for d in range(k):
        seq = np.concatenate([rng.permutation(p) for _ in range(blocks)])[:r]
        levels[:, d] = seq

    seen: set[bytes] = set()
    trajectories = []
    for t in range(r):
        start = levels[t]
        signs = np.where(start < half, 1, -1)
        order = rng.permutation(k)
        for _attempt in range(_MAX_REDRAWS):
            key = start.tobytes() + order.tobytes() + signs.tobytes()
            if key not in seen:
                break
            order = rng.permutation(k)
        seen.add(key)
        trajectories.append(_walk(start, order, signs, p))
    return MorrisPlan("morris_lhs", space.names, int(p), delta, int(seed),
                      tuple(trajectories))


# ---------------------------------------------------------------------------
# Sobol A/B/C construction
# ---------------------------------------------------------------------------

def sobol_sample(space: HyperSpace, N: int, seed: int,
                 low_discrepancy: bool = False) -> SobolPlan:
    """Independent uniform A and B matrices plus the column-swap C_i family.

    A and B default to a seeded uniform PRNG; ``low_discrepancy=True`` draws
    a scrambled quasi-random sequence instead.
    """
    if N < 2:
        raise ValueError(f"need N >= 2 sample rows, got N={N}")
    k = space.k
    if low_discrepancy:
        from scipy.stats import qmc

        sampler = qmc.Sobol(d=2 * k, scramble=True, seed=seed)
        block = sampler.random(N)
        A, B = block[:, :k], block[:, k:]
    else:
        rng = np.random.default_rng(seed)
        A = rng.uniform(size=(N, k))
        B = rng.uniform(size=(N, k))
    return SobolPlan("sobol", space.names, int(seed), A, B, _swap_columns(A, B),
                     low_discrepancy=low_discrepancy)


# ---------------------------------------------------------------------------
# Plan persistence
# ---------------------------------------------------------------------------

def save_plan(plan, path: str | Path) -> None:
    Path(path).write_text(json.dumps(plan.to_manifest()))


def load_plan(path: str | Path):
    d = json.loads(Path(path).read_text())
    if d["method"] == "sobol":
        return SobolPlan.from_manifest(d)
    return MorrisPlan.from_manifest(d)
