"""Seeded shift/rotation transforms standing in for CEC instance data files.

The shift vector is drawn uniformly from the inner 80% of the box and the
rotation is the orthogonal factor of a seeded Gaussian matrix, with column
signs fixed so the factorization is unique.  Same (n, seed) always yields
bit-identical data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ShiftRotate:
    shift: np.ndarray        # (n,)
    rotation: np.ndarray     # (n, n) orthogonal
    seed: int

    def __post_init__(self) -> None:
        R = np.asarray(self.rotation, dtype=float)
        err = np.abs(R.T @ R - np.eye(R.shape[0])).max()
        if err > 1e-9:
            raise ValueError(f"rotation is not orthogonal (|R'R - I| = {err:.2e})")

    def apply(self, X: np.ndarray) -> np.ndarray:
        """z = R (x - shift), rows of X transformed at once."""
        return (X - self.shift) @ self.rotation.T


def make_shift_rotate(n: int, bounds: np.ndarray, seed: int,
                      rotate: bool = True) -> ShiftRotate:
    rng = np.random.default_rng(seed)
    lower, upper = bounds[:, 0], bounds[:, 1]
    center = 0.5 * (lower + upper)
    half = 0.5 * (upper - lower)
    shift = center + rng.uniform(-0.8, 0.8, size=n) * half
    if rotate:
        gauss = rng.standard_normal((n, n))
        Q, R = np.linalg.qr(gauss)
        Q = Q * np.sign(np.diag(R))  # fix sign ambiguity of the QR factors
    else:
        Q = np.eye(n)
    return ShiftRotate(shift=shift, rotation=Q, seed=int(seed))
