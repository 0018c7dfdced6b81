"""Single-objective benchmark suite: 23 classic functions plus 10 shifted /
shifted-and-rotated variants with seeded synthetic transform data.

All evaluators are batch-vectorized: input (pop, n), output (pop,).  The whole
suite is minimization-oriented.
"""

from __future__ import annotations

import zlib

import numpy as np

from .base import Problem, uniform_bounds
from .transforms import make_shift_rotate

# ---------------------------------------------------------------------------
# classic scalable functions
# ---------------------------------------------------------------------------

def sphere(X):
    return (X ** 2).sum(axis=1)


def schwefel_2_22(X):
    a = np.abs(X)
    return a.sum(axis=1) + a.prod(axis=1)


def schwefel_1_2(X):
    return (np.cumsum(X, axis=1) ** 2).sum(axis=1)


def schwefel_2_21(X):
    return np.abs(X).max(axis=1)


def rosenbrock(X):
    return (100.0 * (X[:, 1:] - X[:, :-1] ** 2) ** 2 + (X[:, :-1] - 1.0) ** 2).sum(axis=1)


def step(X):
    return (np.floor(X + 0.5) ** 2).sum(axis=1)


def _hash_noise(row: np.ndarray) -> float:
    # deterministic stand-in for the additive uniform noise term: derived from
    # the point itself so evaluation stays reentrant and replayable
    return zlib.crc32(row.tobytes()) / 2 ** 32


def quartic_noise(X):
    i = np.arange(1, X.shape[1] + 1, dtype=float)
    base = (i * X ** 4).sum(axis=1)
    noise = np.array([_hash_noise(row) for row in X])
    return base + noise


def schwefel_2_26(X):
    return -(X * np.sin(np.sqrt(np.abs(X)))).sum(axis=1)


def rastrigin(X):
    return (X ** 2 - 10.0 * np.cos(2.0 * np.pi * X) + 10.0).sum(axis=1)


def ackley(X):
    n = X.shape[1]
    return (-20.0 * np.exp(-0.2 * np.sqrt((X ** 2).sum(axis=1) / n))
            - np.exp(np.cos(2.0 * np.pi * X).sum(axis=1) / n) + 20.0 + np.e)


def griewank(X):
    i = np.sqrt(np.arange(1, X.shape[1] + 1, dtype=float))
    return (X ** 2).sum(axis=1) / 4000.0 - np.cos(X / i).prod(axis=1) + 1.0


def _u_penalty(X, a, k, m):
    over = np.maximum(X - a, 0.0)
    under = np.maximum(-X - a, 0.0)
    return (k * (over ** m + under ** m)).sum(axis=1)


def penalized_1(X):
    n = X.shape[1]
    y = 1.0 + (X + 1.0) / 4.0
    core = (10.0 * np.sin(np.pi * y[:, 0]) ** 2
            + ((y[:, :-1] - 1.0) ** 2
               * (1.0 + 10.0 * np.sin(np.pi * y[:, 1:]) ** 2)).sum(axis=1)
            + (y[:, -1] - 1.0) ** 2)
    return np.pi / n * core + _u_penalty(X, 10.0, 100.0, 4)


def penalized_2(X):
    core = (np.sin(3.0 * np.pi * X[:, 0]) ** 2
            + ((X[:, :-1] - 1.0) ** 2
               * (1.0 + np.sin(3.0 * np.pi * X[:, 1:]) ** 2)).sum(axis=1)
            + (X[:, -1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * X[:, -1]) ** 2))
    return 0.1 * core + _u_penalty(X, 5.0, 100.0, 4)


# ---------------------------------------------------------------------------
# classic fixed-dimension functions
# ---------------------------------------------------------------------------

_FOX_A = np.array([
    [-32, -16, 0, 16, 32] * 5,
    [-32] * 5 + [-16] * 5 + [0] * 5 + [16] * 5 + [32] * 5,
], dtype=float)


def foxholes(X):
    diff = X[:, :, None] - _FOX_A[None, :, :]          # (pop, 2, 25)
    inner = (diff ** 6).sum(axis=1) + np.arange(1, 26)  # (pop, 25)
    return 1.0 / (1.0 / 500.0 + (1.0 / inner).sum(axis=1))


_KOW_A = np.array([0.1957, 0.1947, 0.1735, 0.16, 0.0844, 0.0627,
                   0.0456, 0.0342, 0.0323, 0.0235, 0.0246])
_KOW_B = 1.0 / np.array([0.25, 0.5, 1, 2, 4, 6, 8, 10, 12, 14, 16])


def kowalik(X):
    b = _KOW_B[None, :]
    num = X[:, 0:1] * (b ** 2 + b * X[:, 1:2])
    den = b ** 2 + b * X[:, 2:3] + X[:, 3:4]
    return ((_KOW_A[None, :] - num / den) ** 2).sum(axis=1)


def six_hump_camel(X):
    x1, x2 = X[:, 0], X[:, 1]
    return (4 * x1 ** 2 - 2.1 * x1 ** 4 + x1 ** 6 / 3.0
            + x1 * x2 - 4 * x2 ** 2 + 4 * x2 ** 4)


def branin(X):
    x1, x2 = X[:, 0], X[:, 1]
    return ((x2 - 5.1 * x1 ** 2 / (4 * np.pi ** 2) + 5 * x1 / np.pi - 6) ** 2
            + 10 * (1 - 1 / (8 * np.pi)) * np.cos(x1) + 10)


def goldstein_price(X):
    x1, x2 = X[:, 0], X[:, 1]
    a = 1 + (x1 + x2 + 1) ** 2 * (19 - 14 * x1 + 3 * x1 ** 2
                                  - 14 * x2 + 6 * x1 * x2 + 3 * x2 ** 2)
    b = 30 + (2 * x1 - 3 * x2) ** 2 * (18 - 32 * x1 + 12 * x1 ** 2
                                       + 48 * x2 - 36 * x1 * x2 + 27 * x2 ** 2)
    return a * b


_H3_A = np.array([[3, 10, 30], [0.1, 10, 35], [3, 10, 30], [0.1, 10, 35]], dtype=float)
_H3_P = np.array([[0.3689, 0.1170, 0.2673], [0.4699, 0.4387, 0.7470],
                  [0.1091, 0.8732, 0.5547], [0.03815, 0.5743, 0.8828]])
_H6_A = np.array([[10, 3, 17, 3.5, 1.7, 8], [0.05, 10, 17, 0.1, 8, 14],
                  [3, 3.5, 1.7, 10, 17, 8], [17, 8, 0.05, 10, 0.1, 14]], dtype=float)
_H6_P = np.array([[0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
                  [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
                  [0.2348, 0.1415, 0.3522, 0.2883, 0.3047, 0.6650],
                  [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381]])
_HART_C = np.array([1.0, 1.2, 3.0, 3.2])


def _hartman(X, A, P):
    expo = (A[None, :, :] * (X[:, None, :] - P[None, :, :]) ** 2).sum(axis=2)
    return -(_HART_C[None, :] * np.exp(-expo)).sum(axis=1)


def hartman_3(X):
    return _hartman(X, _H3_A, _H3_P)


def hartman_6(X):
    return _hartman(X, _H6_A, _H6_P)


_SHEKEL_A = np.array([[4, 4, 4, 4], [1, 1, 1, 1], [8, 8, 8, 8], [6, 6, 6, 6],
                      [3, 7, 3, 7], [2, 9, 2, 9], [5, 5, 3, 3], [8, 1, 8, 1],
                      [6, 2, 6, 2], [7, 3.6, 7, 3.6]])
_SHEKEL_C = np.array([0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5])


def _shekel(X, m):
    diff = X[:, None, :] - _SHEKEL_A[None, :m, :]
    return -(1.0 / ((diff ** 2).sum(axis=2) + _SHEKEL_C[None, :m])).sum(axis=1)


# ---------------------------------------------------------------------------
# base functions for the shifted / rotated group
# ---------------------------------------------------------------------------

def elliptic(X):
    n = X.shape[1]
    weights = 10.0 ** (6.0 * np.arange(n) / max(n - 1, 1))
    return (weights * X ** 2).sum(axis=1)


def weierstrass(X, a=0.5, b=3.0, k_max=20):
    k = np.arange(k_max + 1)
    ak = a ** k
    bk = b ** k
    term = (ak * np.cos(2.0 * np.pi * bk * (X[:, :, None] + 0.5))).sum(axis=2)
    offset = X.shape[1] * (ak * np.cos(np.pi * bk)).sum()
    return term.sum(axis=1) - offset


def schwefel_modified(X):
    n = X.shape[1]
    w = X + 420.9687462275036
    aw = np.abs(w)
    mod_in = 500.0 - np.mod(w, 500.0)
    mod_out = np.mod(aw, 500.0) - 500.0
    g_mid = w * np.sin(np.sqrt(aw))
    g_hi = mod_in * np.sin(np.sqrt(np.abs(mod_in))) - (w - 500.0) ** 2 / (10000.0 * n)
    g_lo = mod_out * np.sin(np.sqrt(np.abs(mod_out))) - (w + 500.0) ** 2 / (10000.0 * n)
    g = np.where(w > 500.0, g_hi, np.where(w < -500.0, g_lo, g_mid))
    return 418.9829 * n - g.sum(axis=1)


def katsuura(X):
    n = X.shape[1]
    j = 2.0 ** np.arange(1, 33)
    scaled = X[:, :, None] * j
    frac = np.abs(scaled - np.round(scaled)) / j
    s = frac.sum(axis=2)
    factors = (1.0 + np.arange(1, n + 1) * s) ** (10.0 / n ** 1.2)
    return 10.0 / n ** 2 * factors.prod(axis=1) - 10.0 / n ** 2


def happycat(X):
    n = X.shape[1]
    r2 = (X ** 2).sum(axis=1)
    return (np.abs(r2 - n) ** 0.25 + (0.5 * r2 + X.sum(axis=1)) / n + 0.5)


# ---------------------------------------------------------------------------
# problem construction
# ---------------------------------------------------------------------------

# (evaluator, default n, lower, upper, optimum point scalar or None, optimum value)
_CLASSIC = {
    "sphere": (sphere, 30, -100, 100, 0.0, 0.0),
    "schwefel_2_22": (schwefel_2_22, 30, -10, 10, 0.0, 0.0),
    "schwefel_1_2": (schwefel_1_2, 30, -100, 100, 0.0, 0.0),
    "schwefel_2_21": (schwefel_2_21, 30, -100, 100, 0.0, 0.0),
    "rosenbrock": (rosenbrock, 30, -30, 30, 1.0, 0.0),
    "step": (step, 30, -100, 100, 0.0, 0.0),
    "quartic_noise": (quartic_noise, 30, -1.28, 1.28, None, None),
    "schwefel_2_26": (schwefel_2_26, 30, -500, 500, 420.9687462275036, None),
    "rastrigin": (rastrigin, 30, -5.12, 5.12, 0.0, 0.0),
    "ackley": (ackley, 30, -32, 32, 0.0, 0.0),
    "griewank": (griewank, 30, -600, 600, 0.0, 0.0),
    "penalized_1": (penalized_1, 30, -50, 50, -1.0, 0.0),
    "penalized_2": (penalized_2, 30, -50, 50, 1.0, 0.0),
}

_FIXED = {
    "foxholes": (foxholes, 2, [[-65.536, 65.536]] * 2),
    "kowalik": (kowalik, 4, [[-5, 5]] * 4),
    "six_hump_camel": (six_hump_camel, 2, [[-5, 5]] * 2),
    "branin": (branin, 2, [[-5, 10], [0, 15]]),
    "goldstein_price": (goldstein_price, 2, [[-2, 2]] * 2),
    "hartman_3": (hartman_3, 3, [[0, 1]] * 3),
    "hartman_6": (hartman_6, 6, [[0, 1]] * 6),
    "shekel_5": (lambda X: _shekel(X, 5), 4, [[0, 10]] * 4),
    "shekel_7": (lambda X: _shekel(X, 7), 4, [[0, 10]] * 4),
    "shekel_10": (lambda X: _shekel(X, 10), 4, [[0, 10]] * 4),
}

# (base evaluator, default n, lower, upper, rotate, z scale, z offset, seed)
_TRANSFORMED = {
    "shifted_sphere": (sphere, 30, -100, 100, False, 1.0, 0.0, 9101),
    "shifted_elliptic": (elliptic, 30, -100, 100, False, 1.0, 0.0, 9102),
    "shifted_ackley": (ackley, 30, -32, 32, False, 1.0, 0.0, 9103),
    "shifted_griewank": (griewank, 30, -600, 600, False, 1.0, 0.0, 9104),
    "shifted_rotated_rosenbrock": (rosenbrock, 30, -30, 30, True, 1.0, 1.0, 9105),
    "shifted_rotated_rastrigin": (rastrigin, 30, -5.12, 5.12, True, 1.0, 0.0, 9106),
    "shifted_rotated_weierstrass": (weierstrass, 30, -0.5, 0.5, True, 1.0, 0.0, 9107),
    "shifted_rotated_schwefel": (schwefel_modified, 30, -100, 100, True, 10.0, 0.0, 9108),
    "shifted_rotated_katsuura": (katsuura, 30, -100, 100, True, 0.05, 0.0, 9109),
    "shifted_rotated_happycat": (happycat, 30, -100, 100, True, 0.05, -1.0, 9110),
}

SOO_NAMES = tuple(_CLASSIC) + tuple(_FIXED) + tuple(_TRANSFORMED)


def make_soo(name: str, n: int | None = None) -> Problem:
    """Build a single-objective suite member; scalable members accept ``n``."""
    if name in _CLASSIC:
        fn, default_n, lo, hi, opt_x, opt_f = _CLASSIC[name]
        n = n or default_n
        opt_point = np.full(n, opt_x) if opt_x is not None else None
        return Problem(name=name, n=n, bounds=uniform_bounds(n, lo, hi), m=1,
                       batch_eval=fn, optimum_point=opt_point, optimum_value=opt_f,
                       meta={"family": "classic"})
    if name in _FIXED:
        fn, fixed_n, bounds = _FIXED[name]
        if n is not None and n != fixed_n:
            raise ValueError(f"{name} has fixed dimension {fixed_n}")
        return Problem(name=name, n=fixed_n, bounds=np.asarray(bounds, dtype=float),
                       m=1, batch_eval=fn, meta={"family": "classic"})
    if name in _TRANSFORMED:
        base, default_n, lo, hi, rotate, scale, offset, seed = _TRANSFORMED[name]
        n = n or default_n
        bounds = uniform_bounds(n, lo, hi)
        tr = make_shift_rotate(n, bounds, seed, rotate=rotate)

        def evaluator(X, _base=base, _tr=tr, _scale=scale, _offset=offset):
            return _base(_scale * _tr.apply(X) + _offset)

        # the base optimum z* maps back to x* = shift + R' (z* - offset) / scale
        z_star = {"shifted_rotated_rosenbrock": np.ones(n),
                  "shifted_rotated_happycat": -np.ones(n)}.get(name, np.zeros(n))
        opt_point = tr.shift + tr.rotation.T @ ((z_star - offset) / scale)
        opt_value = float(base(z_star[None, :])[0])
        return Problem(name=name, n=n, bounds=bounds, m=1, batch_eval=evaluator,
                       optimum_point=opt_point, optimum_value=opt_value,
                       meta={"family": "cec_style", "seed": seed, "rotate": rotate,
                             "scale": scale, "offset": offset})
    raise KeyError(f"unknown single-objective problem {name!r}")
