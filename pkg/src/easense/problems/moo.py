"""Three-objective benchmark problems with analytic Pareto-front samplers.

Ten problems ship as presets (m=3, n=10): DTLZ1-4, the inverted variants
IDTLZ1/IDTLZ2, convex DTLZ2, and WFG3/6/7.  Front samplers return structured
point sets (simplex lattice, sphere octant, or the problem's own geometry);
``count=1`` yields the single centroid point.
"""

from __future__ import annotations

from math import comb

import numpy as np

from .base import Problem, uniform_bounds


def _simplex_directions(count: int, m: int) -> np.ndarray:
    """Smallest simplex lattice with at least ``count`` points (centroid for 1)."""
    from ..moo_algorithms import das_dennis_points

    if count == 1:
        return np.full((1, m), 1.0 / m)
    H = 1
    while comb(H + m - 1, m - 1) < count:
        H += 1
    return das_dennis_points(m, H)


# ---------------------------------------------------------------------------
# DTLZ family (decision space [0, 1]^n, k = n - m + 1 distance variables)
# ---------------------------------------------------------------------------

def _dtlz_g_rastrigin(Xd):
    k = Xd.shape[1]
    return 100.0 * (k + ((Xd - 0.5) ** 2
                         - np.cos(20.0 * np.pi * (Xd - 0.5))).sum(axis=1))


def _dtlz_g_sphere(Xd):
    return ((Xd - 0.5) ** 2).sum(axis=1)


def _dtlz1_objs(X, m):
    Xp, Xd = X[:, :m - 1], X[:, m - 1:]
    g = _dtlz_g_rastrigin(Xd)
    F = np.empty((X.shape[0], m))
    for i in range(m):
        f = 0.5 * (1.0 + g)
        f = f * Xp[:, :m - 1 - i].prod(axis=1)
        if i > 0:
            f = f * (1.0 - Xp[:, m - 1 - i])
        F[:, i] = f
    return F


def _dtlz2_objs(X, m, g_fn=_dtlz_g_sphere, alpha=1.0):
    Xp, Xd = X[:, :m - 1], X[:, m - 1:]
    g = g_fn(Xd)
    theta = Xp ** alpha * np.pi / 2.0
    F = np.empty((X.shape[0], m))
    for i in range(m):
        f = 1.0 + g
        f = f * np.cos(theta[:, :m - 1 - i]).prod(axis=1)
        if i > 0:
            f = f * np.sin(theta[:, m - 1 - i])
        F[:, i] = f
    return F


def _dtlz3_objs(X, m):
    return _dtlz2_objs(X, m, g_fn=_dtlz_g_rastrigin)


def _dtlz4_objs(X, m):
    return _dtlz2_objs(X, m, alpha=100.0)


def _cdtlz2_objs(X, m):
    F = _dtlz2_objs(X, m)
    F[:, :-1] = F[:, :-1] ** 4
    F[:, -1] = F[:, -1] ** 2
    return F


def _idtlz1_objs(X, m):
    Xd = X[:, m - 1:]
    g = _dtlz_g_rastrigin(Xd)
    return 0.5 * (1.0 + g)[:, None] - _dtlz1_objs(X, m)


def _idtlz2_objs(X, m):
    Xd = X[:, m - 1:]
    g = _dtlz_g_sphere(Xd)
    return (1.0 + g)[:, None] - _dtlz2_objs(X, m)


def _front_dtlz1(count, m):
    return 0.5 * _simplex_directions(count, m)


def _front_sphere(count, m):
    W = _simplex_directions(count, m)
    return W / np.linalg.norm(W, axis=1, keepdims=True)


def _front_cdtlz2(count, m):
    S = _front_sphere(count, m)
    S[:, :-1] = S[:, :-1] ** 4
    S[:, -1] = S[:, -1] ** 2
    return S


def _front_idtlz1(count, m):
    return 0.5 - 0.5 * _simplex_directions(count, m)


def _front_idtlz2(count, m):
    return 1.0 - _front_sphere(count, m)


# ---------------------------------------------------------------------------
# WFG toolkit problems (decision variable j bounded by [0, 2j])
# ---------------------------------------------------------------------------

def _s_linear(y, A):
    return np.abs(y - A) / np.abs(np.floor(A - y) + A)


def _b_param(y, u, A, B, C):
    v = A - (1.0 - 2.0 * u) * np.abs(np.floor(0.5 - u) + A)
    return y ** (B + (C - B) * v)


def _r_nonsep(Y, A):
    size = Y.shape[1]
    num = np.zeros(Y.shape[0])
    for j in range(size):
        num += Y[:, j]
        for q in range(A - 1):
            num += np.abs(Y[:, j] - Y[:, (j + 1 + q) % size])
    half_up = -(-A // 2)
    denom = (size / A) * half_up * (1.0 + 2.0 * A - 2.0 * half_up)
    return num / denom


def _wfg_normalize(Z):
    return Z / (2.0 * np.arange(1, Z.shape[1] + 1))


def _wfg_shapes_concave(T, m):
    x = T.copy()                      # A_i = 1 for every non-degenerate shape
    xm = T[:, -1]
    F = np.empty_like(T)
    for i in range(m):
        h = np.ones(T.shape[0])
        h *= np.sin(x[:, :m - 1 - i] * np.pi / 2.0).prod(axis=1)
        if i > 0:
            h *= np.cos(x[:, m - 1 - i] * np.pi / 2.0)
        F[:, i] = xm + 2.0 * (i + 1) * h
    return F


def _wfg3_objs(Z, m, k):
    n = Z.shape[1]
    l = n - k
    y = _wfg_normalize(Z)
    y[:, k:] = _s_linear(y[:, k:], 0.35)
    dist = np.column_stack([_r_nonsep(y[:, k + 2 * i:k + 2 * i + 2], 2)
                            for i in range(l // 2)])
    step = k // (m - 1)
    T = np.column_stack(
        [y[:, i * step:(i + 1) * step].mean(axis=1) for i in range(m - 1)]
        + [dist.mean(axis=1)]
    )
    # degenerate front: only the first position coordinate stays free
    tm = T[:, -1]
    x = np.empty_like(T)
    x[:, 0] = np.maximum(tm, 1.0) * (T[:, 0] - 0.5) + 0.5
    for i in range(1, m - 1):
        x[:, i] = np.maximum(tm, 0.0) * (T[:, i] - 0.5) + 0.5
    x[:, -1] = tm
    F = np.empty((Z.shape[0], m))
    for i in range(m):
        h = x[:, :m - 1 - i].prod(axis=1)
        if i > 0:
            h = h * (1.0 - x[:, m - 1 - i])
        F[:, i] = tm + 2.0 * (i + 1) * h
    return F


def _wfg6_objs(Z, m, k):
    n = Z.shape[1]
    l = n - k
    y = _wfg_normalize(Z)
    y[:, k:] = _s_linear(y[:, k:], 0.35)
    step = k // (m - 1)
    T = np.column_stack(
        [_r_nonsep(y[:, i * step:(i + 1) * step], step) for i in range(m - 1)]
        + [_r_nonsep(y[:, k:], l)]
    )
    return _wfg_shapes_concave(T, m)


def _wfg7_objs(Z, m, k):
    y = _wfg_normalize(Z)
    biased = y.copy()
    for i in range(k):
        u = y[:, i + 1:].mean(axis=1)
        biased[:, i] = _b_param(y[:, i], u, 0.98 / 49.98, 0.02, 50.0)
    y = biased
    y[:, k:] = _s_linear(y[:, k:], 0.35)
    step = k // (m - 1)
    T = np.column_stack(
        [y[:, i * step:(i + 1) * step].mean(axis=1) for i in range(m - 1)]
        + [y[:, k:].mean(axis=1)]
    )
    return _wfg_shapes_concave(T, m)


def _front_wfg3(count, m):
    if m != 3:
        raise ValueError("wfg3 front sampler is defined for m = 3")
    t = np.array([0.5]) if count == 1 else np.linspace(0.0, 1.0, count)
    return np.column_stack([t, 2.0 * t, 6.0 * (1.0 - t)])


def _front_wfg_concave(count, m):
    return _front_sphere(count, m) * (2.0 * np.arange(1, m + 1))


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

_DTLZ = {
    "cdtlz2": (_cdtlz2_objs, _front_cdtlz2),
    "dtlz1": (_dtlz1_objs, _front_dtlz1),
    "dtlz2": (_dtlz2_objs, _front_sphere),
    "dtlz3": (_dtlz3_objs, _front_sphere),
    "dtlz4": (_dtlz4_objs, _front_sphere),
    "idtlz1": (_idtlz1_objs, _front_idtlz1),
    "idtlz2": (_idtlz2_objs, _front_idtlz2),
}

_WFG = {
    "wfg3": (_wfg3_objs, _front_wfg3),
    "wfg6": (_wfg6_objs, _front_wfg_concave),
    "wfg7": (_wfg7_objs, _front_wfg_concave),
}

MOO_NAMES = tuple(_DTLZ) + tuple(_WFG)


def make_moo(name: str, m: int = 3, n: int = 10) -> Problem:
    """Build a multi-objective suite member (defaults: 3 objectives, n = 10)."""
    if m < 2:
        raise ValueError("need at least two objectives")
    if name in _DTLZ:
        objs, front = _DTLZ[name]
        if n < m:
            raise ValueError(f"{name}: need n >= m")
        return Problem(
            name=name, n=n, bounds=uniform_bounds(n, 0.0, 1.0), m=m,
            batch_eval=lambda X, _o=objs, _m=m: _o(X, _m),
            front_sampler=lambda count, _f=front, _m=m: _f(count, _m),
            meta={"family": "dtlz"},
        )
    if name in _WFG:
        objs, front = _WFG[name]
        k = 2 * (m - 1)  # position parameters; remainder are distance
        if n <= k or (n - k) % 2 != 0:
            raise ValueError(f"{name}: need n > {k} with an even distance count")
        bounds = np.column_stack([np.zeros(n), 2.0 * np.arange(1, n + 1)])
        return Problem(
            name=name, n=n, bounds=bounds, m=m,
            batch_eval=lambda X, _o=objs, _m=m, _k=k: _o(X, _m, _k),
            front_sampler=lambda count, _f=front, _m=m: _f(count, _m),
            meta={"family": "wfg", "k_position": k},
        )
    raise KeyError(f"unknown multi-objective problem {name!r}")
