"""Benchmark problem registry addressable by string id."""

from __future__ import annotations

import re

from .base import ClampStats, Problem, UnknownFrontError, uniform_bounds
from .moo import MOO_NAMES, make_moo
from .soo import SOO_NAMES, make_soo
from .transforms import ShiftRotate, make_shift_rotate

_MOO_ID = re.compile(r"^(?P<name>[a-z0-9]+?)(?:_m(?P<m>\d+))?(?:_n(?P<n>\d+))?$")


def make_problem(problem_id: str, n: int | None = None) -> Problem:
    """Resolve a problem id like ``"rastrigin"`` or ``"dtlz2_m3_n10"``."""
    if problem_id in SOO_NAMES:
        return make_soo(problem_id, n=n)
    match = _MOO_ID.match(problem_id)
    if match and match.group("name") in MOO_NAMES:
        m = int(match.group("m") or 3)
        dim = n or int(match.group("n") or 10)
        return make_moo(match.group("name"), m=m, n=dim)
    raise KeyError(f"unknown problem id {problem_id!r}")


def problem_manifest() -> list[dict]:
    """Provenance entry (n, bounds, seed, optimum) for every preset."""
    rows = []
    for name in SOO_NAMES + MOO_NAMES:
        p = make_problem(name)
        rows.append({
            "id": name,
            "n": p.n,
            "m": p.m,
            "lower": p.lower.tolist(),
            "upper": p.upper.tolist(),
            "seed": p.meta.get("seed"),
            "optimum_value": p.optimum_value,
            "family": p.meta.get("family"),
        })
    return rows


__all__ = [
    "ClampStats",
    "Problem",
    "ShiftRotate",
    "UnknownFrontError",
    "MOO_NAMES",
    "SOO_NAMES",
    "make_moo",
    "make_problem",
    "make_shift_rotate",
    "make_soo",
    "problem_manifest",
    "uniform_bounds",
]
