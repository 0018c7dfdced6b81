"""Mixed-type hyperparameter domains and the p-level grid geometry samplers walk on.

A :class:`HyperSpace` is an ordered list of parameters (continuous, integer,
categorical, boolean).  Samplers operate on the unit cube ``[0, 1]^k``;
``decode`` maps unit coordinates to concrete parameter values.  Categorical
parameters are embedded as equal-width sub-intervals of ``[0, 1]`` so that a
one-at-a-time grid step can cross a category boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

CONTINUOUS = "continuous"
INTEGER = "integer"
CATEGORICAL = "categorical"
BOOLEAN = "boolean"

_KINDS = (CONTINUOUS, INTEGER, CATEGORICAL, BOOLEAN)


class GridError(ValueError):
    """Raised for an invalid p-level grid request."""


class ShapeError(ValueError):
    """Raised when a unit point has the wrong number of coordinates."""


@dataclass(frozen=True)
class ParamSpec:
    """One hyperparameter: a numeric range or an ordered label set."""

    name: str
    kind: str
    lower: float | None = None
    upper: float | None = None
    categories: tuple[Any, ...] | None = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("parameter name must be non-empty")
        if self.kind not in _KINDS:
            raise ValueError(f"unknown parameter kind {self.kind!r} for {self.name!r}")
        if self.kind in (CONTINUOUS, INTEGER):
            if self.lower is None or self.upper is None:
                raise ValueError(f"{self.name}: numeric parameters need lower and upper bounds")
            if not float(self.lower) < float(self.upper):
                raise ValueError(f"{self.name}: lower bound must be strictly below upper bound")
            if self.categories is not None:
                raise ValueError(f"{self.name}: categories are not allowed for kind {self.kind!r}")
        else:
            cats = self.categories
            if cats is None:
                if self.kind == BOOLEAN:
                    object.__setattr__(self, "categories", (False, True))
                    cats = self.categories
                else:
                    raise ValueError(f"{self.name}: categorical parameters need labels")
            cats = tuple(cats)
            object.__setattr__(self, "categories", cats)
            if self.kind == BOOLEAN and len(cats) != 2:
                raise ValueError(f"{self.name}: boolean parameters take exactly 2 labels")
            if len(cats) < 2 or len(set(map(repr, cats))) != len(cats):
                raise ValueError(f"{self.name}: need at least 2 distinct labels")
            if self.lower is not None or self.upper is not None:
                raise ValueError(f"{self.name}: bounds are not allowed for kind {self.kind!r}")

    @property
    def n_categories(self) -> int:
        if self.categories is None:
            raise ValueError(f"{self.name} is not categorical")
        return len(self.categories)

    def decode_unit(self, u: float):
        """Map a unit coordinate to a concrete parameter value."""
        u = float(u)
        if self.kind == CONTINUOUS:
            return self.lower + u * (self.upper - self.lower)
        if self.kind == INTEGER:
            # round half up, then clamp; keeps the map monotone and total on [0, 1]
            raw = self.lower + u * (self.upper - self.lower)
            return int(min(max(np.floor(raw + 0.5), self.lower), self.upper))
        m = self.n_categories
        idx = min(int(np.floor(u * m)), m - 1)
        return self.categories[max(idx, 0)]

    def encode_value(self, value) -> float:
        """Inverse of ``decode_unit``; exact for continuous, bin-center otherwise."""
        if self.kind in (CONTINUOUS, INTEGER):
            return (float(value) - self.lower) / (self.upper - self.lower)
        idx = self.categories.index(value)
        return (idx + 0.5) / self.n_categories


@dataclass(frozen=True)
class HyperSpace:
    """Ordered parameter list; iteration order fixes every sample-matrix column."""

    params: tuple[ParamSpec, ...]

    def __post_init__(self) -> None:
        params = tuple(self.params)
        object.__setattr__(self, "params", params)
        if len(params) < 1:
            raise ValueError("a hyperspace needs at least one parameter")
        names = [p.name for p in params]
        if len(set(names)) != len(names):
            raise ValueError("parameter names must be unique")

    @property
    def k(self) -> int:
        return len(self.params)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)

    def _check(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if u.shape != (self.k,):
            raise ShapeError(f"expected {self.k} unit coordinates, got shape {u.shape}")
        return u

    def decode(self, u: np.ndarray) -> dict[str, Any]:
        """Decode one unit point into a ``{name: value}`` configuration."""
        u = self._check(u)
        return {p.name: p.decode_unit(ui) for p, ui in zip(self.params, u)}

    def decode_many(self, points: np.ndarray) -> list[dict[str, Any]]:
        points = np.asarray(points, dtype=float)
        return [self.decode(row) for row in points]

    def encode(self, config: dict[str, Any]) -> np.ndarray:
        return np.array([p.encode_value(config[p.name]) for p in self.params])

    def param(self, name: str) -> ParamSpec:
        for p in self.params:
            if p.name == name:
                return p
        raise KeyError(name)

    def to_dicts(self) -> list[dict[str, Any]]:
        out = []
        for p in self.params:
            d: dict[str, Any] = {"name": p.name, "kind": p.kind}
            if p.kind in (CONTINUOUS, INTEGER):
                d["lower"], d["upper"] = p.lower, p.upper
            else:
                d["categories"] = list(p.categories)
            out.append(d)
        return out


def space_from_dicts(entries: list[dict[str, Any]]) -> HyperSpace:
    """Build a HyperSpace from config-file entries (one dict per parameter)."""
    params = []
    for e in entries:
        cats = e.get("categories")
        params.append(
            ParamSpec(
                name=e["name"],
                kind=e["kind"],
                lower=e.get("lower"),
                upper=e.get("upper"),
                categories=tuple(cats) if cats is not None else None,
            )
        )
    return HyperSpace(tuple(params))


# ---------------------------------------------------------------------------
# p-level grid geometry
# ---------------------------------------------------------------------------

def grid_delta(p: int) -> float:
    """Step length between paired levels of a p-level grid: p / (2(p-1)).

    Only even ``p`` is accepted: for odd ``p`` the step is not an integer
    multiple of the level spacing 1/(p-1), so steps would leave the grid.
    """
    if int(p) != p or p < 2:
        raise GridError(f"need an integer level count p >= 2, got {p!r}")
    p = int(p)
    if p % 2 != 0:
        raise GridError(
            f"p={p} is odd: delta = p/(2(p-1)) lands on grid levels only for even p"
        )
    return p / (2.0 * (p - 1))


def grid_levels(p: int) -> np.ndarray:
    """The p levels {0, 1/(p-1), ..., 1} of the unit interval."""
    if int(p) != p or p < 2:
        raise GridError(f"need an integer level count p >= 2, got {p!r}")
    return np.arange(int(p), dtype=float) / (p - 1)


def snap_to_grid(u: np.ndarray, p: int) -> np.ndarray:
    """Move each coordinate to the nearest grid level; ties round half up."""
    if int(p) != p or p < 2:
        raise GridError(f"need an integer level count p >= 2, got {p!r}")
    u = np.asarray(u, dtype=float)
    idx = np.clip(np.floor(u * (p - 1) + 0.5), 0, p - 1)
    return idx / (p - 1)


# ---------------------------------------------------------------------------
# Named presets: the four tuning spaces shipped with the library
# ---------------------------------------------------------------------------

def _common_moo_params() -> list[ParamSpec]:
    return [
        ParamSpec("lambda", INTEGER, 10, 1000),
        ParamSpec("sbx_prob", CONTINUOUS, 0.0, 1.0),
        ParamSpec("sbx_di", CONTINUOUS, 1.0, 200.0),
        ParamSpec("pm_prob", CONTINUOUS, 0.0, 1.0),
        ParamSpec("pm_di", CONTINUOUS, 1.0, 200.0),
    ]


def preset(name: str) -> HyperSpace:
    """Return one of the built-in tuning spaces: cmaes, de, nsga3, moead."""
    if name == "cmaes":
        return HyperSpace((
            ParamSpec("lambda", INTEGER, 10, 1000),
            ParamSpec("alpha_mu", CONTINUOUS, 0.0, 4.0),
            ParamSpec("sigma0", CONTINUOUS, 0.1, 2.0),
            ParamSpec("sigma0_scale", BOOLEAN),
            ParamSpec("mu_lambda_ratio", CONTINUOUS, 0.1, 1.0),
        ))
    if name == "de":
        return HyperSpace((
            ParamSpec("lambda", INTEGER, 10, 1000),
            ParamSpec("crossover", CATEGORICAL, categories=("bin", "exp")),
            ParamSpec("crossover_prob", CONTINUOUS, 0.0, 1.0),
            ParamSpec("beta_min", CONTINUOUS, 0.0, 1.0),
            ParamSpec("beta_max", CONTINUOUS, 0.0, 2.0),
            ParamSpec("b_type", CATEGORICAL,
                      categories=("best", "target-to-best", "rand-to-best", "rand")),
            ParamSpec("b_lambda_ratio", CONTINUOUS, 0.01, 0.5),
        ))
    if name == "nsga3":
        return HyperSpace(tuple(_common_moo_params() + [
            ParamSpec("tournament_k", INTEGER, 2, 10),
        ]))
    if name == "moead":
        return HyperSpace(tuple(_common_moo_params() + [
            ParamSpec("mode", CATEGORICAL,
                      categories=("pbi", "tchebycheff", "tchebycheff-normalized",
                                  "modified-tchebycheff")),
            ParamSpec("neighbor_ratio", CONTINUOUS, 0.05, 0.5),
        ]))
    raise KeyError(f"unknown hyperspace preset {name!r}; choose from {PRESET_NAMES}")


PRESET_NAMES = ("cmaes", "de", "nsga3", "moead")
