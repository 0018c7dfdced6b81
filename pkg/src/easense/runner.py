"""Experiment orchestration: config, deterministic execution of the
(sample x problem x run) grid, persistence, aggregation, and report emission.

Store layout under the output directory:

* ``manifest.json``  -- full provenance (config echo, seeds, plan, constants)
* ``samples.csv``    -- unit coordinates and decoded values per sample
* ``evals.csv``      -- one row per (sample, problem, metric) with run values
* ``indices_<method>_<metric>.csv`` / ``ranking.csv``
* ``bins_<param>_<metric>.csv``, ``ttests.csv``, ``clusters.csv`` on demand

Execution is resumable: completed cells are journaled to ``evals.partial.csv``
and skipped on restart; the journal is folded into ``evals.csv`` and removed
once the grid is complete.  Per-cell seeds derive from (master seed,
sample_id, problem id, run index), so results are independent of the
parallelism level and of interruption.
"""

from __future__ import annotations

import json
import os
import zlib
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from scipy.ndimage import gaussian_filter1d

from . import analysis, hyperspace as hs, indices, metrics, sampling
from .moo_algorithms import MoeadConfig, MooCommonConfig, Nsga3Config, run_moead, run_nsga3
from .problems import make_problem, problem_manifest
from .soo_algorithms import CmaesConfig, DeConfig, run_cmaes, run_de

ALGORITHMS = {"cmaes": "soo", "de": "soo", "nsga3": "moo", "moead": "moo"}
METHODS = ("morris", "morris_lhs", "sobol")
DEFAULT_METRICS = {"soo": ("best",), "moo": ("gd", "igd", "hv")}
FRONT_REFERENCE_COUNT = 91   # simplex lattice with 12 divisions for m = 3


class ConfigError(ValueError):
    """The experiment configuration is invalid."""


class StoreCorruptionError(RuntimeError):
    """The on-disk store cannot be trusted; refusing to resume."""


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    algorithm: str
    method: str
    problems: tuple[str, ...]
    output_dir: str
    runs: int = 10
    budget: int = 10_000
    r: int | None = None
    p: int | None = None
    N: int | None = None
    metrics: tuple[str, ...] = ()
    seed: int = 0
    parallelism: int = 1
    hyperspace: tuple | None = None      # inline param dicts; preset otherwise
    aggregation: str = "minmax"
    low_discrepancy: bool = False

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if self.budget < 10:
            raise ConfigError("budget must cover at least the smallest population")
        if not self.problems:
            raise ConfigError("need at least one problem")
        if self.aggregation not in ("minmax", "rank"):
            raise ConfigError(f"unknown aggregation {self.aggregation!r}")
        if self.method == "sobol":
            if not self.N or self.N < 2:
                raise ConfigError("sobol needs N >= 2")
        else:
            if not self.r or self.r < 1:
                raise ConfigError(f"{self.method} needs r >= 1")
            if not self.p:
                raise ConfigError(f"{self.method} needs a level count p")
        object.__setattr__(self, "problems", tuple(self.problems))
        kind = ALGORITHMS[self.algorithm]
        metric_list = tuple(self.metrics) or DEFAULT_METRICS[kind]
        for m in metric_list:
            if m not in metrics.METRIC_ORIENTATION:
                raise ConfigError(f"unknown metric {m!r}")
            if (m == "best") != (kind == "soo"):
                raise ConfigError(f"metric {m!r} does not fit a {kind} algorithm")
        object.__setattr__(self, "metrics", metric_list)
        if self.hyperspace is not None:
            object.__setattr__(self, "hyperspace",
                               tuple(dict(e) for e in self.hyperspace))

    def space(self) -> hs.HyperSpace:
        if self.hyperspace is not None:
            return hs.space_from_dicts(list(self.hyperspace))
        return hs.preset(self.algorithm)

    def identity(self) -> dict:
        """Config identity for resume checks (runtime knobs excluded)."""
        d = self.to_dict()
        d.pop("output_dir")
        d.pop("parallelism")
        return d

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "method": self.method,
            "problems": list(self.problems),
            "output_dir": self.output_dir,
            "runs": self.runs,
            "budget": self.budget,
            "r": self.r,
            "p": self.p,
            "N": self.N,
            "metrics": list(self.metrics),
            "seed": self.seed,
            "parallelism": self.parallelism,
            "hyperspace": [dict(e) for e in self.hyperspace] if self.hyperspace else None,
            "aggregation": self.aggregation,
            "low_discrepancy": self.low_discrepancy,
        }

    @classmethod
    def from_dict(cls, d: dict, apply_env: bool = True) -> "ExperimentConfig":
        d = dict(d)
        if apply_env:
            # only these two settings may come from the environment
            out = os.environ.get("EASENSE_OUTPUT_DIR")
            par = os.environ.get("EASENSE_PARALLELISM")
            if out:
                d["output_dir"] = out
            if par:
                d["parallelism"] = int(par)
        known = {f.name for f in cls.__dataclass_fields__.values()}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "problems" in d:
            d["problems"] = tuple(d["problems"])
        if "metrics" in d and d["metrics"] is not None:
            d["metrics"] = tuple(d["metrics"])
        else:
            d.pop("metrics", None)
        if d.get("hyperspace") is not None:
            d["hyperspace"] = tuple(d["hyperspace"])
        return cls(**{k: v for k, v in d.items() if v is not None or k in ("r", "p", "N")})

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


def make_plan(config: ExperimentConfig, space: hs.HyperSpace):
    if config.method == "morris":
        return sampling.morris_sample(space, config.r, config.p, config.seed)
    if config.method == "morris_lhs":
        return sampling.morris_lhs_sample(space, config.r, config.p, config.seed)
    return sampling.sobol_sample(space, config.N, config.seed,
                                 low_discrepancy=config.low_discrepancy)


def build_algorithm_config(algorithm: str, decoded: dict[str, Any]):
    try:
        if algorithm == "de":
            return DeConfig(lambda_=decoded["lambda"], crossover=decoded["crossover"],
                            crossover_prob=decoded["crossover_prob"],
                            beta_min=decoded["beta_min"], beta_max=decoded["beta_max"],
                            b_type=decoded["b_type"],
                            b_lambda_ratio=decoded["b_lambda_ratio"])
        if algorithm == "cmaes":
            return CmaesConfig(lambda_=decoded["lambda"], alpha_mu=decoded["alpha_mu"],
                               sigma0=decoded["sigma0"],
                               sigma0_scale=bool(decoded["sigma0_scale"]),
                               mu_lambda_ratio=decoded["mu_lambda_ratio"])
        common = MooCommonConfig(lambda_=decoded["lambda"], sbx_prob=decoded["sbx_prob"],
                                 sbx_di=decoded["sbx_di"], pm_prob=decoded["pm_prob"],
                                 pm_di=decoded["pm_di"])
        if algorithm == "nsga3":
            return Nsga3Config(common=common, tournament_k=decoded["tournament_k"])
        return MoeadConfig(common=common, mode=decoded["mode"],
                           neighbor_ratio=decoded["neighbor_ratio"])
    except KeyError as missing:
        raise ConfigError(
            f"hyperspace does not provide parameter {missing} required by {algorithm}"
        ) from None


# ---------------------------------------------------------------------------
# cell evaluation (module level so process pools can pickle it)
# ---------------------------------------------------------------------------

_PROBLEM_CACHE: dict[str, tuple] = {}


def _problem_bundle(problem_id: str):
    if problem_id not in _PROBLEM_CACHE:
        problem = make_problem(problem_id)
        if problem.m > 1:
            front = problem.sample_true_front(FRONT_REFERENCE_COUNT)
            ref_point = metrics.hv_reference(front)
        else:
            front = None
            ref_point = None
        _PROBLEM_CACHE[problem_id] = (problem, front, ref_point)
    return _PROBLEM_CACHE[problem_id]


def _cell_seed(master: int, sample_id: int, problem_id: str, run_idx: int):
    return np.random.SeedSequence(
        [master, sample_id, zlib.crc32(problem_id.encode("utf-8")), run_idx]
    )


def evaluate_cell(payload: dict) -> dict:
    """Run one (sample, problem, run) cell and score every requested metric."""
    problem, front, ref_point = _problem_bundle(payload["problem"])
    algo = payload["algorithm"]
    algo_config = build_algorithm_config(algo, payload["decoded"])
    seed = _cell_seed(payload["master_seed"], payload["sample_id"],
                      payload["problem"], payload["run"])
    rng_seed = seed.generate_state(1)[0]

    runner = {"de": run_de, "cmaes": run_cmaes,
              "nsga3": run_nsga3, "moead": run_moead}[algo]
    try:
        result = runner(problem, algo_config, payload["budget"], rng_seed)
    except Exception as exc:  # a broken cell is a failure, not a crash
        return {"sample_id": payload["sample_id"], "problem": payload["problem"],
                "run": payload["run"], "failed": 1,
                "values": {m: float("nan") for m in payload["metrics"]},
                "error": repr(exc)}

    values = {}
    failed = bool(getattr(result, "failed", False))
    for metric in payload["metrics"]:
        reference = {"gd": front, "igd": front, "hv": ref_point}.get(metric)
        values[metric] = metrics.score_run(result, metric, reference).value
    if any(not np.isfinite(v) for v in values.values()):
        failed = True
    return {"sample_id": payload["sample_id"], "problem": payload["problem"],
            "run": payload["run"], "failed": int(failed), "values": values}


# ---------------------------------------------------------------------------
# CSV helpers (floats written with 17 significant digits)
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text("\n".join(lines) + "\n")
    tmp.replace(path)


def _read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    text = path.read_text()
    lines = [ln for ln in text.split("\n") if ln]
    header = lines[0].split(",")
    return header, [ln.split(",") for ln in lines[1:]]


# ---------------------------------------------------------------------------
# experiment driver
# ---------------------------------------------------------------------------

@dataclass
class ExperimentResult:
    store: Path
    complete: bool
    cells_evaluated: int
    cells_skipped: int
    failures: int
    reports: dict[str, indices.SensitivityReport] = field(default_factory=dict)
    Y: dict[str, np.ndarray] = field(default_factory=dict)
    report_errors: dict[str, str] = field(default_factory=dict)


def _journal_path(store: Path) -> Path:
    return store / "evals.partial.csv"


def _journal_key(sample_id: int, problem: str, run: int) -> tuple:
    return (int(sample_id), problem, int(run))


def _load_journal(store: Path, metric_names) -> dict:
    """Completed cells from the journal; only a truncated last line is forgiven."""
    path = _journal_path(store)
    done: dict[tuple, dict] = {}
    if not path.exists():
        return done
    lines = path.read_text().split("\n")
    lines = [ln for ln in lines if ln != ""]
    n_cols = 4 + len(metric_names)
    for i, line in enumerate(lines):
        parts = line.split(",")
        try:
            if len(parts) != n_cols:
                raise ValueError(f"expected {n_cols} columns")
            key = _journal_key(int(parts[0]), parts[1], int(parts[2]))
            done[key] = {
                "failed": int(parts[3]),
                "values": {m: float(parts[4 + j]) for j, m in enumerate(metric_names)},
            }
        except ValueError as exc:
            if i == len(lines) - 1:
                break  # interrupted mid-write; the cell will be re-run
            raise StoreCorruptionError(
                f"journal line {i + 1} is malformed ({exc}); refusing to resume"
            ) from None
    return done


def _load_final_evals(store: Path, config: ExperimentConfig) -> dict:
    """Rebuild the completed-cell map from a finalized evals.csv."""
    path = store / "evals.csv"
    done: dict[tuple, dict] = {}
    if not path.exists():
        return done
    header, rows = _read_csv(path)
    col = {name: j for j, name in enumerate(header)}
    run_cols = [col[f"run_{i}"] for i in range(config.runs)]
    for row in rows:
        sample_id = int(row[col["sample_id"]])
        problem = row[col["problem"]]
        metric = row[col["metric"]]
        for run_idx, rc in enumerate(run_cols):
            key = _journal_key(sample_id, problem, run_idx)
            value = float(row[rc])
            cell = done.setdefault(key, {"failed": 0, "values": {}})
            cell["values"][metric] = value
            if not np.isfinite(value):
                cell["failed"] = 1
    return done


def run_experiment(config: ExperimentConfig, cell_limit: int | None = None) -> ExperimentResult:
    """Execute (or resume) the full experiment grid and emit every report.

    ``cell_limit`` stops after that many freshly evaluated cells, leaving a
    resumable store; the next call picks up where this one stopped.
    """
    space = config.space()
    plan = make_plan(config, space)
    points = plan.points()
    decoded = space.decode_many(points)
    n_samples = points.shape[0]

    store = Path(config.output_dir)
    store.mkdir(parents=True, exist_ok=True)
    _check_or_write_manifest(store, config, space, plan)
    _write_samples_csv(store / "samples.csv", space, points, decoded)

    done = _load_final_evals(store, config)
    done.update(_load_journal(store, config.metrics))

    cells = [(s, prob, r)
             for s in range(n_samples)
             for prob in config.problems
             for r in range(config.runs)]
    pending = [c for c in cells if _journal_key(*c) not in done]
    skipped = len(cells) - len(pending)
    if cell_limit is not None:
        pending = pending[:cell_limit]

    payloads = [
        {
            "sample_id": s, "problem": prob, "run": r,
            "algorithm": config.algorithm, "decoded": decoded[s],
            "budget": config.budget, "metrics": config.metrics,
            "master_seed": config.seed,
        }
        for (s, prob, r) in pending
    ]

    evaluated = 0
    if payloads:
        with open(_journal_path(store), "a") as journal:
            def commit(res: dict) -> None:
                row = [str(res["sample_id"]), res["problem"], str(res["run"]),
                       str(res["failed"])]
                row += [_fmt(res["values"][m]) for m in config.metrics]
                journal.write(",".join(row) + "\n")
                journal.flush()
                key = _journal_key(res["sample_id"], res["problem"], res["run"])
                done[key] = {"failed": res["failed"], "values": res["values"]}

            if config.parallelism > 1:
                with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
                    futures = [pool.submit(evaluate_cell, p) for p in payloads]
                    for fut in as_completed(futures):
                        commit(fut.result())
                        evaluated += 1
            else:
                for p in payloads:
                    commit(evaluate_cell(p))
                    evaluated += 1

    complete = len(done) == len(cells)
    result = ExperimentResult(store=store, complete=complete,
                              cells_evaluated=evaluated, cells_skipped=skipped,
                              failures=sum(c["failed"] for c in done.values()))
    if not complete:
        return result

    _finalize(store, config, space, plan, done, result)
    return result


def _check_or_write_manifest(store: Path, config: ExperimentConfig,
                             space: hs.HyperSpace, plan) -> None:
    import datetime

    path = store / "manifest.json"
    if path.exists():
        try:
            existing = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise StoreCorruptionError(f"manifest.json is unreadable: {exc}") from None
        if existing.get("config_identity") != config.identity():
            raise StoreCorruptionError(
                "store was produced by a different configuration; refusing to resume"
            )
        return
    manifest = {
        "config": config.to_dict(),
        "config_identity": config.identity(),
        "space": space.to_dicts(),
        "plan": plan.to_manifest(),
        "problems": [row for row in problem_manifest()
                     if row["id"] in set(config.problems)],
        "front_reference_count": FRONT_REFERENCE_COUNT,
        "hv_reference_factor": 1.1,
        "algorithm_constants": {
            "cmaes": {
                "weights": "log(mu + 1/2) - log(i), normalized",
                "c_sigma": "(mu_eff + 2) / (n + mu_eff + 5)",
                "d_sigma": "1 + 2 max(0, sqrt((mu_eff - 1)/(n + 1)) - 1) + c_sigma",
                "c_c": "(4 + mu_eff/n) / (n + 4 + 2 mu_eff/n)",
                "c_1": "2 / ((n + 1.3)^2 + mu_eff)",
                "c_mu": "min(1 - c_1, alpha_mu * 2(mu_eff - 2 + 1/mu_eff) / ((n + 2)^2 + mu_eff))",
                "eigen_floor": 1e-12,
            },
            "moead": {"pbi_theta": 5.0, "weight_epsilon": 1e-6,
                      "neighbors": "max(2, round(neighbor_ratio * lambda))"},
            "de": {"beta_draw": "uniform per generation",
                   "replacement": "trial <= target"},
        },
        "notes": [
            "beta draw range is [beta_min, max(beta_min, beta_max)]",
            "morris_lhs start levels are stratified over the grid (snapped)",
            "per-problem scores are normalized across samples before averaging",
            "integer decode rounds half up; categorical bins are equal width",
        ],
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    path.write_text(json.dumps(manifest, indent=1))


def _write_samples_csv(path: Path, space: hs.HyperSpace, points, decoded) -> None:
    header = ["sample_id"] + [f"u_{n}" for n in space.names] + list(space.names)
    rows = []
    for s, (row, dec) in enumerate(zip(points, decoded)):
        rows.append([s] + [float(v) for v in row] + [dec[n] for n in space.names])
    _write_csv(path, header, rows)


# ---------------------------------------------------------------------------
# aggregation and index computation
# ---------------------------------------------------------------------------

def _normalize_column(col: np.ndarray, how: str) -> np.ndarray:
    out = np.full(col.shape, np.nan)
    finite = np.isfinite(col)
    vals = col[finite]
    if vals.size == 0:
        return out
    if how == "rank":
        order = np.argsort(np.argsort(vals, kind="stable"), kind="stable")
        out[finite] = order / max(vals.size - 1, 1)
        return out
    lo, hi = vals.min(), vals.max()
    out[finite] = (vals - lo) / (hi - lo) if hi > lo else 0.0
    return out


def _score_matrix(done: dict, config: ExperimentConfig, metric: str,
                  n_samples: int) -> np.ndarray:
    """Per-(sample, problem) means over runs; NaN rows mark failures."""
    M = np.full((n_samples, len(config.problems)), np.nan)
    for j, prob in enumerate(config.problems):
        for s in range(n_samples):
            vals = [done[_journal_key(s, prob, r)]["values"][metric]
                    for r in range(config.runs)]
            M[s, j] = metrics.mean_over_runs(vals)
    return M


def aggregate_outputs(done: dict, config: ExperimentConfig, metric: str,
                      n_samples: int) -> np.ndarray:
    """Model output Y per sample: cross-problem mean of normalized scores."""
    M = _score_matrix(done, config, metric, n_samples)
    normed = np.column_stack([
        _normalize_column(M[:, j], config.aggregation) for j in range(M.shape[1])
    ])
    return normed.mean(axis=1)  # NaN propagates so drop rules can apply


def indices_from_outputs(plan, Y: np.ndarray, method: str,
                         param_names) -> indices.SensitivityReport:
    if method in ("morris", "morris_lhs"):
        k = plan.k
        outputs = [Y[t * (k + 1):(t + 1) * (k + 1)] for t in range(plan.r)]
        ee = indices.ee_matrix(plan.trajectories, outputs, plan.delta)
        return indices.morris_report(method, param_names, ee)
    N = plan.N
    yA, yB = Y[:N], Y[N:2 * N]
    yC = [Y[(2 + i) * N:(3 + i) * N] for i in range(plan.k)]
    result = indices.sobol_indices(yA, yB, yC)
    return indices.sobol_report(param_names, result)


def _finalize(store: Path, config: ExperimentConfig, space, plan, done,
              result: ExperimentResult) -> None:
    n_samples = plan.n_points if hasattr(plan, "n_points") else plan.points().shape[0]

    # evals.csv, sample-major, fixed order
    header = (["algorithm", "problem", "method", "sample_id", "run_count",
               "failure_count", "metric", "value"]
              + [f"run_{i}" for i in range(config.runs)])
    rows = []
    for s in range(n_samples):
        for prob in config.problems:
            run_cells = [done[_journal_key(s, prob, r)] for r in range(config.runs)]
            failures = sum(c["failed"] for c in run_cells)
            for metric in config.metrics:
                vals = [c["values"][metric] for c in run_cells]
                rows.append([config.algorithm, prob, config.method, s,
                             config.runs, failures,
                             metric, metrics.mean_over_runs(vals)] + vals)
    _write_csv(store / "evals.csv", header, rows)
    _journal_path(store).unlink(missing_ok=True)

    # indices per metric; a single trajectory or fully-failed grid cannot
    # support a report (sigma absent / everything dropped), which leaves the
    # evaluation store valid but without index files
    for metric in config.metrics:
        Y = aggregate_outputs(done, config, metric, n_samples)
        result.Y[metric] = Y
        try:
            report = indices_from_outputs(plan, Y, config.method, space.names)
        except (ValueError, indices.NonFiniteOutputError,
                indices.DegenerateModelError) as exc:
            result.report_errors[metric] = str(exc)
            continue
        result.reports[metric] = report
        _write_report_csv(store / f"indices_{config.method}_{metric}.csv", report)

    if result.reports:
        _write_csv(store / "ranking.csv",
                   ["scope", "method", "metric", "position", "param",
                    "direct_norm", "interaction_norm", "norm_sum", "borda_points"],
                   rank_report({(config.method, m): rep
                                for m, rep in result.reports.items()}))


def _write_report_csv(path: Path, report: indices.SensitivityReport) -> None:
    header = ["param", "direct", "interaction", "direct_norm",
              "interaction_norm", "rank", "gap",
              "direct_min", "direct_max", "interaction_min", "interaction_max"]
    rows = []
    for i, row in enumerate(report.to_rows()):
        rows.append([row["param"], row["direct"], row["interaction"],
                     row["direct_norm"], row["interaction_norm"], row["rank"],
                     float(report.gap[i]),
                     report.direct_range[0], report.direct_range[1],
                     report.interaction_range[0], report.interaction_range[1]])
    _write_csv(path, header, rows)


# ---------------------------------------------------------------------------
# consolidated ranking (Borda count across reports)
# ---------------------------------------------------------------------------

def rank_report(reports: dict[tuple[str, str], indices.SensitivityReport]) -> list[list]:
    """Per-(method, metric) rankings plus a Borda-consolidated ordering."""
    if not reports:
        raise ValueError("need at least one sensitivity report")
    rows: list[list] = []
    param_names = next(iter(reports.values())).param_names
    borda = np.zeros(len(param_names))
    for (method, metric), rep in sorted(reports.items()):
        if rep.param_names != param_names:
            raise ValueError("reports rank different parameter sets")
        k = rep.k
        for pos, idx in enumerate(rep.ranking):
            borda[idx] += k - 1 - pos
            rows.append([f"{method}_{metric}", method, metric, pos + 1,
                         rep.param_names[idx],
                         float(rep.direct_norm[idx]),
                         float(rep.interaction_norm[idx]),
                         float(rep.direct_norm[idx] + rep.interaction_norm[idx]),
                         ""])
    order = np.argsort(-borda, kind="stable")  # ties fall back to param order
    for pos, idx in enumerate(order):
        rows.append(["consolidated", "", "", pos + 1, param_names[idx],
                     "", "", "", float(borda[idx])])
    return rows


# ---------------------------------------------------------------------------
# binned mean-score curves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BinnedCurve:
    param: str
    metric: str
    bin_count: int
    edges: np.ndarray
    counts: np.ndarray
    bin_means: np.ndarray
    smoothed: np.ndarray
    sigma: float
    empty_bins: tuple[int, ...]


def bin_scores(param_values: np.ndarray, scores: np.ndarray, lo: float, hi: float,
               bins: int, sigma: float, param: str = "", metric: str = "") -> BinnedCurve:
    """Equal-width bins over the parameter domain with Gaussian-smoothed means.

    Empty bins are filled by linear interpolation from their neighbors and
    flagged in ``empty_bins``.
    """
    if bins < 2:
        raise ValueError("need at least two bins")
    values = np.asarray(param_values, dtype=float)
    scores = np.asarray(scores, dtype=float)
    finite = np.isfinite(values) & np.isfinite(scores)
    values, scores = values[finite], scores[finite]
    if values.size == 0:
        raise ValueError("no finite records to bin")
    edges = np.linspace(lo, hi, bins + 1)
    which = np.clip(np.searchsorted(edges, values, side="right") - 1, 0, bins - 1)
    counts = np.bincount(which, minlength=bins)
    sums = np.bincount(which, weights=scores, minlength=bins)
    means = np.full(bins, np.nan)
    nonzero = counts > 0
    means[nonzero] = sums[nonzero] / counts[nonzero]
    empty = tuple(int(i) for i in np.flatnonzero(~nonzero))
    if empty:
        centers = 0.5 * (edges[:-1] + edges[1:])
        means[~nonzero] = np.interp(centers[~nonzero], centers[nonzero],
                                    means[nonzero])
    smoothed = gaussian_filter1d(means, sigma=sigma, mode="nearest")
    return BinnedCurve(param=param, metric=metric, bin_count=bins, edges=edges,
                       counts=counts, bin_means=means, smoothed=smoothed,
                       sigma=float(sigma), empty_bins=empty)


# ---------------------------------------------------------------------------
# store-level report commands (used by the CLI)
# ---------------------------------------------------------------------------

def _load_store(store: str | Path):
    store = Path(store)
    manifest = json.loads((store / "manifest.json").read_text())
    config = ExperimentConfig.from_dict(
        {**manifest["config"], "output_dir": str(store)}, apply_env=False)
    space = config.space()
    if manifest["plan"]["method"] == "sobol":
        plan = sampling.SobolPlan.from_manifest(manifest["plan"])
    else:
        plan = sampling.MorrisPlan.from_manifest(manifest["plan"])
    done = _load_final_evals(store, config)
    if not done:
        raise StoreCorruptionError(f"{store} has no finalized evals.csv")
    return store, config, space, plan, done


def emit_bins(store_dir: str | Path, param: str, metric: str | None = None,
              bins: int | None = None, sigma: float | None = None) -> Path:
    store, config, space, plan, done = _load_store(store_dir)
    metric = metric or config.metrics[0]
    kind = ALGORITHMS[config.algorithm]
    bins = bins or (50 if kind == "soo" else 20)
    sigma = sigma if sigma is not None else (2.0 if kind == "soo" else 0.99)

    spec = space.param(param)
    points = plan.points()
    decoded = space.decode_many(points)
    if spec.kind in (hs.CONTINUOUS, hs.INTEGER):
        values = np.array([float(d[param]) for d in decoded])
        lo, hi = float(spec.lower), float(spec.upper)
    else:
        values = np.array([spec.categories.index(d[param]) for d in decoded],
                          dtype=float)
        lo, hi = 0.0, float(spec.n_categories)
        bins = min(bins, spec.n_categories)
    Y = aggregate_outputs(done, config, metric, points.shape[0])
    curve = bin_scores(values, Y, lo, hi, bins, sigma, param=param, metric=metric)

    path = store / f"bins_{param}_{metric}.csv"
    rows = [[i, curve.edges[i], curve.edges[i + 1], int(curve.counts[i]),
             curve.bin_means[i], curve.smoothed[i], int(i in curve.empty_bins)]
            for i in range(curve.bin_count)]
    _write_csv(path, ["bin", "lo", "hi", "count", "mean", "smoothed", "interpolated"],
               rows)
    return path


def per_problem_reports(store_dir: str | Path) -> dict[str, dict[str, indices.SensitivityReport]]:
    """Sensitivity report per (metric, problem); feeds the appendix statistics."""
    store, config, space, plan, done = _load_store(store_dir)
    n_samples = plan.points().shape[0]
    out: dict[str, dict[str, indices.SensitivityReport]] = {}
    for metric in config.metrics:
        M = _score_matrix(done, config, metric, n_samples)
        per_problem: dict[str, indices.SensitivityReport] = {}
        for j, prob in enumerate(config.problems):
            Yp = _normalize_column(M[:, j], config.aggregation)
            try:
                per_problem[prob] = indices_from_outputs(plan, Yp, config.method,
                                                         space.names)
            except (indices.NonFiniteOutputError, indices.DegenerateModelError):
                continue  # problem dropped from the statistics
        out[metric] = per_problem
    return out


def emit_stats(store_dir: str | Path, seed: int = 0) -> tuple[Path, Path]:
    """Pairwise t-tests and clustering artifacts from per-problem indices."""
    store = Path(store_dir)
    _, config, space, _, _ = _load_store(store)
    reports = per_problem_reports(store)

    ttest_rows: list[list] = []
    cluster_rows: list[list] = []
    for metric, per_problem in reports.items():
        problems = [p for p in config.problems if p in per_problem]
        if len(problems) < 2:
            continue
        names = space.names
        direct = np.array([[per_problem[p].direct_norm[i] for p in problems]
                           for i in range(len(names))])
        inter = np.array([[per_problem[p].interaction_norm[i] for p in problems]
                          for i in range(len(names))])

        samples = ([analysis.EffectSample(n, "direct", direct[i])
                    for i, n in enumerate(names)]
                   + [analysis.EffectSample(n, "interaction", inter[i])
                      for i, n in enumerate(names)])
        for row in analysis.ttest_matrix(samples):
            ttest_rows.append([metric, row["param_a"], row["kind_a"],
                               row["param_b"], row["kind_b"], row["t"], row["p"]])

        # view 1: hyperparameter effects as items, problems as features
        item_matrix = np.vstack([direct, inter])
        labels = ([f"{n}" for n in names] + [f"i{n}" for n in names])
        cluster_rows += _cluster_view(metric, "params", item_matrix, labels, seed)
        # view 2: problems as items, concatenated effects as features
        prob_matrix = np.hstack([direct.T, inter.T])
        cluster_rows += _cluster_view(metric, "problems", prob_matrix, problems, seed)

    ttest_path = store / "ttests.csv"
    _write_csv(ttest_path, ["metric", "param_a", "kind_a", "param_b", "kind_b",
                            "t", "p"], ttest_rows)
    cluster_path = store / "clusters.csv"
    _write_csv(cluster_path, ["metric", "view", "item", "cluster", "pc1", "pc2",
                              "chosen_k", "silhouette_curve"], cluster_rows)
    return ttest_path, cluster_path


def _cluster_view(metric: str, view: str, matrix: np.ndarray, labels: list[str],
                  seed: int) -> list[list]:
    if matrix.shape[0] < 3:
        return []
    candidates = range(2, matrix.shape[0])
    result = analysis.kmeans_silhouette(matrix, candidates, seed=seed)
    curve = ";".join(f"{k}:{v:.6g}" for k, v in sorted(result.silhouette_curve.items()))
    return [
        [metric, view, labels[i], int(result.assignments[i]),
         float(result.projection[i, 0]), float(result.projection[i, 1]),
         result.K, curve]
        for i in range(matrix.shape[0])
    ]
