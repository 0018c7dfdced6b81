"""easense: global sensitivity analysis of evolutionary-algorithm hyperparameters.

Samples hyperparameter spaces with Morris, Morris-LHS, and Sobol schemes, runs
CMA-ES / DE / NSGA-III / MOEA/D on benchmark suites, and computes
elementary-effects and variance-based sensitivity indices with rankings and
supporting statistics.
"""

from .hyperspace import (
    HyperSpace,
    ParamSpec,
    grid_delta,
    grid_levels,
    preset,
    snap_to_grid,
    space_from_dicts,
)
from .indices import (
    EEMatrix,
    SensitivityReport,
    build_report,
    ee_matrix,
    elementary_effects,
    morris_mu_sigma,
    sobol_indices,
)
from .metrics import MetricValue, gd, hv, igd, nondominated_filter, score_run
from .moo_algorithms import (
    MoeadConfig,
    MooCommonConfig,
    Nsga3Config,
    ParetoArchive,
    das_dennis_points,
    decompose,
    fast_nondominated_sort,
    run_moead,
    run_nsga3,
)
from .problems import make_problem
from .runner import ExperimentConfig, run_experiment
from .sampling import morris_lhs_sample, morris_sample, sobol_sample
from .soo_algorithms import CmaesConfig, DeConfig, RunResult, de_donor, run_cmaes, run_de

__version__ = "0.1.0"

__all__ = [
    "CmaesConfig",
    "DeConfig",
    "EEMatrix",
    "ExperimentConfig",
    "HyperSpace",
    "MetricValue",
    "MoeadConfig",
    "MooCommonConfig",
    "Nsga3Config",
    "ParamSpec",
    "ParetoArchive",
    "RunResult",
    "SensitivityReport",
    "build_report",
    "das_dennis_points",
    "de_donor",
    "decompose",
    "ee_matrix",
    "elementary_effects",
    "fast_nondominated_sort",
    "gd",
    "grid_delta",
    "grid_levels",
    "hv",
    "igd",
    "make_problem",
    "morris_lhs_sample",
    "morris_mu_sigma",
    "morris_sample",
    "nondominated_filter",
    "preset",
    "run_cmaes",
    "run_de",
    "run_experiment",
    "run_moead",
    "run_nsga3",
    "score_run",
    "snap_to_grid",
    "sobol_indices",
    "sobol_sample",
    "space_from_dicts",
]
