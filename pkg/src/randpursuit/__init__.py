"""Derivative-free randomized optimization toolkit.

Four schemes built on two line-search oracles:

* ``rp_run``: isotropic random direction search,
* ``sarp_run``: its momentum-accelerated variant,
* ``cma11_run``: single-parent search with a dense adaptive covariance,
* ``epcma_run``: the low-rank O(m*n) covariance variant with m stored
  evolution paths,

plus benchmark objectives with exact spectra, seedable sampling
utilities, and a replication harness (:func:`run_experiment`, also
exposed as the ``randpursuit`` command) that writes deterministic
trajectory and summary CSVs.
"""

from .errors import NumericError
from .linesearch import (LineSearchMode, StepResult, ass_factors, ass_step,
                         exact_ls, line_search)
from .objectives import (KINDS, Objective, SpectralBounds, evaluate, gradient,
                         rp_exact_rate_bound, spectral_bounds)
from .sampling import (CholeskyState, LowRankCovariance, RngStream,
                       build_epcma_covariance, cholesky_rank_one_update,
                       epcma_alpha_weights, sample_gaussian_cholesky,
                       sample_lowrank, sample_standard_normal, to_dense)
from .solvers import (CmaConfig, CommonConfig, DriftLog, RunRecord,
                      SarpConfig, cma11_run, epcma_run, rp_run, sarp_run)
from .harness import (SWEEP_ALGORITHMS, ExperimentSpec, SummaryStats,
                      execute_one, execute_runs, median_trajectory,
                      resolve_memory, run_experiment, summarize, sweep_cells)

__version__ = "0.1.0"

__all__ = [
    "NumericError",
    "LineSearchMode", "StepResult", "ass_factors", "ass_step", "exact_ls",
    "line_search",
    "KINDS", "Objective", "SpectralBounds", "evaluate", "gradient",
    "rp_exact_rate_bound", "spectral_bounds",
    "CholeskyState", "LowRankCovariance", "RngStream",
    "build_epcma_covariance", "cholesky_rank_one_update",
    "epcma_alpha_weights", "sample_gaussian_cholesky", "sample_lowrank",
    "sample_standard_normal", "to_dense",
    "CmaConfig", "CommonConfig", "DriftLog", "RunRecord", "SarpConfig",
    "cma11_run", "epcma_run", "rp_run", "sarp_run",
    "SWEEP_ALGORITHMS", "ExperimentSpec", "SummaryStats", "execute_one",
    "execute_runs", "median_trajectory", "resolve_memory", "run_experiment",
    "summarize", "sweep_cells",
    "__version__",
]
