"""Seeded replication: experiment definition, execution, aggregation, CSV output.

One :class:`ExperimentSpec` is one (objective, algorithm set) cell. Each
replicate draws its stream from ``(base_seed, run_index)``, so any run can
be reproduced standalone and results never depend on execution order or
worker count; aggregation is a deterministic reduce over the completed
records. Two file kinds are written: one trajectory CSV per (algorithm,
run) and one summary CSV per experiment.
"""

from __future__ import annotations

import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .objectives import KINDS, Objective
from .linesearch import LineSearchMode
from .sampling import RngStream
from .solvers import (CmaConfig, CommonConfig, RunRecord, SarpConfig,
                      cma11_run, epcma_run, rp_run, sarp_run)

#: the full scheme roster of the builtin sweep
SWEEP_ALGORITHMS = ("rp", "rp-exact", "sarp", "sarp-exact", "cma11",
                    "epcma-1", "epcma-2", "epcma-4", "epcma-sqrtn", "epcma-n")

_EPCMA_RE = re.compile(r"^epcma-(\d+|sqrtn|n)$")

TRAJECTORY_HEADER = "iter,fval,sigma"
SUMMARY_HEADER = "func,L,n,algo,runs,success,its_median,its_mean,its_std,median_seed,evals_mean"


def resolve_memory(algorithm: str, n: int) -> int:
    """Memory parameter of an ``epcma-*`` id for dimension n.

    ``sqrtn`` rounds the square root to the nearest integer (20 -> 4,
    40 -> 6, 60 -> 8, 80 -> 9, 100 -> 10); ``n`` is the dimension itself.
    """
    m = _EPCMA_RE.match(algorithm)
    if m is None:
        raise ValueError(f"not a low-rank scheme id: {algorithm!r}")
    token = m.group(1)
    if token == "sqrtn":
        return max(1, round(math.sqrt(n)))
    if token == "n":
        return n
    value = int(token)
    if value < 1:
        raise ValueError(f"memory must be >= 1 in {algorithm!r}")
    return value


def check_algorithm(algorithm: str) -> None:
    if algorithm in ("rp", "rp-exact", "sarp", "sarp-exact", "cma11"):
        return
    if _EPCMA_RE.match(algorithm):
        if not algorithm.endswith(("-sqrtn", "-n")):
            resolve_memory(algorithm, 2)
        return
    raise ValueError(f"unknown algorithm id {algorithm!r}")


@dataclass(frozen=True)
class ExperimentSpec:
    """One benchmark cell: an objective, a set of schemes, and replication.

    ``x0_value=None`` follows the benchmark protocol: start at the
    all-ones vector for the quadratics and at the origin for the
    non-convex objective (whose minimizer is the all-ones vector).
    ``sarp_mu``/``sarp_lmax=None`` likewise: the objective's own spectral
    bounds (exact eigenvalue extremes for the quadratics, the Hessian
    extremes at the minimizer for the non-convex objective). Overstating
    the ratio lmax/mu inflates the momentum kick and can blow the
    iterate up, so the derived values are the safe default.
    ``run_overrides`` maps algorithm ids to a replicate count differing
    from ``runs``.
    """

    objective: Objective
    algorithms: tuple[str, ...]
    runs: int = 51
    base_seed: int = 1000
    target: float = 1e-9
    budget: int | None = None
    sigma0: float = 1.0
    p: float = 0.27
    ls_tol: float = 1e-12
    x0_value: float | None = None
    drift_mode: str = "taken-step"
    sarp_mu: float | None = None
    sarp_lmax: float | None = None
    workers: int = 1
    run_overrides: dict = field(default_factory=dict)
    out_dir: str | None = None

    def __post_init__(self):
        if not isinstance(self.objective, Objective):
            raise ValueError("objective must be an Objective")
        algos = tuple(self.algorithms)
        if not algos:
            raise ValueError("at least one algorithm id is required")
        for a in algos:
            check_algorithm(a)
        if len(set(algos)) != len(algos):
            raise ValueError("duplicate algorithm ids")
        object.__setattr__(self, "algorithms", algos)
        if not int(self.runs) >= 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        object.__setattr__(self, "runs", int(self.runs))
        if not int(self.workers) >= 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        object.__setattr__(self, "workers", int(self.workers))
        for a, r in self.run_overrides.items():
            check_algorithm(a)
            if not int(r) >= 1:
                raise ValueError(f"run override for {a!r} must be >= 1, got {r}")
        # remaining scalar knobs are validated by CommonConfig/SarpConfig

    def runs_for(self, algorithm: str) -> int:
        return int(self.run_overrides.get(algorithm, self.runs))

    def start_point(self) -> np.ndarray:
        if self.x0_value is not None:
            return np.full(self.objective.n, float(self.x0_value))
        return np.zeros(self.objective.n) if self.objective.kind == "frosen" \
            else np.ones(self.objective.n)

    def sarp_bounds(self) -> tuple[float, float]:
        mu, lmax = self.sarp_mu, self.sarp_lmax
        if mu is None or lmax is None:
            b = self.objective.spectral_bounds()
            mu = b.mu if mu is None else float(mu)
            lmax = b.lmax if lmax is None else float(lmax)
        return float(mu), float(lmax)


@dataclass(frozen=True)
class SummaryStats:
    """Aggregates over one algorithm's replicates.

    Iteration statistics cover successful runs only; ``evals_mean`` and
    ``runs`` cover all of them. ``median_seed`` names the run whose
    iteration count realizes the (lower) median, ties broken by smallest
    seed; all three iteration fields and the seed are None when no run
    succeeded.
    """

    algorithm: str
    runs: int
    success_count: int
    its_median: int | None
    its_mean: float | None
    its_std: float | None
    median_seed: int | None
    evals_mean: float


def execute_one(spec: ExperimentSpec, algorithm: str, run_index: int) -> RunRecord:
    """Run a single replicate. The stream depends only on (base_seed,
    run_index), so different algorithms share common random numbers at
    equal run indices (a paired-comparison feature, not an accident)."""
    rng = RngStream.for_run(spec.base_seed, run_index)
    exact = algorithm.endswith("-exact")
    cfg = CommonConfig(
        x0=spec.start_point(), sigma0=spec.sigma0, p=spec.p, budget=spec.budget,
        target=spec.target,
        ls_mode=LineSearchMode("exact" if exact else "adaptive", spec.p, spec.ls_tol))
    f = spec.objective
    if algorithm in ("rp", "rp-exact"):
        record = rp_run(f, cfg, rng)
    elif algorithm in ("sarp", "sarp-exact"):
        mu, lmax = spec.sarp_bounds()
        record = sarp_run(f, cfg, SarpConfig(mu, lmax, spec.drift_mode), rng)
    elif algorithm == "cma11":
        record = cma11_run(f, cfg, CmaConfig.for_dimension(f.n), rng)
    else:
        m = resolve_memory(algorithm, f.n)
        record = epcma_run(f, cfg, CmaConfig.for_dimension(f.n, m), rng)
        record.algorithm = algorithm  # keep sqrtn/n aliases distinct in output
    return record


def _task(args) -> tuple[str, int, RunRecord]:
    spec, algorithm, run_index = args
    return algorithm, run_index, execute_one(spec, algorithm, run_index)


def execute_runs(spec: ExperimentSpec) -> dict[str, list[RunRecord]]:
    """All replicates of all algorithms, keyed by algorithm id in spec
    order. Worker count affects wall time only, never results."""
    tasks = [(spec, a, i) for a in spec.algorithms for i in range(spec.runs_for(a))]
    if spec.workers == 1:
        results = map(_task, tasks)
    else:
        pool = ProcessPoolExecutor(max_workers=spec.workers)
        try:
            results = list(pool.map(_task, tasks, chunksize=1))
        finally:
            pool.shutdown()
    by_algo: dict[str, dict[int, RunRecord]] = {a: {} for a in spec.algorithms}
    for algorithm, run_index, record in results:
        by_algo[algorithm][run_index] = record
    return {a: [recs[i] for i in sorted(recs)] for a, recs in by_algo.items()}


def median_trajectory(records: list[RunRecord]) -> RunRecord | None:
    """The record realizing the lower median of successful iteration
    counts, ties broken by smallest seed; None when nothing succeeded."""
    succeeded = [r for r in records if r.success]
    if not succeeded:
        return None
    its = sorted(r.its_to_target for r in succeeded)
    med = its[(len(its) - 1) // 2]
    return min((r for r in succeeded if r.its_to_target == med), key=lambda r: r.seed)


def summarize(algorithm: str, records: list[RunRecord]) -> SummaryStats:
    evals_mean = float(np.mean([r.evals for r in records]))
    succeeded = [r for r in records if r.success]
    if not succeeded:
        return SummaryStats(algorithm, len(records), 0, None, None, None, None, evals_mean)
    its = sorted(r.its_to_target for r in succeeded)
    med = its[(len(its) - 1) // 2]
    mean = float(np.mean(its))
    std = float(np.std(its, ddof=1)) if len(its) >= 2 else 0.0
    med_rec = median_trajectory(records)
    return SummaryStats(algorithm, len(records), len(succeeded),
                        int(med), mean, std, med_rec.seed, evals_mean)


def format_l(L: float | None) -> str:
    """L as a filename/CSV token: integral values lose the decimal point,
    the non-parametrized objective gets 'na'."""
    if L is None:
        return "na"
    L = float(L)
    return str(int(L)) if L.is_integer() else repr(L)


def cell_tag(objective: Objective) -> str:
    return f"{objective.kind}_L{format_l(objective.L)}_n{objective.n}"


def _fmt(value) -> str:
    if value is None:
        return "na"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def trajectory_filename(objective: Objective, algorithm: str, run_index: int) -> str:
    return f"{cell_tag(objective)}_{algorithm}_run{run_index}.csv"


def write_trajectory_csv(path: Path, record: RunRecord) -> None:
    lines = [TRAJECTORY_HEADER]
    for it, fval, sigma in record.checkpoints:
        lines.append(f"{it},{_fmt(float(fval))},{_fmt(float(sigma))}")
    path.write_text("\n".join(lines) + "\n")


def write_summary_csv(path: Path, spec: ExperimentSpec,
                      stats: list[SummaryStats]) -> None:
    obj = spec.objective
    lines = [SUMMARY_HEADER]
    for s in stats:
        lines.append(",".join([
            obj.kind, format_l(obj.L), str(obj.n), s.algorithm,
            str(s.runs), str(s.success_count), _fmt(s.its_median),
            _fmt(s.its_mean), _fmt(s.its_std), _fmt(s.median_seed),
            _fmt(s.evals_mean)]))
    path.write_text("\n".join(lines) + "\n")


def run_experiment(spec: ExperimentSpec,
                   out_dir=None) -> tuple[list[SummaryStats], list[Path]]:
    """Execute the experiment and write its files.

    Returns the per-algorithm summaries (spec order) and every path
    written; the summary CSV is last. Byte-identical output for a fixed
    spec, regardless of worker count. ``out_dir`` falls back to the
    spec's own.
    """
    if out_dir is None:
        out_dir = spec.out_dir
    if out_dir is None:
        raise ValueError("an output directory is required (argument or spec field)")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    by_algo = execute_runs(spec)
    paths = []
    stats = []
    for algorithm in spec.algorithms:
        records = by_algo[algorithm]
        for i, record in enumerate(records):
            p = out / trajectory_filename(spec.objective, algorithm, i)
            write_trajectory_csv(p, record)
            paths.append(p)
        stats.append(summarize(algorithm, records))
    summary_path = out / f"summary_{cell_tag(spec.objective)}.csv"
    write_summary_csv(summary_path, spec, stats)
    paths.append(summary_path)
    return stats, paths


def sweep_cells(funcs=KINDS, l_values=(1e4, 1e6), dims=(20, 40, 60, 80, 100),
                algorithms=SWEEP_ALGORITHMS, runs: int | None = None,
                base_seed: int = 1000, **kwargs) -> list[ExperimentSpec]:
    """The benchmark grid as a list of experiment cells.

    The non-parametrized objective contributes one cell per dimension
    (its L axis collapses). With ``runs=None`` every cell gets 51
    replicates except the plain isotropic scheme on the linear-spectrum
    objective at L=1e6, which is known not to converge in reasonable
    budgets and gets the reduced count of 11.
    """
    cells = []
    for func in funcs:
        if func not in KINDS:
            raise ValueError(f"unknown objective kind {func!r}")
        ls = [None] if func == "frosen" else list(l_values)
        for L in ls:
            for n in dims:
                overrides = {}
                if runs is None and func == "flin" and L == 1e6 and "rp" in algorithms:
                    overrides["rp"] = 11
                cells.append(ExperimentSpec(
                    objective=Objective(func, int(n), L),
                    algorithms=tuple(algorithms),
                    runs=51 if runs is None else int(runs),
                    base_seed=base_seed, run_overrides=overrides, **kwargs))
    return cells
