"""The four randomized schemes behind a uniform run interface.

Each ``*_run`` function executes one seeded run to a target value or an
iteration budget and returns a :class:`RunRecord` with a bounded set of
trajectory checkpoints. The hot loops live in compiled kernels; this
module owns configuration validation, the degenerate cases (zero budget,
already-converged start), checkpoint assembly, and error reporting.

Numeric failures inside a run (non-finite values, a lost covariance
factorization, a failed line-search bracket) do not raise: the run is
reported with ``success=False`` and a diagnostic note, which is what a
replication harness wants from one bad replicate out of fifty-one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .linesearch import LineSearchMode, ass_factors
from .objectives import _KIND_CODE, Objective
from .sampling import RngStream, epcma_alpha_weights

#: checkpoint buffer capacities: half-decade threshold crossings and
#: stride-spaced records (the stride doubles when the buffer fills)
THRESHOLD_CAP = 256
STRIDE_CAP = 2048

DRIFT_MODES = ("taken-step", "verbatim")

_STATUS_NOTES = {
    _kernels.STATUS_LS_FAIL: "line search bracketing failed at iteration {it}",
    _kernels.STATUS_NONFINITE: "non-finite objective value at iteration {it}",
    _kernels.STATUS_CHOL_FAIL: "covariance factorization lost positive definiteness at iteration {it}",
}


@dataclass(frozen=True)
class CommonConfig:
    """Knobs shared by every scheme.

    ``budget=None`` resolves to 10^7 * n at run time. ``ls_mode`` selects
    the line-search oracle; the adaptive oracle uses ``p``.
    """

    x0: np.ndarray
    sigma0: float = 1.0
    p: float = 0.27
    budget: int | None = None
    target: float = 1e-9
    ls_mode: LineSearchMode = LineSearchMode()

    def __post_init__(self):
        x0 = np.array(self.x0, dtype=np.float64)
        if x0.ndim != 1 or x0.shape[0] < 1:
            raise ValueError(f"x0 must be a 1-D real vector, got shape {x0.shape}")
        if not np.all(np.isfinite(x0)):
            raise ValueError("x0 contains non-finite components")
        object.__setattr__(self, "x0", x0)
        if not self.sigma0 > 0.0:
            raise ValueError(f"sigma0 must be positive, got {self.sigma0}")
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        if self.budget is not None and not (int(self.budget) >= 0):
            raise ValueError(f"budget must be >= 0, got {self.budget}")
        if self.budget is not None:
            object.__setattr__(self, "budget", int(self.budget))
        if not self.target > 0.0:
            raise ValueError(f"target must be positive, got {self.target}")

    def resolved_budget(self, n: int) -> int:
        return 10**7 * n if self.budget is None else self.budget


@dataclass(frozen=True)
class SarpConfig:
    """Spectral bounds driving the accelerated scheme.

    ``mu`` lower-bounds and ``lmax`` upper-bounds the Hessian spectrum;
    the coupling parameter is theta = sqrt(mu / (2 n^2 lmax)).

    ``drift_mode`` picks the step size multiplying the exploration term
    in the v update. ``taken-step`` (default) uses the step actually
    taken, which is zero on a rejected step. ``verbatim`` follows the
    scheme's literal statement and uses the post-update step size, which
    is nonzero on rejection; under success-based step size control the
    rejected direction is correlated with ascent, and on ill-conditioned
    problems this mode empirically drives v to overflow instead of
    converging. It is kept available for study, not for production runs.
    """

    mu: float
    lmax: float
    drift_mode: str = "taken-step"
    record_drift: bool = False

    def __post_init__(self):
        if not (np.isfinite(self.mu) and np.isfinite(self.lmax)):
            raise ValueError("mu and lmax must be finite")
        if not 0.0 < self.mu <= self.lmax:
            raise ValueError(f"require 0 < mu <= lmax, got mu={self.mu}, lmax={self.lmax}")
        if self.drift_mode not in DRIFT_MODES:
            raise ValueError(f"drift_mode must be one of {DRIFT_MODES}, got {self.drift_mode!r}")

    def theta(self, n: int) -> float:
        """Coupling parameter for dimension n; always in (0, 1)."""
        t = math.sqrt(self.mu / (2.0 * n * n * self.lmax))
        if not 0.0 < t < 1.0:
            raise ValueError(f"theta={t} out of range for n={n}")
        return t


@dataclass(frozen=True)
class CmaConfig:
    """Covariance adaptation coefficients.

    ``memory`` and ``shift_interval`` apply to the low-rank scheme only;
    the dense single-parent scheme leaves them None.
    """

    c_c: float
    c_p: float
    c_cov: float
    memory: int | None = None
    shift_interval: int | None = None

    def __post_init__(self):
        for name in ("c_c", "c_p", "c_cov"):
            val = getattr(self, name)
            if not 0.0 < val < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {val}")
        if self.memory is not None:
            if not int(self.memory) >= 1:
                raise ValueError(f"memory must be >= 1, got {self.memory}")
            object.__setattr__(self, "memory", int(self.memory))
            if self.shift_interval is None or not int(self.shift_interval) >= 1:
                raise ValueError("memory requires a positive shift_interval")
            object.__setattr__(self, "shift_interval", int(self.shift_interval))

    @classmethod
    def for_dimension(cls, n: int, memory: int | None = None) -> "CmaConfig":
        """Standard coefficients: c_c = 2/(n+2), c_p = 1/12, and a
        covariance rate of 2/(n^2+6) for the dense scheme or 1/5 (m=1)
        resp. 2/(6+m) (m>1) for the low-rank scheme, with path snapshots
        every ceil(n^2/m) iterations."""
        if not n >= 2:
            raise ValueError(f"n must be at least 2, got {n}")
        c_c = 2.0 / (n + 2.0)
        c_p = 1.0 / 12.0
        if memory is None:
            return cls(c_c, c_p, 2.0 / (n * n + 6.0))
        m = int(memory)
        if m < 1:
            raise ValueError(f"memory must be >= 1, got {memory}")
        c_cov = 1.0 / 5.0 if m == 1 else 2.0 / (6.0 + m)
        return cls(c_c, c_p, c_cov, m, math.ceil(n * n / m))


@dataclass
class DriftLog:
    """Distance between the query point and the iterate, sampled at the
    checkpoint iterations, with the scheme's drift constants recorded:
    theta_prime = sqrt(mu/(n^2 lmax)) and beta = (1-theta')/(1+theta')."""

    theta_prime: float
    beta: float
    entries: list[tuple[int, float]] = field(default_factory=list)


@dataclass
class RunRecord:
    """Everything one seeded run produced.

    ``checkpoints`` is a bounded list of (iteration, fval, sigma),
    strictly increasing in iteration, always including iteration 0 and
    (for runs that ended normally) the final iterate. ``its_to_target``
    is present exactly when the run reached the target. ``note`` carries
    a diagnostic when the run was aborted by a numeric failure.
    """

    algorithm: str
    seed: int
    checkpoints: list[tuple[int, float, float]]
    its_to_target: int | None
    evals: int
    success: bool
    final_fval: float
    drift_log: DriftLog | None = None
    note: str | None = None


class _Buffers:
    """Preallocated checkpoint storage shared with the kernels."""

    def __init__(self, n: int):
        self.thr_it = np.zeros(THRESHOLD_CAP, np.int64)
        self.thr_f = np.zeros(THRESHOLD_CAP)
        self.thr_s = np.zeros(THRESHOLD_CAP)
        self.thr_d = np.zeros(THRESHOLD_CAP)
        self.st_it = np.zeros(STRIDE_CAP, np.int64)
        self.st_f = np.zeros(STRIDE_CAP)
        self.st_s = np.zeros(STRIDE_CAP)
        self.st_d = np.zeros(STRIDE_CAP)
        self.counts = np.zeros(2, np.int64)
        self.stride = np.array([n], np.int64)

    def args(self):
        return (self.thr_it, self.thr_f, self.thr_s, self.thr_d,
                self.st_it, self.st_f, self.st_s, self.st_d,
                self.counts, self.stride)


def _initial_level(f0: float) -> float:
    """First half-decade ladder level strictly below f0."""
    if not f0 > 0.0:
        return 0.0
    level = 10.0 ** (math.floor(2.0 * math.log10(f0)) / 2.0)
    if level >= f0:
        level *= float(_kernels.INV_SQRT10)
    return level


def _check_run_inputs(f: Objective, cfg: CommonConfig, rng: RngStream) -> None:
    if not isinstance(f, Objective):
        raise TypeError(f"solver runs require an Objective, got {type(f).__name__}")
    if not isinstance(cfg, CommonConfig):
        raise TypeError(f"cfg must be a CommonConfig, got {type(cfg).__name__}")
    if not isinstance(rng, RngStream):
        raise TypeError(f"rng must be an RngStream, got {type(rng).__name__}")
    if cfg.x0.shape != (f.n,):
        raise ValueError(f"x0 has shape {cfg.x0.shape} but the objective has n={f.n}")


def _trivial_record(algorithm: str, rng: RngStream, cfg: CommonConfig,
                    f0: float) -> RunRecord | None:
    """Record for the no-iteration cases, or None when the run must go on."""
    if f0 <= cfg.target:
        return RunRecord(algorithm, rng.seed, [(0, f0, cfg.sigma0)], 0, 1, True, f0)
    return None


def _budget_record(algorithm: str, rng: RngStream, cfg: CommonConfig, f0: float) -> RunRecord:
    return RunRecord(algorithm, rng.seed, [(0, f0, cfg.sigma0)], None, 1, False, f0)


def _assemble(algorithm: str, rng: RngStream, cfg: CommonConfig, f0: float,
              bufs: _Buffers, status: int, its: int, fx: float, sigma: float,
              evals_inner: int, drift: DriftLog | None = None) -> RunRecord:
    """Merge the kernel's checkpoint buffers into one sorted record."""
    aborted = status in _STATUS_NOTES
    c0 = int(bufs.counts[0])
    c1 = int(bufs.counts[1])
    rows: dict[int, tuple[float, float]] = {0: (f0, cfg.sigma0)}
    dvals: dict[int, float] = {}
    for k in range(c0):
        it = int(bufs.thr_it[k])
        rows.setdefault(it, (float(bufs.thr_f[k]), float(bufs.thr_s[k])))
        dvals.setdefault(it, float(bufs.thr_d[k]))
    for k in range(c1):
        it = int(bufs.st_it[k])
        rows.setdefault(it, (float(bufs.st_f[k]), float(bufs.st_s[k])))
        dvals.setdefault(it, float(bufs.st_d[k]))
    if not aborted:
        rows.setdefault(int(its), (float(fx), float(sigma)))
    checkpoints = [(it, v[0], v[1]) for it, v in sorted(rows.items())]
    if drift is not None:
        drift.entries = [(it, dvals[it]) for it in sorted(dvals)]
    success = status == _kernels.STATUS_SUCCESS
    note = _STATUS_NOTES[status].format(it=its) if aborted else None
    return RunRecord(algorithm, rng.seed, checkpoints,
                     int(its) if success else None,
                     1 + int(evals_inner), success, float(fx), drift, note)


def rp_run(f: Objective, cfg: CommonConfig, rng: RngStream) -> RunRecord:
    """Isotropic random direction search with the configured line search.

    Each iteration draws u ~ N(0, I), applies the oracle at the current
    iterate, and keeps its output. The value sequence is monotone.
    """
    _check_run_inputs(f, cfg, rng)
    exact = cfg.ls_mode.mode == "exact"
    algorithm = "rp-exact" if exact else "rp"
    x = cfg.x0.copy()
    f0 = f.value(x)
    rec = _trivial_record(algorithm, rng, cfg, f0)
    if rec is not None:
        return rec
    budget = cfg.resolved_budget(f.n)
    if budget == 0:
        return _budget_record(algorithm, rng, cfg, f0)
    up, down = ass_factors(cfg.p)
    bufs = _Buffers(f.n)
    status, its, fx, sigma, evals, _ = _kernels.rp_kernel(
        rng.generator, _KIND_CODE[f.kind], f.coeffs, x, cfg.sigma0, up, down,
        exact, cfg.ls_mode.tol, budget, cfg.target, f0, _initial_level(f0),
        *bufs.args())
    return _assemble(algorithm, rng, cfg, f0, bufs, status, its, fx, sigma, evals)


def sarp_run(f: Objective, cfg: CommonConfig, scfg: SarpConfig, rng: RngStream) -> RunRecord:
    """Accelerated scheme: the line search queries an auxiliary point y
    coupled to the iterate through a momentum sequence v.

    Not monotone in the recorded values: y moves away from x, and the
    next x is the line-search output at y. The drift term in the v
    update is theta * n * (lmax/mu) * sigma_tilde * u; see
    :class:`SarpConfig` for the two sigma_tilde conventions.
    """
    _check_run_inputs(f, cfg, rng)
    if not isinstance(scfg, SarpConfig):
        raise TypeError(f"scfg must be a SarpConfig, got {type(scfg).__name__}")
    exact = cfg.ls_mode.mode == "exact"
    algorithm = "sarp-exact" if exact else "sarp"
    x = cfg.x0.copy()
    f0 = f.value(x)
    theta_prime = math.sqrt(scfg.mu / (f.n * f.n * scfg.lmax))
    drift = DriftLog(theta_prime, (1.0 - theta_prime) / (1.0 + theta_prime)) \
        if scfg.record_drift else None
    rec = _trivial_record(algorithm, rng, cfg, f0)
    if rec is not None:
        rec.drift_log = drift
        return rec
    budget = cfg.resolved_budget(f.n)
    if budget == 0:
        rec = _budget_record(algorithm, rng, cfg, f0)
        rec.drift_log = drift
        return rec
    up, down = ass_factors(cfg.p)
    theta = scfg.theta(f.n)
    drift_coef = theta * f.n * (scfg.lmax / scfg.mu)
    bufs = _Buffers(f.n)
    y = cfg.x0.copy()
    v = cfg.x0.copy()
    status, its, fx, sigma, evals, _ = _kernels.sarp_kernel(
        rng.generator, _KIND_CODE[f.kind], f.coeffs, x, y, v, cfg.sigma0, up, down,
        exact, cfg.ls_mode.tol, theta, drift_coef,
        scfg.drift_mode == "verbatim", scfg.record_drift,
        budget, cfg.target, f0, _initial_level(f0), *bufs.args())
    return _assemble(algorithm, rng, cfg, f0, bufs, status, its, fx, sigma, evals, drift)


def cma11_run(f: Objective, cfg: CommonConfig, ccfg: CmaConfig, rng: RngStream) -> RunRecord:
    """Single-parent adaptive-covariance search.

    Directions are drawn from N(0, C) through a maintained Cholesky
    factor; a success updates the evolution path and applies a rank-one
    covariance update, a failure only decays the path. Monotone values.
    Always uses the adaptive step size oracle.
    """
    _check_run_inputs(f, cfg, rng)
    if not isinstance(ccfg, CmaConfig):
        raise TypeError(f"ccfg must be a CmaConfig, got {type(ccfg).__name__}")
    algorithm = "cma11"
    x = cfg.x0.copy()
    f0 = f.value(x)
    rec = _trivial_record(algorithm, rng, cfg, f0)
    if rec is not None:
        return rec
    budget = cfg.resolved_budget(f.n)
    if budget == 0:
        return _budget_record(algorithm, rng, cfg, f0)
    up, down = ass_factors(cfg.p)
    bufs = _Buffers(f.n)
    status, its, fx, sigma, evals, _ = _kernels.cma11_kernel(
        rng.generator, _KIND_CODE[f.kind], f.coeffs, x, cfg.sigma0, up, down,
        1.0 - ccfg.c_c, math.sqrt(ccfg.c_c * (2.0 - ccfg.c_c)), 1.0 - ccfg.c_p,
        1.0 - ccfg.c_cov, math.sqrt(1.0 - ccfg.c_cov), ccfg.c_cov, math.sqrt(ccfg.c_cov),
        budget, cfg.target, f0, _initial_level(f0),
        np.eye(f.n), np.eye(f.n), np.zeros(f.n), *bufs.args())
    return _assemble(algorithm, rng, cfg, f0, bufs, status, its, fx, sigma, evals)


def epcma_run(f: Objective, cfg: CommonConfig, ccfg: CmaConfig, rng: RngStream) -> RunRecord:
    """Low-rank covariance search with m stored evolution paths.

    The sampling covariance is the factored form of m sequential rank-one
    updates over (ring snapshots..., live path) from the identity; the
    ring rotates in a fresh snapshot of the live path every
    ``shift_interval`` iterations. Work per iteration is O(m*n).
    """
    _check_run_inputs(f, cfg, rng)
    if not isinstance(ccfg, CmaConfig):
        raise TypeError(f"ccfg must be a CmaConfig, got {type(ccfg).__name__}")
    if ccfg.memory is None:
        raise ValueError("epcma_run requires a CmaConfig with memory set")
    m = ccfg.memory
    algorithm = f"epcma-{m}"
    x = cfg.x0.copy()
    f0 = f.value(x)
    rec = _trivial_record(algorithm, rng, cfg, f0)
    if rec is not None:
        return rec
    budget = cfg.resolved_budget(f.n)
    if budget == 0:
        return _budget_record(algorithm, rng, cfg, f0)
    up, down = ass_factors(cfg.p)
    alpha, weights = epcma_alpha_weights(m, ccfg.c_cov)
    bufs = _Buffers(f.n)
    status, its, fx, sigma, evals, _ = _kernels.epcma_kernel(
        rng.generator, _KIND_CODE[f.kind], f.coeffs, x, cfg.sigma0, up, down,
        1.0 - ccfg.c_c, math.sqrt(ccfg.c_c * (2.0 - ccfg.c_c)), 1.0 - ccfg.c_p,
        math.sqrt(alpha), np.sqrt(weights), ccfg.shift_interval,
        budget, cfg.target, f0, _initial_level(f0),
        np.zeros((m - 1, f.n)), np.zeros(f.n), *bufs.args())
    return _assemble(algorithm, rng, cfg, f0, bufs, status, its, fx, sigma, evals)
