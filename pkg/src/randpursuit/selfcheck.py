"""Fast property suites behind the ``verify`` subcommand.

Each check prints one PASS/FAIL line and the whole suite stays under a
minute; these are smoke-level guarantees (the full test suite asserts
the same properties at tighter scales and more).
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import _kernels
from .linesearch import ass_factors, exact_ls
from .objectives import Objective
from .sampling import RngStream, build_epcma_covariance, sample_lowrank, to_dense
from .solvers import CommonConfig, rp_run


def _check_drift_identity() -> tuple[bool, str]:
    p = Fraction(27, 100)
    drift = p * Fraction(1, 3) - (1 - p) * (p / (3 * (1 - p)))
    up, down = ass_factors(0.27)
    float_drift = 0.27 * math.log(up) + 0.73 * math.log(down)
    ok = drift == 0 and abs(float_drift) < 1e-16
    return ok, f"exact drift {drift}, float residual {float_drift:.2e}"


def _check_acceptance_rate() -> tuple[bool, str]:
    from .objectives import _KIND_CODE
    from .solvers import _Buffers, _initial_level
    obj = Objective("fexp", 20, 1e4)
    up, down = ass_factors(0.27)
    bufs = _Buffers(20)
    x = np.ones(20)
    f0 = obj(x)
    rng = RngStream.from_seed(20240101)
    *_, accepts = _kernels.rp_kernel(
        rng.generator, _KIND_CODE[obj.kind], obj.coeffs, x, 1.0, up, down,
        False, 1e-12, 30_000, 0.0, f0, _initial_level(f0), *bufs.args())
    rate = accepts / 30_000
    ok = 0.17 <= rate <= 0.37
    return ok, f"acceptance rate {rate:.4f} over 30000 iterations"


def _check_progress_bound() -> tuple[bool, str]:
    rng = RngStream.from_seed(7)
    coeffs = np.sort(rng.generator.uniform(0.5, 50.0, size=10))
    x = rng.generator.standard_normal(10)
    trials = 20_000
    mean, m2 = _kernels.mc_one_step_ratio(rng.generator, coeffs, x, trials)
    se = math.sqrt(m2 / (trials - 1)) / math.sqrt(trials)
    bound = 1.0 - coeffs.min() / coeffs.sum()
    ok = mean <= bound + 3.0 * se
    return ok, f"MC mean {mean:.6f} vs bound {bound:.6f} + 3SE {3*se:.2e}"


def _check_ls_orthogonality() -> tuple[bool, str]:
    rng = RngStream.from_seed(11)
    worst = 0.0
    for t in range(300):
        n = int(rng.generator.integers(2, 30))
        kind = ("fexp", "flin", "ftwo")[t % 3]
        obj = Objective(kind, n, float(rng.generator.uniform(2.0, 1e4)))
        x = rng.generator.standard_normal(n)
        u = rng.generator.standard_normal(n)
        step = exact_ls(obj, x, u)
        resid = abs(obj.gradient(step.x_next) @ u)
        scale = np.linalg.norm(obj.gradient(x)) * np.linalg.norm(u)
        if scale > 0:
            worst = max(worst, resid / scale)
    ok = worst <= 1e-8
    return ok, f"worst |grad(x+)@u| / (|grad(x)||u|) = {worst:.2e}"


def _check_sampler_equivalence() -> tuple[bool, str]:
    rng = RngStream.from_seed(13)
    paths = [rng.generator.standard_normal(8) for _ in range(5)]
    c_cov = 0.25
    dense = np.eye(8)
    for q in paths:
        dense = (1.0 - c_cov) * dense + c_cov * np.outer(q, q)
    factored = to_dense(build_epcma_covariance(paths, c_cov))
    err = np.abs(factored - dense).max()
    cov = build_epcma_covariance([p / np.linalg.norm(p) for p in paths[:2]], c_cov)
    samples = np.stack([sample_lowrank(rng, cov) for _ in range(50_000)])
    emp = (samples.T @ samples) / samples.shape[0]
    err2 = np.abs(emp - to_dense(cov)).max()
    ok = err <= 1e-12 and err2 <= 0.1
    return ok, f"factored-vs-loop {err:.2e}, empirical-cov {err2:.3f}"


def _check_choldate() -> tuple[bool, str]:
    err = _kernels.choldate_stress(RngStream.from_seed(17).generator, 12, 2000)
    ok = err <= 1e-9
    return ok, f"reconstruction error {err:.2e} after 2000 updates"


def _check_determinism() -> tuple[bool, str]:
    obj = Objective("ftwo", 10, 100.0)
    recs = [rp_run(obj, CommonConfig(x0=np.ones(10), budget=5000),
                   RngStream.for_run(99, 4)) for _ in range(2)]
    ok = (recs[0].checkpoints == recs[1].checkpoints
          and recs[0].its_to_target == recs[1].its_to_target
          and recs[0].seed == recs[1].seed)
    return ok, f"two replays, {len(recs[0].checkpoints)} checkpoints compared"


CHECKS = (
    ("step-size drift identity", _check_drift_identity),
    ("acceptance-rate equilibrium", _check_acceptance_rate),
    ("one-step progress bound", _check_progress_bound),
    ("exact line search orthogonality", _check_ls_orthogonality),
    ("low-rank sampler equivalence", _check_sampler_equivalence),
    ("rank-one Cholesky maintenance", _check_choldate),
    ("seeded determinism", _check_determinism),
)


def run_all(verbose: bool = True) -> int:
    """Run every check; returns the number of failures."""
    failures = 0
    for name, check in CHECKS:
        try:
            ok, detail = check()
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        if not ok:
            failures += 1
        if verbose:
            print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return failures
