"""Line search oracles: exact ray minimization and adaptive step size.

Both oracles consume a search direction u and report the step actually
taken relative to the caller's raw u, so every consumer composes
``x_next = x + sigma_taken * u`` the same way regardless of any internal
normalization. ``ass_step`` is the success-based exponential step size
control used by the adaptive solvers; ``exact_ls`` minimizes the
objective along the ray through u.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import NumericError
from .objectives import Objective

#: log step-size increase applied on acceptance; the matching decrease
#: -p/(3(1-p)) makes the expected log change zero at success rate p
SIGMA_UP_LOG = 1.0 / 3.0

MODES = ("adaptive", "exact")


def ass_factors(p: float) -> tuple[float, float]:
    """Multiplicative step size factors (up on success, down on failure)
    for target success probability ``p``.

    Computed here once so the compiled solver loops and the public oracle
    share identical doubles.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"success probability p must lie in (0, 1), got {p}")
    return math.exp(SIGMA_UP_LOG), math.exp(-p / (3.0 * (1.0 - p)))


@dataclass(frozen=True)
class LineSearchMode:
    """Dispatcher configuration: which oracle, and its parameters.

    ``p`` applies to the adaptive oracle, ``tol`` to exact minimization on
    non-quadratic objectives (relative bracket width).
    """

    mode: str = "adaptive"
    p: float = 0.27
    tol: float = 1e-12

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        if not self.tol > 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")


@dataclass(frozen=True)
class StepResult:
    """Outcome of one line search invocation.

    Invariant: ``x_next = x + sigma_taken * u`` bitwise, and a rejected
    step has ``sigma_taken == 0``. ``sigma_next`` is the step size state
    the caller should carry into the next iteration; for the exact oracle
    it equals ``sigma_taken``. ``fval`` is f(x_next), returned so callers
    never re-evaluate a point the oracle already paid for.
    """

    x_next: np.ndarray
    sigma_next: float
    sigma_taken: float
    accepted: bool
    evals: int
    fval: float


def _as_vector(name: str, value) -> np.ndarray:
    arr = np.asarray(value, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise ValueError(f"{name} must be a 1-D real vector, got shape {arr.shape}")
    return arr


def ass_step(f, x, u, sigma: float, p: float = 0.27, fx: float | None = None) -> StepResult:
    """One adaptive step: accept x + sigma*u iff it does not increase f.

    The step size grows by exp(1/3) on success and shrinks by
    exp(-p/(3(1-p))) on failure, which is drift-free at success rate p.
    Pass the known current value as ``fx`` to spend exactly one new
    evaluation; without it the oracle evaluates f(x) itself.
    """
    x = _as_vector("x", x)
    u = _as_vector("u", u)
    if x.shape != u.shape:
        raise ValueError(f"x and u must share a shape, got {x.shape} and {u.shape}")
    if not sigma > 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if not np.any(u != 0.0):
        raise ValueError("direction u must be non-zero")
    up, down = ass_factors(p)
    evals = 0
    if fx is None:
        fx = float(f(x))
        evals += 1
    if not math.isfinite(fx):
        raise NumericError(f"non-finite objective value {fx} at the current iterate", iterate=x)
    cand = x + sigma * u
    fc = float(f(cand))
    evals += 1
    if not math.isfinite(fc):
        raise NumericError(f"non-finite objective value {fc} at the candidate point", iterate=cand)
    if fc <= fx:
        return StepResult(cand, sigma * up, sigma, True, evals, fc)
    return StepResult(x.copy(), sigma * down, 0.0, False, evals, fx)


def exact_ls(f, x, u, tol: float = 1e-12) -> StepResult:
    """Minimize f along the ray through u and step there.

    The direction is normalized internally, but the reported
    ``sigma_taken`` is relative to the caller's raw u. Diagonal quadratic
    objectives get the closed-form three-point parabola minimizer; other
    objectives get factor-2 bracketing from a 1e-8 probe followed by
    golden-section to relative width ``tol``. A direction with no descent
    (or zero curvature) yields an accepted zero step, never an ascent.
    """
    x = _as_vector("x", x)
    u = _as_vector("u", u)
    if x.shape != u.shape:
        raise ValueError(f"x and u must share a shape, got {x.shape} and {u.shape}")
    if not np.any(u != 0.0):
        raise ValueError("direction u must be non-zero")
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    xn = np.empty_like(x)
    if isinstance(f, Objective):
        if x.shape[0] != f.n:
            raise ValueError(f"x has length {x.shape[0]} but the objective has n={f.n}")
        fx = f.value(x)
        if f.is_quadratic:
            st, fnext, evals, ok = _kernels.exactls_quad(f.coeffs, x, u, fx, xn)
        else:
            st, fnext, evals, ok = _kernels.exactls_golden(
                _kernels.KIND_ROSEN, f.coeffs, x, u, fx, tol, xn)
        if not ok:
            raise NumericError(
                "bracketing found no 1-D minimum along the search direction", iterate=x)
        return StepResult(x + st * u, float(st), float(st), True, int(evals) + 1, float(fnext))
    return _exact_ls_generic(f, x, u, tol)


def _exact_ls_generic(f, x, u, tol: float) -> StepResult:
    # mirror of the compiled golden-section path for arbitrary callables;
    # cold path, used for ad-hoc objectives in tests and notebooks
    unorm = math.sqrt(float(u @ u))

    def ray(lam: float) -> float:
        return float(f(x + lam * (u / unorm)))

    fx = float(f(x))
    delta = _kernels.BRACKET_DELTA
    fp = ray(delta)
    fm = ray(-delta)
    evals = 3
    if fp >= fx and fm >= fx:
        return StepResult(x.copy(), 0.0, 0.0, True, evals, fx)
    sgn, fb = (1.0, fp) if fp < fm else (-1.0, fm)
    a, b, c = 0.0, delta, 2.0 * delta
    fc = ray(sgn * c)
    evals += 1
    expansions = 0
    while fc < fb:
        expansions += 1
        if expansions > _kernels.MAX_EXPANSIONS:
            raise NumericError(
                "bracketing found no 1-D minimum along the search direction", iterate=x)
        a, b = b, c
        fb = fc
        c = 2.0 * c
        fc = ray(sgn * c)
        evals += 1
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    lo, hi = a, c
    p1 = hi - inv_phi * (hi - lo)
    p2 = lo + inv_phi * (hi - lo)
    f1 = ray(sgn * p1)
    f2 = ray(sgn * p2)
    evals += 2
    guard = 0
    while (hi - lo) > tol * (abs(lo) + abs(hi)) + 1e-300 and guard < 256:
        guard += 1
        if f1 <= f2:
            hi, p2, f2 = p2, p1, f1
            p1 = hi - inv_phi * (hi - lo)
            f1 = ray(sgn * p1)
        else:
            lo, p1, f1 = p1, p2, f2
            p2 = lo + inv_phi * (hi - lo)
            f2 = ray(sgn * p2)
        evals += 1
    t = p1 if f1 <= f2 else p2
    st = (sgn * t) / unorm
    xn = x + st * u
    fnext = float(f(xn))
    evals += 1
    if not fnext <= fx:
        return StepResult(x.copy(), 0.0, 0.0, True, evals, fx)
    return StepResult(xn, st, st, True, evals, fnext)


def line_search(mode: LineSearchMode, f, x, u, sigma: float, p: float | None = None) -> StepResult:
    """Dispatch to the configured oracle.

    Exact mode ignores ``sigma``; adaptive mode uses ``p`` when given and
    ``mode.p`` otherwise.
    """
    if mode.mode == "exact":
        return exact_ls(f, x, u, tol=mode.tol)
    return ass_step(f, x, u, sigma, mode.p if p is None else p)
