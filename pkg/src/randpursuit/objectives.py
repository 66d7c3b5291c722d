"""Benchmark objective functions with exact gradients and spectral metadata.

Four standard test problems are provided, each scaled so the minimum value
is 0:

``fexp``
    Diagonal quadratic with exponentially spaced coefficients
    ``L**((i-1)/(n-1))`` for ``i = 1..n``; condition number exactly ``L``.
``flin``
    Diagonal quadratic with linearly spaced coefficients
    ``1 + i*(L-1)/(n-1)`` for ``i = 1..n``.
``ftwo``
    Diagonal quadratic with a two-valued spectrum: coefficient 1 on the
    first ``floor(n/2)`` coordinates and ``L`` on the rest.
``frosen``
    The chained Rosenbrock function, ``sum(100*(x_i^2 - x_{i+1})^2 +
    (x_i - 1)^2)``, non-convex with minimizer at the all-ones vector.

Quadratics are represented by their diagonal coefficient vector, never as a
dense matrix, so evaluation is O(n) and the spectrum is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels

KINDS = ("fexp", "flin", "ftwo", "frosen")

_KIND_CODE = {"fexp": _kernels.KIND_QUAD, "flin": _kernels.KIND_QUAD,
              "ftwo": _kernels.KIND_QUAD, "frosen": _kernels.KIND_ROSEN}


@dataclass(frozen=True)
class SpectralBounds:
    """Eigenvalue bounds of an objective's Hessian.

    Parameters
    ----------
    mu : float
        Lower bound on the smallest Hessian eigenvalue.
    lmax : float
        Upper bound on the largest Hessian eigenvalue.
    trace : float or None
        Exact Hessian trace, available for the diagonal quadratics only.
    """

    mu: float
    lmax: float
    trace: float | None = None

    def __post_init__(self):
        if not (0.0 < self.mu <= self.lmax):
            raise ValueError(f"require 0 < mu <= lmax, got mu={self.mu}, lmax={self.lmax}")
        if self.trace is not None and not np.isfinite(self.trace):
            raise ValueError(f"trace must be finite, got {self.trace}")

    @property
    def kappa(self) -> float:
        """Condition number bound lmax / mu."""
        return self.lmax / self.mu


@dataclass(frozen=True)
class Objective:
    """One benchmark objective: a kind, a dimension, and a conditioning parameter.

    Parameters
    ----------
    kind : str
        One of ``fexp``, ``flin``, ``ftwo``, ``frosen``.
    n : int
        Dimension, at least 2.
    L : float, optional
        Conditioning parameter, at least 1. Required for the quadratic
        kinds and ignored (normalized to None) for ``frosen``.

    Instances are immutable and safe to share across threads or processes;
    evaluation and gradients are pure functions of ``x``.
    """

    kind: str
    n: int
    L: float | None = None
    coeffs: np.ndarray | None = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown objective kind {self.kind!r}, expected one of {KINDS}")
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool):
            raise ValueError(f"n must be an integer, got {self.n!r}")
        if self.n < 2:
            raise ValueError(f"n must be at least 2, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        if self.kind == "frosen":
            object.__setattr__(self, "L", None)
            object.__setattr__(self, "coeffs", np.empty(0))
            return
        if self.L is None:
            raise ValueError(f"objective {self.kind!r} requires the conditioning parameter L")
        L = float(self.L)
        if not np.isfinite(L) or L < 1.0:
            raise ValueError(f"L must be finite and >= 1, got {self.L}")
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "coeffs", _diag_coefficients(self.kind, self.n, L))

    @property
    def is_quadratic(self) -> bool:
        return self.kind != "frosen"

    def _check_x(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"expected x of shape ({self.n},), got {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ValueError("x contains non-finite components")
        return x

    def value(self, x) -> float:
        """Evaluate the objective at ``x``. Always non-negative."""
        x = self._check_x(x)
        return _kernels.eval_objective(_KIND_CODE[self.kind], self.coeffs, x)

    __call__ = value

    def gradient(self, x) -> np.ndarray:
        """Analytic gradient at ``x``; matches central finite differences."""
        x = self._check_x(x)
        if self.is_quadratic:
            return self.coeffs * x
        g = np.zeros(self.n)
        d = x[:-1] ** 2 - x[1:]
        g[:-1] = 400.0 * x[:-1] * d + 2.0 * (x[:-1] - 1.0)
        g[1:] -= 200.0 * d
        return g

    def spectral_bounds(self) -> SpectralBounds:
        return spectral_bounds(self)


def _diag_coefficients(kind: str, n: int, L: float) -> np.ndarray:
    if kind == "fexp":
        return L ** (np.arange(n) / (n - 1))
    if kind == "flin":
        return 1.0 + np.arange(1, n + 1) * ((L - 1.0) / (n - 1.0))
    half = n // 2
    c = np.full(n, L)
    c[:half] = 1.0
    return c


def _rosen_hessian_at_ones(n: int) -> np.ndarray:
    """Hessian of the Rosenbrock function at the all-ones minimizer."""
    h = np.zeros((n, n))
    for i in range(n - 1):
        h[i, i] += 1200.0 - 400.0 + 2.0
        h[i, i + 1] += -400.0
        h[i + 1, i] += -400.0
        h[i + 1, i + 1] += 200.0
    return h


def evaluate(spec: Objective, x) -> float:
    """Evaluate ``spec`` at ``x``; see :meth:`Objective.value`."""
    return spec.value(x)


def gradient(spec: Objective, x) -> np.ndarray:
    """Analytic gradient of ``spec`` at ``x``; see :meth:`Objective.gradient`."""
    return spec.gradient(x)


def spectral_bounds(spec: Objective) -> SpectralBounds:
    """Hessian eigenvalue bounds (and trace, for quadratics) of ``spec``.

    For the diagonal quadratics the bounds are the exact extreme diagonal
    coefficients. For ``frosen`` they are the eigenvalue extremes of the
    analytic Hessian at the minimizer (the all-ones vector), computed
    numerically; the trace is omitted because the Hessian is not constant.
    """
    if spec.is_quadratic:
        c = spec.coeffs
        return SpectralBounds(mu=float(c.min()), lmax=float(c.max()), trace=float(c.sum()))
    eigs = np.linalg.eigvalsh(_rosen_hessian_at_ones(spec.n))
    return SpectralBounds(mu=float(eigs[0]), lmax=float(eigs[-1]), trace=None)


def rp_exact_rate_bound(bounds: SpectralBounds) -> float:
    """Guaranteed expected one-step progress factor of exact-line-search
    random pursuit on a quadratic: ``E[f(x+) | x] <= (1 - mu/trace) f(x)``.

    Requires ``bounds.trace``; raises ValueError for objectives without one.
    """
    if bounds.trace is None:
        raise ValueError("rate bound requires the Hessian trace (quadratic objectives only)")
    rate = 1.0 - bounds.mu / bounds.trace
    if not (0.0 < rate < 1.0):
        raise ValueError(f"degenerate rate bound {rate} (mu={bounds.mu}, trace={bounds.trace})")
    return rate
