"""Seedable Gaussian sampling and covariance factor maintenance.

Three layers, all deterministic given a stream:

* :class:`RngStream` wraps a PCG64 generator with a stable per-run
  derivation from ``(base_seed, run_index)``.
* :class:`LowRankCovariance` represents ``alpha*I + sum w_i q_i q_i^T``
  implicitly, with O(m*n) sampling (draw order is part of the
  determinism contract: the n-dimensional z block first, then one scalar
  per term, in term order).
* :class:`CholeskyState` maintains a lower-triangular factor of a dense
  covariance under rank-one convex-combination updates, with a tracked
  dense copy used to rebuild the factor if rounding ever breaks it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import NumericError


@dataclass
class RngStream:
    """A seeded random stream owned by exactly one run.

    ``seed`` is the 64-bit integer that fully reproduces the stream;
    records carry it so any single run can be replayed standalone.
    """

    seed: int
    generator: np.random.Generator

    @classmethod
    def from_seed(cls, seed: int) -> "RngStream":
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        return cls(seed, np.random.Generator(np.random.PCG64(seed)))

    @classmethod
    def for_run(cls, base_seed: int, run_index: int) -> "RngStream":
        """Derive the stream for one replicate of an experiment.

        The pair is hashed through SeedSequence into a single 64-bit
        seed, so streams for distinct run indices are statistically
        independent and the derivation is stable across processes.
        """
        base_seed = int(base_seed)
        run_index = int(run_index)
        if not 0 <= base_seed < 2**64:
            raise ValueError(f"base_seed must be an unsigned 64-bit integer, got {base_seed}")
        if run_index < 0:
            raise ValueError(f"run_index must be non-negative, got {run_index}")
        mixed = np.random.SeedSequence((base_seed, run_index)).generate_state(1, np.uint64)[0]
        return cls.from_seed(int(mixed))


def sample_standard_normal(rng: RngStream, n: int) -> np.ndarray:
    """n independent standard normal variates, advancing the stream."""
    if not n >= 1:
        raise ValueError(f"n must be at least 1, got {n}")
    return rng.generator.standard_normal(int(n))


@dataclass(frozen=True)
class LowRankCovariance:
    """Implicit representation of ``alpha*I + sum w_i q_i q_i^T``.

    Positive semi-definite by construction; positive definite iff
    ``alpha > 0``. ``terms`` is ordered: sampling and densification both
    consume it first-to-last.
    """

    n: int
    alpha: float
    terms: tuple[tuple[float, np.ndarray], ...] = ()

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not self.alpha >= 0.0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")
        for w, q in self.terms:
            if not w >= 0.0:
                raise ValueError(f"term weights must be non-negative, got {w}")
            if np.asarray(q).shape != (self.n,):
                raise ValueError(f"every term direction must have shape ({self.n},)")

    def to_dense(self) -> np.ndarray:
        return to_dense(self)


def epcma_alpha_weights(m_total: int, c_cov: float) -> tuple[float, np.ndarray]:
    """Closed form of ``m_total`` sequential updates C <- (1-c)C + c qq^T
    starting from the identity: returns (alpha, weights) with
    alpha = (1-c)^m and w_i = c*(1-c)^(m-i) for i = 1..m.

    Shared by the covariance builder and the solver loops so both sides
    hold bitwise-identical coefficients.
    """
    if not 0.0 < c_cov < 1.0:
        raise ValueError(f"c_cov must lie in (0, 1), got {c_cov}")
    if m_total < 1:
        raise ValueError(f"m_total must be at least 1, got {m_total}")
    alpha = (1.0 - c_cov) ** m_total
    weights = c_cov * (1.0 - c_cov) ** (m_total - 1 - np.arange(m_total))
    return alpha, weights


def build_epcma_covariance(paths, c_cov: float, n: int | None = None) -> LowRankCovariance:
    """Factored equivalent of applying C <- (1-c_cov)C + c_cov*qq^T over
    ``paths`` in order, starting from the identity.

    An empty path list yields the identity covariance (``n`` must then be
    given, since the paths no longer imply a dimension).
    """
    paths = [np.asarray(p, dtype=np.float64) for p in paths]
    if not paths:
        if not 0.0 < c_cov < 1.0:
            raise ValueError(f"c_cov must lie in (0, 1), got {c_cov}")
        if n is None:
            raise ValueError("an empty path list requires an explicit dimension n")
        return LowRankCovariance(int(n), 1.0)
    dim = paths[0].shape[0] if paths[0].ndim == 1 else -1
    for q in paths:
        if q.ndim != 1 or q.shape[0] != dim:
            raise ValueError("all paths must be 1-D vectors of one common length")
    if n is not None and int(n) != dim:
        raise ValueError(f"paths have length {dim} but n={n} was requested")
    alpha, weights = epcma_alpha_weights(len(paths), c_cov)
    return LowRankCovariance(dim, float(alpha),
                             tuple((float(w), q) for w, q in zip(weights, paths)))


def sample_lowrank(rng: RngStream, cov: LowRankCovariance) -> np.ndarray:
    """Draw u with Cov(u) = to_dense(cov) in O(m*n):
    u = sqrt(alpha)*z + sum sqrt(w_i)*zeta_i*q_i.

    Every term consumes its zeta draw even when its weight or direction
    is zero; skipping them would silently desynchronize seeded runs.
    """
    z = rng.generator.standard_normal(cov.n)
    u = np.sqrt(cov.alpha) * z
    for w, q in cov.terms:
        s = np.sqrt(w) * rng.generator.standard_normal()
        u += s * q
    return u


def to_dense(cov: LowRankCovariance) -> np.ndarray:
    """Materialize the covariance as a dense symmetric matrix."""
    c = cov.alpha * np.eye(cov.n)
    for w, q in cov.terms:
        c += w * np.outer(q, q)
    return c


@dataclass
class CholeskyState:
    """Lower-triangular factor of a dense covariance, plus the tracked
    dense matrix itself.

    The dense copy costs one extra O(n^2) accumulation per update and is
    what makes recovery from a numerically failed factor update possible
    without losing the run.
    """

    factor: np.ndarray
    dense: np.ndarray

    @classmethod
    def identity(cls, n: int) -> "CholeskyState":
        if not n >= 1:
            raise ValueError(f"n must be at least 1, got {n}")
        return cls(np.eye(n), np.eye(n))

    @property
    def n(self) -> int:
        return self.factor.shape[0]


def cholesky_rank_one_update(state: CholeskyState, scale_old: float,
                             weight: float, v) -> CholeskyState:
    """Return a new state with factor F satisfying
    F F^T = scale_old * (Lambda Lambda^T) + weight * v v^T.

    O(n^2): the factor is rescaled and then rotated through the standard
    rank-one update. If rounding destroys the factor's positive diagonal,
    the tracked dense matrix is refactorized from scratch; only if that
    also fails (the update genuinely left the PD cone) is a numeric error
    raised.
    """
    if not 0.0 < scale_old <= 1.0:
        raise ValueError(f"scale_old must lie in (0, 1], got {scale_old}")
    if not weight >= 0.0:
        raise ValueError(f"weight must be non-negative, got {weight}")
    v = np.asarray(v, dtype=np.float64)
    n = state.n
    if v.shape != (n,):
        raise ValueError(f"v must have shape ({n},), got {v.shape}")
    dense = scale_old * state.dense + weight * np.outer(v, v)
    factor = np.sqrt(scale_old) * state.factor
    w = np.sqrt(weight) * v
    if not _kernels.choldate_core(factor, w):
        if not _kernels.dense_cholesky(dense, factor):
            raise NumericError(
                "rank-one covariance update left the positive-definite cone", iterate=v)
    return CholeskyState(factor, dense)


def sample_gaussian_cholesky(rng: RngStream, state: CholeskyState) -> np.ndarray:
    """Draw u ~ N(0, factor factor^T), advancing the stream by n variates."""
    z = rng.generator.standard_normal(state.n)
    u = np.empty(state.n)
    _kernels.tri_matvec_lower(state.factor, z, u)
    return u
