"""Exception types shared across the package."""

from __future__ import annotations

import numpy as np


class NumericError(RuntimeError):
    """A computation produced a non-finite or numerically invalid result.

    Carries the iterate at which the failure occurred, when one is
    available, so callers can log or inspect the failing state.
    """

    def __init__(self, message: str, iterate: np.ndarray | None = None):
        super().__init__(message)
        self.iterate = None if iterate is None else np.asarray(iterate, dtype=float).copy()
