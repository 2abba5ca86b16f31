"""Utility reconstruction from a window of rankings.

Every ranking is reduced to pair tallies against the reference action (the
last index).  For action ``j`` a step contributes the fraction
``ahead / (ahead + behind)`` when ``j`` and the reference co-occur; the
window mean of these fractions is pushed through the inverse logistic map.

Fractions are accumulated as exact integer numerators grouped by their
denominator, so the naive estimator and the sliding (incremental) one agree
bit for bit.
"""

from dataclasses import dataclass
from math import exp, log, sqrt
from typing import NamedTuple

import numpy as np

from rankfeed import _kernels
from rankfeed.ranking_model import sigmoid


@dataclass(frozen=True)
class EstimatorConfig:
    window_m: int
    tau: float
    n_actions: int

    def __post_init__(self):
        if int(self.window_m) < 1:
            raise ValueError("window_m must be at least 1")
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if int(self.n_actions) < 2:
            raise ValueError("n_actions must be at least 2")


@dataclass(frozen=True)
class EstimationBoundInputs:
    tau: float
    p: float
    m_prime: int
    delta: float
    n_actions: int
    window_variation: float = 0.0

    def __post_init__(self):
        if not 0 < self.p <= 1:
            raise ValueError("p must lie in (0, 1]")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if self.window_variation < 0:
            raise ValueError("window_variation must be nonnegative")
        if self.tau <= 0 or self.m_prime < 1 or self.n_actions < 2:
            raise ValueError("tau > 0, m_prime >= 1 and n_actions >= 2 required")


class ErrorBound(NamedTuple):
    value: float | None
    applicable: bool


def _as_window(window):
    if isinstance(window, np.ndarray) and window.ndim == 2:
        return [row for row in window]
    return [np.asarray(r, dtype=np.int64) for r in window]


def _denominator_cap(k: int) -> int:
    # largest c_j * c_ref with c_j + c_ref <= k
    return max(1, (k // 2) * (k - k // 2))


def _reduce(numer, count, denoms):
    """Mean fraction per action from grouped tallies; NaN where no data."""
    return _kernels.reduce_fractions(numer, count, denoms)


def logit(f):
    f = np.asarray(f, dtype=np.float64)
    with np.errstate(divide="ignore"):
        return np.log(f) - np.log1p(-f)


def fractions_to_utilities(frac, tau: float) -> np.ndarray:
    """Invert the logistic map and project onto [-1, 1].

    ``frac`` may hold NaN (action never compared) which maps to 0, and the
    degenerate fractions 0 and 1 which map to the box boundary.
    """
    frac = np.asarray(frac, dtype=np.float64)
    out = np.zeros_like(frac)
    ok = ~np.isnan(frac)
    out[ok] = np.clip(tau * logit(frac[ok]), -1.0, 1.0)
    return out


def clamp_then_invert(frac, tau: float) -> np.ndarray:
    """Clamp fractions into [sig(-1/tau), sig(1/tau)] and then invert."""
    frac = np.asarray(frac, dtype=np.float64)
    lo = sigmoid(-1.0 / tau)
    hi = sigmoid(1.0 / tau)
    if tau < 1e-3:
        lo, hi = max(lo, 1e-15), min(hi, 1.0 - 1e-15)
    out = np.zeros_like(frac)
    ok = ~np.isnan(frac)
    out[ok] = np.clip(tau * logit(np.clip(frac[ok], lo, hi)), -1.0, 1.0)
    return out


def grouped_tallies(ahead, total, cap):
    """Group per-step tallies (m, A) by denominator into (A, cap+1) arrays."""
    m, n_actions = ahead.shape
    numer = np.zeros((n_actions, cap + 1), dtype=np.int64)
    count = np.zeros((n_actions, cap + 1), dtype=np.int64)
    rows, cols = np.nonzero(total)
    np.add.at(numer, (cols, total[rows, cols]), ahead[rows, cols])
    np.add.at(count, (cols, total[rows, cols]), 1)
    return numer, count


def estimate(window, config: EstimatorConfig) -> np.ndarray:
    """Estimate the utility vector behind the last ``window_m`` rankings."""
    rankings = _as_window(window)[-int(config.window_m):]
    return estimate_actions(rankings, config.n_actions, config.tau)


def estimate_actions(window, n_actions: int, tau: float) -> np.ndarray:
    """Estimate from every ranking in ``window``."""
    rankings = _as_window(window)
    if not rankings:
        raise ValueError("window must hold at least one ranking")
    if any(r.size and (r.min() < 0 or r.max() >= n_actions) for r in rankings):
        raise ValueError("ranking refers to an action outside the action set")
    return _estimate(rankings, n_actions, tau)


def _estimate(rankings, n_actions, tau):
    ks = {r.size for r in rankings}
    cap = _denominator_cap(max(ks))
    if len(ks) == 1:
        ahead, total = _kernels.window_tallies(np.stack(rankings), n_actions)
    else:
        pairs = [_kernels.pair_tallies(r, n_actions) for r in rankings]
        ahead = np.stack([p[0] for p in pairs])
        total = np.stack([p[1] for p in pairs])
    numer, count = grouped_tallies(ahead, total, cap)
    denoms = np.arange(cap + 1, dtype=np.float64)
    denoms[0] = 1.0
    return fractions_to_utilities(_reduce(numer, count, denoms), tau)


class SlidingEstimator:
    """Window of the most recent ``window_m`` rankings with running tallies.

    ``push`` is O(A); ``estimate`` is O(A * K^2) and independent of the
    window length.  Results equal :func:`estimate` on the same window
    exactly.
    """

    def __init__(self, n_actions: int, max_k: int, window_m: int, tau: float):
        self.n_actions = n_actions
        self.window_m = int(window_m)
        self.tau = float(tau)
        self.cap = _denominator_cap(max_k)
        self._ahead = np.zeros((self.window_m, n_actions), dtype=np.int64)
        self._total = np.zeros((self.window_m, n_actions), dtype=np.int64)
        self._numer = np.zeros((n_actions, self.cap + 1), dtype=np.int64)
        self._count = np.zeros((n_actions, self.cap + 1), dtype=np.int64)
        self._denoms = np.arange(self.cap + 1, dtype=np.float64)
        self._denoms[0] = 1.0
        self.size = 0
        self._head = 0

    def push(self, ranking):
        ahead, total = _kernels.pair_tallies(np.asarray(ranking, dtype=np.int64), self.n_actions)
        if total.max() > self.cap:
            raise ValueError("ranking longer than the configured proposal size")
        evict = self.size == self.window_m
        _kernels.window_push(self._numer, self._count, self._ahead, self._total,
                             self._head, evict, ahead, total)
        if not evict:
            self.size += 1
        self._head = (self._head + 1) % self.window_m

    def fractions(self) -> np.ndarray:
        return _reduce(self._numer, self._count, self._denoms)

    def estimate(self) -> np.ndarray:
        if self.size == 0:
            raise ValueError("window is empty")
        return fractions_to_utilities(self.fractions(), self.tau)


def estimation_error_bound(inputs: EstimationBoundInputs) -> ErrorBound:
    """High-probability sup-norm error of :func:`estimate`.

    Returns ``ErrorBound(None, False)`` when the window is too short for the
    guarantee (``m' p^4 < 2 log(2/delta)``).
    """
    i = inputs
    if i.m_prime * i.p**4 < 2.0 * log(2.0 / i.delta):
        return ErrorBound(None, False)
    try:
        scale = i.tau * (exp(1.0 / i.tau) + 1.0) ** 2 / i.p
    except OverflowError:
        scale = float("inf")
    value = scale * sqrt(log(4.0 * i.n_actions / i.delta) / i.m_prime) + i.window_variation
    return ErrorBound(value, True)
