"""Regret and variation accounting."""

from math import ceil

import numpy as np

from rankfeed.environments import variation  # noqa: F401  (re-exported)


def _as_2d(x):
    return np.asarray(x, dtype=np.float64)


def proposal_means(utilities, proposals) -> np.ndarray:
    """Per-step average utility of the proposed multiset."""
    u = _as_2d(utilities)
    if len(proposals) != u.shape[0]:
        raise ValueError("utilities and proposals differ in length")
    if isinstance(proposals, np.ndarray) and proposals.ndim == 2:
        return np.take_along_axis(u, proposals.astype(np.int64), axis=1).mean(axis=1)
    return np.array([u[t, np.asarray(o)].mean() for t, o in enumerate(proposals)])


def external_regret(utilities, strategies) -> float:
    u, pi = _as_2d(utilities), _as_2d(strategies)
    if u.shape != pi.shape:
        raise ValueError("utilities and strategies differ in shape")
    if u.shape[0] == 0:
        return 0.0
    return float(u.sum(axis=0).max() - np.einsum("ta,ta->", u, pi))


def bandit_regret(utilities, proposals) -> float:
    u = _as_2d(utilities)
    if u.shape[0] == 0:
        return 0.0
    return float(u.sum(axis=0).max() - proposal_means(u, proposals).sum())


def cumulative_regret(utilities, earned) -> np.ndarray:
    """Prefix regrets: running best action's total minus the running total
    actually earned (``earned`` is the per-step utility of the learner)."""
    best = np.cumsum(_as_2d(utilities), axis=0).max(axis=1)
    return best - np.cumsum(np.asarray(earned, dtype=np.float64))


def expected_earnings(utilities, strategies) -> np.ndarray:
    return np.einsum("ta,ta->t", _as_2d(utilities), _as_2d(strategies))


def checkpoint_schedule(T: int) -> np.ndarray:
    """Geometric points ceil(T / 2^k) together with every 1% of T."""
    if T < 1:
        return np.zeros(0, dtype=np.int64)
    pts = set()
    k = 0
    while True:
        c = ceil(T / 2**k)
        pts.add(c)
        if c == 1:
            break
        k += 1
    pts.update(ceil(j * T / 100) for j in range(1, 101))
    return np.array(sorted(p for p in pts if p >= 1), dtype=np.int64)


def hindsight_gap(utilities, estimates, strategies) -> tuple[float, float]:
    """(|R(u) - R(u_est)|, sum_t ||u - u_est||_inf * max_pihat ||pihat - pi_t||_1).

    The first never exceeds the second; the second never exceeds twice the
    summed sup-norm error.
    """
    u, e, pi = _as_2d(utilities), _as_2d(estimates), _as_2d(strategies)
    lhs = abs(external_regret(u, pi) - external_regret(e, pi))
    # max over the simplex of ||pihat - pi||_1 is attained at the vertex
    # on pi's smallest entry: 2 - 2 * min(pi)
    far = 2.0 - 2.0 * pi.min(axis=1)
    rhs = float((np.abs(u - e).max(axis=1) * far).sum())
    return lhs, rhs


def sup_error_sum(utilities, estimates) -> float:
    return float(np.abs(_as_2d(utilities) - _as_2d(estimates)).max(axis=1).sum())
