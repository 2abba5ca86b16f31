"""Plackett-Luce rankings over multisets of proposed actions.

Actions are integers ``0..n_actions-1``; the last index is the reference
action whose utility is pinned to zero by the environments.  Proposals and
rankings are 1-d integer arrays, a ranking being a rearrangement of its
proposal (best first).
"""

from collections import Counter
from dataclasses import dataclass
from itertools import permutations
from math import factorial

import numpy as np

from rankfeed import _kernels


@dataclass(frozen=True)
class ActionSet:
    size: int

    def __post_init__(self):
        if int(self.size) < 2:
            raise ValueError("an action set needs at least two actions")

    @property
    def reference(self) -> int:
        return self.size - 1


@dataclass(frozen=True)
class RankingParams:
    tau: float = 1.0

    def __post_init__(self):
        _check_tau(self.tau)


def _check_tau(tau):
    if not np.isfinite(tau) or tau <= 0:
        raise ValueError(f"temperature must be positive and finite, got {tau!r}")


def _check_utilities(u):
    u = np.asarray(u, dtype=np.float64)
    if not np.all(np.isfinite(u)):
        raise ValueError("utilities must be finite")
    return u


def sigmoid(x):
    """Numerically stable logistic function."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out if out.ndim else float(out)


def multiplicity_factor(entries) -> int:
    """Number of positional orderings sharing one label sequence."""
    f = 1
    for c in Counter(np.asarray(entries).tolist()).values():
        f *= factorial(c)
    return f


def ranking_probability(perm, u, params: RankingParams) -> float:
    """Probability of observing the label sequence ``perm``.

    The product-of-softmax formula is the probability of one positional
    ordering; equal entries of a multiset are indistinguishable, so it is
    multiplied by ``prod(count!)`` to give a distribution over distinct
    label sequences.
    """
    _check_tau(params.tau)
    u = _check_utilities(u)
    perm = np.asarray(perm, dtype=np.int64)
    s = u[perm] / params.tau
    # log-domain tails: each remaining block is normalized on its own
    tails = np.logaddexp.accumulate(s[::-1])[::-1]
    return float(np.exp(np.sum(s - tails))) * multiplicity_factor(perm)


def ranking_probabilities(perms, utilities, tau: float) -> np.ndarray:
    """Batched ``ranking_probability``: ``perms`` is (P, K) label sequences
    of one multiset, ``utilities`` is (B, A); returns (B, P)."""
    _check_tau(tau)
    perms = np.asarray(perms, dtype=np.int64)
    U = np.atleast_2d(np.asarray(utilities, dtype=np.float64))
    if perms.ndim != 2 or perms.size == 0:
        raise ValueError("perms must be a nonempty (P, K) array")
    s = U[:, perms] / tau  # (B, P, K)
    tails = np.flip(np.logaddexp.accumulate(np.flip(s, -1), axis=-1), -1)
    return np.exp(np.sum(s - tails, axis=-1)) * multiplicity_factor(perms[0])


def distinct_permutations(entries):
    """All distinct label sequences of a multiset (brute force, small sizes)."""
    return sorted(set(permutations(np.asarray(entries).tolist())))


def sample_ranking(u, params: RankingParams, proposal, rng) -> np.ndarray:
    """Draw one ranking of ``proposal`` from the PL model."""
    proposal = np.asarray(proposal, dtype=np.int64)
    if proposal.size == 0:
        raise ValueError("proposal must be nonempty")
    _check_tau(params.tau)
    u = np.asarray(u, dtype=np.float64)
    scores = u[proposal] / params.tau
    order = _kernels.sample_order(scores, rng.random(proposal.size))
    return proposal[order]


def sample_rankings(u, params: RankingParams, proposal, n, rng) -> np.ndarray:
    """Draw ``n`` independent rankings of a fixed proposal, shape (n, K)."""
    proposal = np.asarray(proposal, dtype=np.int64)
    _check_tau(params.tau)
    u = np.asarray(u, dtype=np.float64)
    scores = np.broadcast_to(u[proposal] / params.tau, (n, proposal.size))
    order = _kernels.sample_orders(
        np.ascontiguousarray(scores), rng.random((n, proposal.size))
    )
    return proposal[order]


def pairwise_marginal(u_a: float, u_b: float, tau: float) -> float:
    """Expected fraction of (a, b) pairs with ``a`` ranked ahead of ``b``."""
    _check_tau(tau)
    return sigmoid((u_a - u_b) / tau)


def first_place_marginal(action: int, u, proposal, params: RankingParams) -> float:
    proposal = np.asarray(proposal, dtype=np.int64)
    hits = int(np.sum(proposal == action))
    if hits == 0:
        raise ValueError(f"action {action} is not in the proposal")
    u = _check_utilities(u)
    s = u[proposal] / params.tau
    w = np.exp(s - s.max())
    return float(hits * np.exp(u[action] / params.tau - s.max()) / w.sum())


def pair_counts(perm, j: int, n_actions: int) -> tuple[int, int]:
    """Pairs (occurrence of j, occurrence of the reference) in each order.

    Returns ``(ahead, behind)``: how many pairs have ``j`` ranked before the
    reference action, and how many after.
    """
    ref = n_actions - 1
    if j == ref:
        raise ValueError("j must differ from the reference action")
    ahead, total = _kernels.pair_tallies(np.asarray(perm, dtype=np.int64), n_actions)
    return int(ahead[j]), int(total[j] - ahead[j])
