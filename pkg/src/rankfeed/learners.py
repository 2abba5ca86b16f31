"""Ranking-feedback learners wrapping a numeric no-regret oracle.

``inst_*`` modes learn from rankings of the instantaneous utility and feed
per-step estimates to the oracle.  ``avg_*`` modes learn from rankings of a
time average and hand the oracle a synthetic history whose sum is ``t``
times the estimated average.  ``*_bandit`` modes propose ``K`` i.i.d. draws
from a strategy mixed with a uniform exploration floor ``gamma / A``.
"""

from dataclasses import dataclass, field
from math import log

import numpy as np

from rankfeed.estimation import SlidingEstimator
from rankfeed.oracles import (
    CUMULATIVE_KINDS,
    OracleConfig,
    oracle_feed,
    oracle_init,
    oracle_next,
    oracle_with_cumulative,
)

FEEDBACKS = ("inst_full", "inst_bandit", "avg_full", "avg_bandit")


@dataclass(frozen=True)
class LearnerConfig:
    feedback: str
    n_actions: int
    tau: float
    window_m: int
    oracle: OracleConfig = field(default_factory=OracleConfig)
    K: int | None = None
    gamma: float = 0.0
    block_M: int | None = None

    def __post_init__(self):
        if self.feedback not in FEEDBACKS:
            raise ValueError(f"unknown feedback {self.feedback!r}; expected one of {FEEDBACKS}")
        if self.n_actions < 2:
            raise ValueError("need at least two actions")
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if int(self.window_m) < 1:
            raise ValueError("window_m must be at least 1")
        if self.feedback.endswith("_full"):
            if self.K not in (None, self.n_actions) or self.gamma != 0:
                raise ValueError("full-information modes propose every action once and use gamma = 0")
            object.__setattr__(self, "K", self.n_actions)
        elif self.K is None or self.K < 1:
            raise ValueError("bandit modes need a proposal size K >= 1")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if self.feedback.startswith("avg") and self.oracle.kind not in CUMULATIVE_KINDS:
            raise ValueError("time-average modes need a cumulative-sum (FTRL-type) oracle")
        if self.feedback == "avg_bandit":
            if self.block_M is None or self.block_M < 2 * self.window_m:
                raise ValueError("avg_bandit needs block_M >= 2 * window_m")

    @property
    def bandit(self) -> bool:
        return self.feedback.endswith("_bandit")

    @property
    def basis(self) -> str:
        if self.feedback.startswith("inst"):
            return "instantaneous"
        return "time_average" if self.feedback == "avg_full" else "empirical_mean"


def block_term(emp_now, n_now, emp_prev, n_prev):
    """Estimated mean utility over one block from two empirical-mean
    snapshots; actions never proposed in the block keep ``emp_now``."""
    emp_now = np.asarray(emp_now, dtype=np.float64)
    n_now = np.asarray(n_now, dtype=np.float64)
    dn = n_now - np.asarray(n_prev, dtype=np.float64)
    out = emp_now.copy()
    ok = dn > 0
    out[ok] = (emp_now[ok] * n_now[ok] - np.asarray(emp_prev)[ok] * np.asarray(n_prev)[ok]) / dn[ok]
    return out


class RankingLearner:
    def __init__(self, config: LearnerConfig):
        self.config = config
        A = config.n_actions
        self.uniform = np.full(A, 1.0 / A)
        self.strategy = self.uniform.copy()
        self.oracle_strategy = self.uniform.copy()
        self.oracle_state = oracle_init(A, config.oracle)
        self.window = SlidingEstimator(A, config.K, config.window_m, config.tau)
        self.counts = np.zeros(A, dtype=np.int64)
        self.t = 0
        self.estimate = np.zeros(A)
        self.last_proposal = None
        # avg_bandit block state
        self.block_terms = []
        self._block_sum = np.zeros(A)
        self._prev_emp = np.zeros(A)
        self._prev_counts = np.zeros(A, dtype=np.int64)

    def propose(self, rng) -> np.ndarray:
        cfg = self.config
        if not cfg.bandit:
            proposal = np.arange(cfg.n_actions)
        else:
            cdf = np.cumsum(self.strategy)
            idx = np.searchsorted(cdf, rng.random(cfg.K) * cdf[-1], side="right")
            proposal = np.minimum(idx, cfg.n_actions - 1).astype(np.int64)
        self.last_proposal = proposal
        return proposal

    def empirical_estimate(self) -> np.ndarray:
        """Estimate of the ranking basis from the current window."""
        return self.window.estimate()

    def update(self, ranking):
        cfg = self.config
        ranking = np.asarray(ranking, dtype=np.int64)
        if self.last_proposal is not None and not np.array_equal(
            np.sort(ranking), np.sort(self.last_proposal)
        ):
            raise ValueError("ranking is not a permutation of the last proposal")
        self.t += 1
        t = self.t
        self.counts += np.bincount(ranking, minlength=cfg.n_actions)
        self.window.push(ranking)

        if cfg.feedback.startswith("inst"):
            self.estimate = self.window.estimate()
            self.oracle_state = oracle_feed(self.oracle_state, self.estimate, cfg.oracle)
        else:
            if cfg.feedback == "avg_full":
                self.estimate = self.window.estimate()
            else:
                self._advance_blocks(t)
            self.oracle_state = oracle_with_cumulative(self.oracle_state, t * self.estimate, t)
        self.oracle_strategy = oracle_next(self.oracle_state, cfg.oracle)
        if cfg.gamma:
            self.strategy = (1.0 - cfg.gamma) * self.oracle_strategy + cfg.gamma * self.uniform
        else:
            self.strategy = self.oracle_strategy
        return self

    def _advance_blocks(self, t):
        M = self.config.block_M
        if t % M:
            return
        emp = self.empirical_estimate()
        term = block_term(emp, self.counts, self._prev_emp, self._prev_counts)
        self.block_terms.append(term)
        self._block_sum = self._block_sum + term
        self._prev_emp, self._prev_counts = emp, self.counts.copy()
        self.estimate = self._block_sum / len(self.block_terms)


def learner_propose(learner: RankingLearner, rng) -> np.ndarray:
    return learner.propose(rng)


def learner_update(learner: RankingLearner, ranking) -> RankingLearner:
    return learner.update(ranking)


@dataclass
class Trace:
    config: LearnerConfig
    seed: int
    utilities: np.ndarray
    proposals: np.ndarray
    rankings: np.ndarray
    strategies: np.ndarray
    oracle_strategies: np.ndarray
    estimates: np.ndarray
    realized: np.ndarray
    ranking_basis: np.ndarray

    def __len__(self):
        return self.utilities.shape[0]

    @property
    def expected(self) -> np.ndarray:
        return np.einsum("ta,ta->t", self.utilities, self.strategies)


def run_learner(env, config: LearnerConfig, T: int, seed, learner=None) -> Trace:
    """Play ``T`` rounds of ``learner`` (fresh by default) against ``env``."""
    if abs(env.params.tau - config.tau) > 0:
        raise ValueError(f"learner tau {config.tau} differs from environment tau {env.params.tau}")
    if env.n_actions != config.n_actions:
        raise ValueError("learner and environment disagree on the number of actions")
    if env.basis != config.basis:
        raise ValueError(f"{config.feedback} expects a {config.basis} environment, got {env.basis}")
    if env.horizon - env.t < T:
        raise ValueError("environment horizon shorter than T")
    learner = learner or RankingLearner(config)
    rng = np.random.default_rng(seed)
    A, K = config.n_actions, config.K
    proposals = np.empty((T, K), dtype=np.int64)
    rankings = np.empty((T, K), dtype=np.int64)
    strategies = np.empty((T, A))
    oracle_strats = np.empty((T, A))
    estimates = np.empty((T, A))
    basis = np.empty((T, A))
    realized = np.empty(T)
    utilities = np.asarray(env.sequence.values[env.t : env.t + T])
    for t in range(T):
        strategies[t] = learner.strategy
        oracle_strats[t] = learner.oracle_strategy
        proposal = learner.propose(rng)
        ranking, realized[t] = env.step(proposal, rng)
        basis[t] = env.last_basis
        learner.update(ranking)
        proposals[t], rankings[t], estimates[t] = proposal, ranking, learner.estimate
    return Trace(config, seed, utilities, proposals, rankings, strategies, oracle_strats,
                 estimates, realized, basis)


def default_lambda(T: int, exponent: float = 0.5) -> float:
    return float(max(T, 1)) ** (-exponent)


def theorem_defaults(feedback, T, n_actions, K=None, variation_budget=None, delta=0.05, L=None):
    """Window, exploration and block sizes at their theory-prescribed scalings.

    ``variation_budget`` is the known bound on the path length P^(T); it is
    required by every mode except ``avg_full``.  Sizes are capped at the
    horizon (``avg_bandit``: block at T, window at half the block).
    """
    A, T = n_actions, max(int(T), 1)
    out = {"gamma": 0.0, "block_M": None}
    if feedback != "avg_full":
        if variation_budget is None:
            raise ValueError(f"{feedback} defaults need the variation budget")
        P = max(float(variation_budget), 1e-12)
    if feedback == "inst_full":
        m = (T / P) ** (2 / 3) * log(4 * A * T / delta) ** (1 / 3)
    elif feedback == "inst_bandit":
        out["gamma"] = min((P / T) ** 0.2, 1.0)
        m = 32 * A**4 / K**4 * (T / P) ** 0.8 * log(8 * A * T / delta)
    elif feedback == "avg_full":
        m = 2 * T ** (2 / 3) * log(4 * A * T / delta)
    elif feedback == "avg_bandit":
        if L is None:
            L = default_lambda(T)
        m = 2 * T ** (2 / 3) * A**4 * log(12 * A * T / delta)
        out["gamma"] = min(L ** (1 / 3) * T ** (5 / 18) * P ** (1 / 6), 1.0)
        M = max(4 * T ** (5 / 6) * P ** (-0.5) * A**4 * log(12 * A**2 * T / delta), 2 * m)
        M = int(min(M, T))
        out["block_M"] = max(M, 2)
        m = min(m, out["block_M"] // 2)
    else:
        raise ValueError(f"unknown feedback {feedback!r}")
    out["window_m"] = int(max(1, min(round(m), T)))
    return out
