"""Full-information no-regret oracles with numeric feedback.

An oracle maps the history of utility vectors to the next mixed strategy.
States are immutable; ``oracle_feed`` returns a new state.
"""

from dataclasses import dataclass, field, replace
from math import sqrt

import numpy as np

from rankfeed import _kernels

KINDS = ("ftrl_entropy", "ftrl_l2", "hedge", "pgd")
# FTRL-type oracles depend on the history only through its sum.
CUMULATIVE_KINDS = ("ftrl_entropy", "ftrl_l2", "hedge")


@dataclass(frozen=True)
class OracleConfig:
    kind: str = "hedge"
    lam: float = 0.01
    c0: float = 1.0
    declared_L: float | None = None
    declared_eta: float | None = None
    stability_exponents: tuple[float, float] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown oracle kind {self.kind!r}; expected one of {KINDS}")
        if not self.lam > 0 or not self.c0 > 0:
            raise ValueError("lam and c0 must be positive")
        for v in (self.declared_L, self.declared_eta):
            if v is not None and not v > 0:
                raise ValueError("declared stability constants must be positive")

    @property
    def L(self) -> float:
        """Lipschitz constant of the strategy in the cumulative utility."""
        return self.declared_L if self.declared_L is not None else self.lam / self.c0

    def eta(self, n_actions: int) -> float:
        """Bound on the per-step strategy drift for utilities in [-1, 1]."""
        if self.declared_eta is not None:
            return self.declared_eta
        return self.lam * sqrt(n_actions) / self.c0


@dataclass(frozen=True)
class OracleState:
    cumulative: np.ndarray
    steps: int = 0
    iterate: np.ndarray | None = field(default=None)


def oracle_init(n_actions: int, config: OracleConfig) -> OracleState:
    iterate = np.full(n_actions, 1.0 / n_actions) if config.kind == "pgd" else None
    return OracleState(np.zeros(n_actions), 0, iterate)


def softmax(x) -> np.ndarray:
    z = np.exp(x - np.max(x))
    return z / z.sum()


def project_simplex(y) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based)."""
    return _kernels.project_simplex(np.asarray(y, dtype=np.float64))


def ftrl_strategy(cumulative, config: OracleConfig) -> np.ndarray:
    scaled = config.lam * np.asarray(cumulative, dtype=np.float64)
    if config.kind == "ftrl_l2":
        return project_simplex(scaled)
    return softmax(scaled)


def oracle_next(state: OracleState, config: OracleConfig) -> np.ndarray:
    if config.kind == "pgd":
        return state.iterate.copy()
    return ftrl_strategy(state.cumulative, config)


def oracle_feed(state: OracleState, u, config: OracleConfig) -> OracleState:
    u = np.asarray(u, dtype=np.float64)
    if not np.all(np.isfinite(u)):
        raise ValueError("utility must be finite")
    iterate = state.iterate
    if config.kind == "pgd":
        iterate = project_simplex(iterate + config.lam * u)
    return OracleState(state.cumulative + u, state.steps + 1, iterate)


def oracle_with_cumulative(state: OracleState, cumulative, steps: int) -> OracleState:
    """State whose history is any sequence summing to ``cumulative``."""
    return replace(state, cumulative=np.asarray(cumulative, dtype=np.float64), steps=steps)


def oracle_strategies(utilities, config: OracleConfig) -> np.ndarray:
    """Strategies played against ``utilities``: row t uses rows < t only."""
    u = np.asarray(utilities, dtype=np.float64)
    T, n = u.shape
    out = np.empty((T, n))
    if config.kind in CUMULATIVE_KINDS:
        prefix = np.vstack([np.zeros(n), np.cumsum(u, axis=0)[:-1]]) if T else u
        for t in range(T):
            out[t] = ftrl_strategy(prefix[t], config)
        return out
    state = oracle_init(n, config)
    for t in range(T):
        out[t] = oracle_next(state, config)
        state = oracle_feed(state, u[t], config)
    return out


def oracle_regret(utilities, config: OracleConfig) -> float:
    """External regret of the oracle run on ``utilities`` (best vertex)."""
    u = np.asarray(utilities, dtype=np.float64)
    if u.shape[0] == 0:
        return 0.0
    pi = oracle_strategies(u, config)
    return float(u.sum(axis=0).max() - np.einsum("ta,ta->", u, pi))
