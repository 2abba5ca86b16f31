"""Normal-form games played by ranking-feedback learners."""

import json
from dataclasses import dataclass, field
from math import prod

import numpy as np

from rankfeed import _kernels
from rankfeed.environments import make_basis
from rankfeed.learners import RankingLearner
from rankfeed.metrics import checkpoint_schedule

DENSE_LIMIT = 10**6


@dataclass
class NormalFormGame:
    utilities: list  # per player, tensor of shape action_sizes
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.utilities = [np.asarray(u, dtype=np.float64) for u in self.utilities]
        shape = self.utilities[0].shape
        if len(shape) != len(self.utilities):
            raise ValueError("one utility tensor per player, each with one axis per player")
        for u in self.utilities:
            if u.shape != shape:
                raise ValueError("utility tensors disagree in shape")
            if np.any(np.abs(u) > 1.0) or not np.all(np.isfinite(u)):
                raise ValueError("utilities must lie in [-1, 1]")

    @property
    def N(self) -> int:
        return len(self.utilities)

    @property
    def action_sizes(self) -> tuple:
        return self.utilities[0].shape


def random_game(action_sizes, seed) -> NormalFormGame:
    rng = np.random.default_rng(seed)
    us = [rng.uniform(-1.0, 1.0, tuple(action_sizes)) for _ in action_sizes]
    return NormalFormGame(us, {"generator": "uniform", "seed": seed})


def matching_pennies() -> NormalFormGame:
    u0 = np.array([[1.0, -1.0], [-1.0, 1.0]])
    return NormalFormGame([u0, -u0], {"name": "matching_pennies"})


def _contract_others(tensor, i, profile):
    """Contract every axis except ``i`` against the matching strategy."""
    out = np.moveaxis(tensor, i, 0)
    for j in reversed(range(len(profile))):
        if j == i:
            continue
        out = out @ np.asarray(profile[j], dtype=np.float64)
    return out


def expected_utility_vector(game: NormalFormGame, i: int, profile) -> np.ndarray:
    return _contract_others(game.utilities[i], i, profile)


def bandit_game_feedback(game: NormalFormGame, i: int, opponent_proposals) -> np.ndarray:
    """Empirical mean of player ``i``'s utility slice over the opponents'
    joint actions formed by zipping their proposals slot by slot.

    ``opponent_proposals`` is indexed by player; entry ``i`` is ignored.
    """
    idx = [np.asarray(o, dtype=np.int64) for j, o in enumerate(opponent_proposals) if j != i]
    if not idx or any(o.size == 0 for o in idx):
        raise ValueError("opponent proposals must be nonempty")
    if len({o.size for o in idx}) != 1:
        raise ValueError("opponent proposals must share one length")
    slices = np.moveaxis(game.utilities[i], i, 0)[(slice(None), *idx)]
    return slices.mean(axis=1)


class JointStrategy:
    """Running average of product strategies as a dense joint tensor."""

    def __init__(self, action_sizes):
        if prod(action_sizes) > DENSE_LIMIT:
            raise ValueError("joint action space too large for a dense tensor")
        self.total = np.zeros(tuple(action_sizes))
        self.steps = 0

    def add(self, profile):
        joint = np.asarray(profile[0], dtype=np.float64)
        for p in profile[1:]:
            joint = np.multiply.outer(joint, np.asarray(p, dtype=np.float64))
        self.total += joint
        self.steps += 1

    @property
    def distribution(self) -> np.ndarray:
        if self.steps == 0:
            raise ValueError("no strategies accumulated")
        return self.total / self.steps


def deviation_gaps(game: NormalFormGame, joint) -> np.ndarray:
    """Per player: best pure-deviation gain against ``joint``."""
    pi = joint.distribution if isinstance(joint, JointStrategy) else np.asarray(joint, dtype=np.float64)
    gaps = np.empty(game.N)
    for i, U in enumerate(game.utilities):
        others = np.sum(pi, axis=i, keepdims=True)  # marginal over a_{-i}
        dev = np.moveaxis(U * others, i, 0).reshape(U.shape[i], -1).sum(axis=1)
        gaps[i] = dev.max() - float(np.sum(U * pi))
    return gaps


def cce_exploitability(game: NormalFormGame, joint) -> float:
    """Smallest eps >= 0 for which ``joint`` is an eps-CCE."""
    return max(0.0, float(deviation_gaps(game, joint).max()))


# --- game files ------------------------------------------------------------


def write_game(path, game: NormalFormGame):
    doc = {
        "N": game.N,
        "action_sizes": list(game.action_sizes),
        "utilities": [[float(x) for x in u.ravel()] for u in game.utilities],
        "meta": {k: v for k, v in game.meta.items() if isinstance(v, (int, float, str))},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def read_game(path) -> NormalFormGame:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        sizes = tuple(int(a) for a in doc["action_sizes"])
        if int(doc["N"]) != len(sizes) or len(doc["utilities"]) != len(sizes):
            raise ValueError(f"{path}: N disagrees with action_sizes or utilities")
        us = [np.array(u, dtype=np.float64).reshape(sizes) for u in doc["utilities"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: malformed game file ({exc})") from None
    return NormalFormGame(us, dict(doc.get("meta", {})))


# --- repeated play -----------------------------------------------------------


@dataclass
class GameTrace:
    checkpoints: np.ndarray
    exploitability: np.ndarray  # at checkpoints
    regrets: np.ndarray  # (n_checkpoints, N) cumulative external regret
    strategies: list  # per player (T, A_i)
    utilities: list  # per player (T, A_i) realized expected utilities
    utility_variation: np.ndarray
    strategy_variation: float
    joint: JointStrategy | None = None
    meta: dict = field(default_factory=dict)

    @property
    def final_regrets(self) -> np.ndarray:
        return self.regrets[-1] if len(self.regrets) else np.zeros(len(self.strategies))

    def variation_bound_holds(self, sizes) -> bool:
        lhs = self.utility_variation
        rhs = np.sqrt(np.asarray(sizes, dtype=np.float64)) * prod(sizes) * self.strategy_variation
        return bool(np.all(lhs <= rhs + 1e-9))


def _game_basis_kind(feedback):
    return {"inst_full": "instantaneous", "inst_bandit": "instantaneous",
            "avg_full": "time_average", "avg_bandit": "empirical_mean"}[feedback]


def run_game(game: NormalFormGame, configs, T: int, seed, dense_joint=None) -> GameTrace:
    """Repeated play with one learner per player.

    Regret is measured against each player's expected-utility vectors.
    Exploitability of the running average joint strategy is recorded at the
    checkpoint schedule; for two players it comes from per-player cumulative
    statistics (no joint tensor), otherwise from a dense joint tensor.
    """
    configs = list(configs)
    if len(configs) != game.N:
        raise ValueError("one learner config per player")
    if len({c.feedback for c in configs}) != 1:
        raise ValueError("all players must share the feedback mode")
    if len({c.tau for c in configs}) != 1:
        raise ValueError("all players must share tau")
    for i, c in enumerate(configs):
        if c.n_actions != game.action_sizes[i]:
            raise ValueError(f"player {i}: config has {c.n_actions} actions, game has {game.action_sizes[i]}")
    feedback, tau = configs[0].feedback, configs[0].tau
    bandit = feedback.endswith("_bandit")
    if bandit and len({c.K for c in configs}) != 1:
        raise ValueError("bandit game feedback needs a common proposal size")
    if dense_joint is None:
        dense_joint = game.N > 2
    N, sizes = game.N, game.action_sizes
    rng = np.random.default_rng(seed)
    learners = [RankingLearner(c) for c in configs]
    bases = [make_basis(_game_basis_kind(feedback), a) for a in sizes]
    joint = JointStrategy(sizes) if dense_joint else None

    checkpoints = checkpoint_schedule(T)
    is_cp = np.zeros(T + 1, dtype=bool)
    is_cp[checkpoints] = True
    expl = np.empty(len(checkpoints))
    regrets = np.empty((len(checkpoints), N))
    strategies = [np.empty((T, a)) for a in sizes]
    utilities = [np.empty((T, a)) for a in sizes]
    cum_u = [np.zeros(a) for a in sizes]
    cum_val = np.zeros(N)
    u_var = np.zeros(N)
    pi_var = 0.0
    k = 0
    for t in range(T):
        profile = [lr.strategy for lr in learners]
        if t:
            pi_var += sum(float(np.linalg.norm(profile[i] - strategies[i][t - 1])) for i in range(N))
        proposals = [lr.propose(rng) for lr in learners]
        for i in range(N):
            u = expected_utility_vector(game, i, profile)
            strategies[i][t], utilities[i][t] = profile[i], u
            cum_u[i] += u
            cum_val[i] += float(u @ profile[i])
            if t:
                u_var[i] += float(np.linalg.norm(u - utilities[i][t - 1]))
        if joint is not None:
            joint.add(profile)
        for i in range(N):
            seen = bandit_game_feedback(game, i, proposals) if bandit else utilities[i][t]
            r = bases[i].observe(seen, proposals[i])
            prop = proposals[i]
            ranking = prop[_kernels.sample_order(r[prop] / tau, rng.random(prop.size))]
            learners[i].update(ranking)
        if is_cp[t + 1]:
            n = t + 1
            reg = np.array([cum_u[i].max() - cum_val[i] for i in range(N)])
            regrets[k] = reg
            if joint is not None:
                expl[k] = cce_exploitability(game, joint)
            else:
                expl[k] = max(0.0, float(reg.max()) / n)
            k += 1
    return GameTrace(checkpoints, expl, regrets, strategies, utilities, u_var, pi_var, joint,
                     {"seed": seed, "feedback": feedback, "tau": tau, **game.meta})

