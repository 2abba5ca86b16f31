"""Utility-sequence generators and the ranking-feedback environment."""

import csv
from dataclasses import dataclass, field
from math import ceil, log2

import numpy as np

from rankfeed import _kernels
from rankfeed.ranking_model import RankingParams, sigmoid

BASES = ("instantaneous", "time_average", "empirical_mean")


@dataclass
class UtilitySequence:
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValueError("a utility sequence is a (T, A) array")

    def __len__(self):
        return self.values.shape[0]

    def __getitem__(self, t):
        return self.values[t]

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    @property
    def n_actions(self) -> int:
        return self.values.shape[1]


def variation(utilities, ord=2) -> float:
    """Path length: sum over t of ||u^(t) - u^(t-1)||."""
    u = np.asarray(utilities, dtype=np.float64)
    if u.shape[0] < 2:
        return 0.0
    return float(np.linalg.norm(np.diff(u, axis=0), ord=ord, axis=1).sum())


# --- ranking bases ---------------------------------------------------------


class InstantBasis:
    def __init__(self, n_actions):
        self.n_actions = n_actions

    def observe(self, u, proposal):
        return np.asarray(u, dtype=np.float64)


class TimeAverageBasis:
    """Running mean of the utilities with Kahan-compensated sums."""

    def __init__(self, n_actions):
        self.n_actions = n_actions
        self.t = 0
        self._sum = np.zeros(n_actions)
        self._comp = np.zeros(n_actions)

    def observe(self, u, proposal):
        y = np.asarray(u, dtype=np.float64) - self._comp
        s = self._sum + y
        self._comp = (s - self._sum) - y
        self._sum = s
        self.t += 1
        return self._sum / self.t

    @property
    def value(self):
        return self._sum / self.t if self.t else np.zeros(self.n_actions)


class EmpiricalMeanBasis:
    """Per-action mean utility over the steps it was proposed, weighted by
    its multiplicity in each proposal; zero for never-proposed actions."""

    def __init__(self, n_actions):
        self.n_actions = n_actions
        self.sums = np.zeros(n_actions)
        self.counts = np.zeros(n_actions, dtype=np.int64)

    def observe(self, u, proposal):
        c = np.bincount(np.asarray(proposal, dtype=np.int64), minlength=self.n_actions)
        self.sums += np.asarray(u, dtype=np.float64) * c
        self.counts += c
        return self.value

    @property
    def value(self):
        out = np.zeros(self.n_actions)
        seen = self.counts > 0
        out[seen] = self.sums[seen] / self.counts[seen]
        return out


def make_basis(kind: str, n_actions: int):
    try:
        cls = {
            "instantaneous": InstantBasis,
            "time_average": TimeAverageBasis,
            "empirical_mean": EmpiricalMeanBasis,
        }[kind]
    except KeyError:
        raise ValueError(f"unknown ranking basis {kind!r}; expected one of {BASES}") from None
    return cls(n_actions)


class RankingEnvironment:
    """Serves PL rankings of proposals against a fixed utility sequence."""

    def __init__(self, sequence, params: RankingParams, basis: str = "instantaneous"):
        self.sequence = sequence if isinstance(sequence, UtilitySequence) else UtilitySequence(sequence)
        self.params = params
        self.basis = basis
        self.tracker = make_basis(basis, self.sequence.n_actions)
        self.t = 0
        self.last_basis = None

    @property
    def horizon(self) -> int:
        return len(self.sequence)

    @property
    def n_actions(self) -> int:
        return self.sequence.n_actions

    def step(self, proposal, rng):
        if self.t >= self.horizon:
            raise IndexError("environment horizon exhausted")
        proposal = np.asarray(proposal, dtype=np.int64)
        if proposal.size == 0 or proposal.min() < 0 or proposal.max() >= self.n_actions:
            raise ValueError("proposal refers to actions outside the action set")
        u = self.sequence.values[self.t]
        r = self.tracker.observe(u, proposal)
        self.last_basis = r
        scores = r[proposal] / self.params.tau
        ranking = proposal[_kernels.sample_order(scores, rng.random(proposal.size))]
        self.t += 1
        return ranking, float(u[proposal].mean())


def env_step(env: RankingEnvironment, proposal, rng):
    return env.step(proposal, rng)


# --- generators ------------------------------------------------------------


def _initial_vector(rng, n_actions):
    u = np.zeros(n_actions)
    u[:-1] = rng.uniform(-1.0, 1.0, n_actions - 1)
    return u


def _step_length(u, direction, alpha):
    return float(np.linalg.norm(np.clip(u + alpha * direction, -1.0, 1.0) - u))


def _match_step(u, direction, target, tol=1e-6, iters=60):
    """Largest-found alpha with ||clip(u + alpha n) - u|| <= target."""
    # unit direction: without clipping the step length is alpha itself
    if np.all(np.abs(u + target * direction) <= 1.0):
        return target
    hi = 1.0
    for _ in range(iters):
        if _step_length(u, direction, hi) >= target:
            break
        hi *= 2.0
    lo = 0.0
    if _step_length(u, direction, hi) <= target:
        return hi
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if _step_length(u, direction, mid) <= target:
            lo = mid
        else:
            hi = mid
        if target - _step_length(u, direction, lo) <= tol * 1e-3:
            break
    return lo


def gen_bounded_variation(T, q, seed, n_actions, scale=1.0) -> UtilitySequence:
    """Random walk in [-1, 1]^A (reference pinned to 0) with total L2 path
    length ``scale * T**q`` spread uniformly at random over the steps."""
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    budget = scale * float(T) ** q
    out = np.empty((T, n_actions))
    if T == 0:
        return UtilitySequence(out, {"budget": budget, "realized_variation": 0.0})
    out[0] = _initial_vector(rng, n_actions)
    shares = rng.dirichlet(np.ones(T - 1)) * budget if T > 1 else np.zeros(0)
    unclipped = np.zeros(T, dtype=bool)
    for t in range(1, T):
        prev = out[t - 1]
        d = np.zeros(n_actions)
        d[:-1] = rng.standard_normal(n_actions - 1)
        d /= np.linalg.norm(d)
        alpha = _match_step(prev, d, shares[t - 1])
        nxt = np.clip(prev + alpha * d, -1.0, 1.0)
        nxt[-1] = 0.0
        unclipped[t] = bool(np.all(np.abs(prev + alpha * d) <= 1.0))
        out[t] = nxt
    meta = {
        "budget": budget,
        "q": q,
        "seed": seed,
        "shares": np.concatenate([[0.0], shares]),
        "unclipped": unclipped,
        "realized_variation": variation(out),
    }
    return UtilitySequence(out, meta)


def draw_shifts(rng, kind, sigma, size):
    """Zero-mean random shifts; gamma draws are centred by their mean 1."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    if kind == "uniform":
        return rng.uniform(-sigma, sigma, size)
    if kind == "gaussian":
        return rng.normal(0.0, sigma, size)
    if kind == "gamma":
        return rng.gamma(1.0 / sigma**2, sigma**2, size) - 1.0
    raise ValueError(f"unknown noise kind {kind!r}")


def gen_noise_shift(T, base_seed, kind, sigma, n_actions) -> UtilitySequence:
    """A fixed random base vector plus i.i.d. per-step shifts, clipped."""
    rng = np.random.default_rng(base_seed)
    base = _initial_vector(rng, n_actions)
    shifts = np.zeros((T, n_actions))
    shifts[:, :-1] = draw_shifts(rng, kind, sigma, (T, n_actions - 1))
    out = np.clip(base + shifts, -1.0, 1.0)
    out[:, -1] = 0.0
    return UtilitySequence(out, {"base": base, "kind": kind, "sigma": sigma, "seed": base_seed})


def gen_stationary(T, u) -> UtilitySequence:
    u = np.asarray(u, dtype=np.float64)
    return UtilitySequence(np.tile(u, (T, 1)), {"stationary": True})


THEOREM1_TAU = 0.1


def theorem1_mixture():
    """(low, high, p_low) for both instances of the two-action construction."""
    s = sigmoid
    p2 = (4 * s(-5.0) / 13 + 9 * s(1.5) / 13 - s(1.0)) / (s(-0.2) - s(1.0))
    return {1: (-0.5, 0.15, 4 / 13), 2: (-0.02, 0.1, p2)}


def gen_theorem1_instance(which, T, seed) -> UtilitySequence:
    """Two i.i.d. two-action instances whose rankings at tau=0.1 share one
    distribution although the better action differs."""
    low, high, p_low = theorem1_mixture()[which]
    rng = np.random.default_rng(seed)
    first = np.where(rng.random(T) < p_low, low, high)
    out = np.column_stack([first, np.zeros(T)])
    return UtilitySequence(out, {"instance": which, "tau": THEOREM1_TAU, "p_low": p_low})


def gen_theorem2_sequences(T):
    """Doubling sequences for the action-a and mirrored action-b blocks.

    Returns a dict with the common first vector, ``K`` (smallest with
    ``2**K >= T``) and both lists of ``K + 1`` sequences.  The learner-
    dependent choice among them is made by :func:`select_theorem2_sequence`.
    """
    K = max(0, ceil(log2(T))) if T > 1 else 0
    a_first, b_first, end = (1.0, 0.0), (0.0, 1.0), (0.0, 0.0)
    action_a = []
    for k in range(K):
        action_a.append(np.array([a_first] * (2**k - 1) + [b_first] * 2**k + [end]))
    action_a.append(np.array([a_first] * (2**K - 1) + [end]))
    action_b = [np.where(np.arange(len(s))[:, None] < len(s) - 1, s[:, ::-1], s) for s in action_a]
    return {"initial": np.array([0.5, 0.0]), "K": K, "action_a": action_a, "action_b": action_b}


def select_theorem2_sequence(average_utilities, K):
    """Index of the first sequence whose learner average utility is below
    ``0.5 - 1/(2(K+1))``, or None."""
    threshold = 0.5 - 1.0 / (2 * (K + 1))
    for i, v in enumerate(average_utilities):
        if v < threshold:
            return i
    return None


def gen_theorem3_instance(which, T) -> UtilitySequence:
    phases = [np.tile((0.1, 0.0), (T, 1)), np.tile((0.0, 0.2), (T, 1))]
    last = (0.0, 1.0) if which == 1 else (0.4, 0.2)
    phases.append(np.tile(last, (2 * T, 1)))
    return UtilitySequence(np.vstack(phases), {"instance": which, "phase_ends": [T, 2 * T]})


# --- columnar text files ---------------------------------------------------


def write_sequence_csv(path, utilities):
    u = np.asarray(utilities, dtype=np.float64)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t"] + [f"u_{a}" for a in range(u.shape[1])])
        for t, row in enumerate(u, start=1):
            w.writerow([t] + [format(x, ".17g") for x in row])


def read_sequence_csv(path) -> UtilitySequence:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    if not header or header[0] != "t" or any(h != f"u_{i}" for i, h in enumerate(header[1:])):
        raise ValueError(f"{path}: expected header t,u_0,...,u_(A-1)")
    values = np.array([[float(x) for x in r[1:]] for r in body], dtype=np.float64)
    if body and values.shape[1] != len(header) - 1:
        raise ValueError(f"{path}: ragged rows")
    return UtilitySequence(values.reshape(len(body), len(header) - 1), {"source": str(path)})
