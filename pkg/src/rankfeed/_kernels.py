"""Hot inner loops, compiled with numba when available.

Each kernel exists twice: a loop form that numba compiles in nopython mode
and a vectorised numpy form.  Set ``RANKFEED_DISABLE_NUMBA=1`` to run the
numpy forms (useful on platforms without numba, and for benchmarking).
Randomness never enters a kernel; callers pass pre-drawn uniforms so both
backends consume a seeded ``numpy.random.Generator`` identically.
"""

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and os.environ.get(
    "RANKFEED_DISABLE_NUMBA", ""
).strip().lower() not in ("1", "true", "yes", "on")

BACKEND = "numba" if USE_NUMBA else "numpy"


def _njit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# --- Plackett-Luce sequential sampling -------------------------------------


def _sample_order_loop(scores, uniforms):
    k = scores.shape[0]
    taken = np.zeros(k, dtype=np.bool_)
    order = np.empty(k, dtype=np.int64)
    weights = np.empty(k, dtype=np.float64)
    for pos in range(k):
        top = -np.inf
        for i in range(k):
            if not taken[i] and scores[i] > top:
                top = scores[i]
        total = 0.0
        last = -1
        for i in range(k):
            if taken[i]:
                weights[i] = 0.0
            else:
                total += np.exp(scores[i] - top)
                weights[i] = total
                last = i
        target = uniforms[pos] * total
        pick = last
        for i in range(k):
            if not taken[i] and weights[i] > target:
                pick = i
                break
        taken[pick] = True
        order[pos] = pick
    return order


def _sample_order_numpy(scores, uniforms):
    k = scores.shape[0]
    remaining = np.arange(k)
    order = np.empty(k, dtype=np.int64)
    for pos in range(k):
        s = scores[remaining]
        cum = np.cumsum(np.exp(s - s.max()))
        idx = int(np.searchsorted(cum, uniforms[pos] * cum[-1], side="right"))
        idx = min(idx, remaining.size - 1)
        order[pos] = remaining[idx]
        remaining = np.delete(remaining, idx)
    return order


def _sample_orders_loop(scores, uniforms):
    n, k = scores.shape
    out = np.empty((n, k), dtype=np.int64)
    for r in range(n):
        out[r] = _sample_order_nb(scores[r], uniforms[r])
    return out


def _sample_orders_numpy(scores, uniforms):
    # Vectorised across rows: one sequential pass over positions.
    n, k = scores.shape
    out = np.empty((n, k), dtype=np.int64)
    alive = np.ones((n, k), dtype=bool)
    rows = np.arange(n)
    for pos in range(k):
        s = np.where(alive, scores, -np.inf)
        w = np.where(alive, np.exp(s - s.max(axis=1, keepdims=True)), 0.0)
        cum = np.cumsum(w, axis=1)
        target = uniforms[:, pos] * cum[:, -1]
        hit = (cum > target[:, None]) & alive
        # rounding guard: fall back to the last live entry
        last_alive = k - 1 - np.argmax(alive[:, ::-1], axis=1)
        pick = np.where(hit.any(axis=1), np.argmax(hit, axis=1), last_alive)
        out[:, pos] = pick
        alive[rows, pick] = False
    return out


# --- pair tallies against the reference action ------------------------------


def _pair_tallies_loop(ranking, n_actions):
    ref = n_actions - 1
    ahead = np.zeros(n_actions, dtype=np.int64)
    count = np.zeros(n_actions, dtype=np.int64)
    refs_after = 0
    for pos in range(ranking.shape[0] - 1, -1, -1):
        a = ranking[pos]
        count[a] += 1
        if a == ref:
            refs_after += 1
        else:
            ahead[a] += refs_after
    total = count * count[ref]
    total[ref] = 0
    ahead[ref] = 0
    return ahead, total


def _pair_tallies_numpy(ranking, n_actions):
    ref = n_actions - 1
    ranking = np.asarray(ranking, dtype=np.int64)
    is_ref = ranking == ref
    refs_after = np.cumsum(is_ref[::-1])[::-1] - is_ref
    ahead = np.bincount(
        ranking, weights=np.where(is_ref, 0, refs_after), minlength=n_actions
    ).astype(np.int64)
    count = np.bincount(ranking, minlength=n_actions).astype(np.int64)
    total = count * count[ref]
    total[ref] = 0
    ahead[ref] = 0
    return ahead, total


def _window_tallies_loop(rankings, n_actions):
    m = rankings.shape[0]
    ahead = np.zeros((m, n_actions), dtype=np.int64)
    total = np.zeros((m, n_actions), dtype=np.int64)
    for s in range(m):
        a, t = _pair_tallies_nb(rankings[s], n_actions)
        ahead[s] = a
        total[s] = t
    return ahead, total


def _window_tallies_numpy(rankings, n_actions):
    rankings = np.asarray(rankings, dtype=np.int64)
    m, _ = rankings.shape
    ref = n_actions - 1
    is_ref = rankings == ref
    refs_after = np.cumsum(is_ref[:, ::-1], axis=1)[:, ::-1] - is_ref
    flat = rankings + n_actions * np.arange(m)[:, None]
    ahead = np.bincount(
        flat.ravel(),
        weights=np.where(is_ref, 0, refs_after).ravel(),
        minlength=m * n_actions,
    ).reshape(m, n_actions).astype(np.int64)
    count = np.bincount(flat.ravel(), minlength=m * n_actions).reshape(m, n_actions)
    total = count * count[:, ref : ref + 1]
    total[:, ref] = 0
    ahead[:, ref] = 0
    return ahead, total.astype(np.int64)


# --- sliding-window tallies grouped by denominator ---------------------------


def _window_push_loop(numer, count, ahead_buf, total_buf, slot, evict, ahead, total):
    n_actions = ahead.shape[0]
    for a in range(n_actions):
        if evict:
            d = total_buf[slot, a]
            if d > 0:
                numer[a, d] -= ahead_buf[slot, a]
                count[a, d] -= 1
        d = total[a]
        if d > 0:
            numer[a, d] += ahead[a]
            count[a, d] += 1
        ahead_buf[slot, a] = ahead[a]
        total_buf[slot, a] = d


def _window_push_numpy(numer, count, ahead_buf, total_buf, slot, evict, ahead, total):
    cols = np.arange(ahead.shape[0])
    if evict:
        old_a, old_t = ahead_buf[slot], total_buf[slot]
        live = old_t > 0
        numer[cols[live], old_t[live]] -= old_a[live]
        count[cols[live], old_t[live]] -= 1
    live = total > 0
    numer[cols[live], total[live]] += ahead[live]
    count[cols[live], total[live]] += 1
    ahead_buf[slot] = ahead
    total_buf[slot] = total


def _reduce_fractions_loop(numer, count, denoms):
    n_actions, width = numer.shape
    out = np.empty(n_actions, dtype=np.float64)
    for a in range(n_actions):
        hits = 0
        s = 0.0
        for c in range(width):
            hits += count[a, c]
            s += numer[a, c] / denoms[c]
        out[a] = s / hits if hits > 0 else np.nan
    return out


def _reduce_fractions_numpy(numer, count, denoms):
    hits = count.sum(axis=1)
    # sequential sum, matching the loop form bit for bit
    sums = np.cumsum(numer / denoms, axis=1)[:, -1]
    out = np.full(numer.shape[0], np.nan)
    ok = hits > 0
    out[ok] = sums[ok] / hits[ok]
    return out


# --- Euclidean projection onto the probability simplex ----------------------


def _project_simplex_loop(y):
    n = y.shape[0]
    srt = np.sort(y)[::-1]
    cum = 0.0
    theta = 0.0
    for i in range(n):
        cum += srt[i]
        t = (cum - 1.0) / (i + 1)
        if srt[i] - t > 0.0:
            theta = t
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        v = y[i] - theta
        out[i] = v if v > 0.0 else 0.0
    return out


def _project_simplex_numpy(y):
    srt = np.sort(y)[::-1]
    thetas = (np.cumsum(srt) - 1.0) / np.arange(1, y.size + 1)
    rho = np.nonzero(srt - thetas > 0.0)[0][-1]
    return np.maximum(y - thetas[rho], 0.0)


_sample_order_nb = _njit(_sample_order_loop)
_pair_tallies_nb = _njit(_pair_tallies_loop)
_sample_orders_nb = _njit(_sample_orders_loop)
_window_tallies_nb = _njit(_window_tallies_loop)
_project_simplex_nb = _njit(_project_simplex_loop)
_window_push_nb = _njit(_window_push_loop)
_reduce_fractions_nb = _njit(_reduce_fractions_loop)

if USE_NUMBA:
    sample_order = _sample_order_nb
    sample_orders = _sample_orders_nb
    pair_tallies = _pair_tallies_nb
    window_tallies = _window_tallies_nb
    project_simplex = _project_simplex_nb
    window_push = _window_push_nb
    reduce_fractions = _reduce_fractions_nb
else:
    sample_order = _sample_order_numpy
    sample_orders = _sample_orders_numpy
    pair_tallies = _pair_tallies_numpy
    window_tallies = _window_tallies_numpy
    project_simplex = _project_simplex_numpy
    window_push = _window_push_numpy
    reduce_fractions = _reduce_fractions_numpy

# Both forms of every kernel, for equivalence tests and the benchmark.
IMPLEMENTATIONS = {
    "sample_order": (_sample_order_nb, _sample_order_numpy),
    "sample_orders": (_sample_orders_nb, _sample_orders_numpy),
    "pair_tallies": (_pair_tallies_nb, _pair_tallies_numpy),
    "window_tallies": (_window_tallies_nb, _window_tallies_numpy),
    "project_simplex": (_project_simplex_nb, _project_simplex_numpy),
    "window_push": (_window_push_nb, _window_push_numpy),
    "reduce_fractions": (_reduce_fractions_nb, _reduce_fractions_numpy),
}
