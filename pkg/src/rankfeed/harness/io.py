"""CSV persistence for traces, checkpoints, summaries and plot data.

Floats are written with 17 significant digits so that parsing a file back
reproduces every value bit for bit.
"""

import csv
from pathlib import Path

import numpy as np

PLOT_COLUMNS = ["t", "mean_avg_regret", "ci_halfwidth"]


def fmt(x) -> str:
    return format(float(x), ".17g")


def _ints(seq) -> str:
    return " ".join(str(int(a)) for a in seq)


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_trace_csv(path, trace):
    """One row per step: proposal, ranking, strategy, estimate, utility,
    realized mean utility of the proposal."""
    A = trace.utilities.shape[1]
    header = (["t", "proposal", "ranking"] + [f"pi_{a}" for a in range(A)]
              + [f"est_{a}" for a in range(A)] + [f"u_{a}" for a in range(A)] + ["realized"])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        w.writerow(header)
        for t in range(len(trace)):
            w.writerow(
                [t + 1, _ints(trace.proposals[t]), _ints(trace.rankings[t])]
                + [fmt(x) for x in trace.strategies[t]]
                + [fmt(x) for x in trace.estimates[t]]
                + [fmt(x) for x in trace.utilities[t]]
                + [fmt(trace.realized[t])]
            )


def read_trace_csv(path) -> dict:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    A = sum(1 for h in header if h.startswith("pi_"))
    T = len(body)

    def block(prefix):
        cols = [header.index(f"{prefix}_{a}") for a in range(A)]
        return np.array([[float(r[c]) for c in cols] for r in body]).reshape(T, A)

    return {
        "t": np.array([int(r[0]) for r in body], dtype=np.int64),
        "proposals": np.array([[int(x) for x in r[1].split()] for r in body], dtype=np.int64),
        "rankings": np.array([[int(x) for x in r[2].split()] for r in body], dtype=np.int64),
        "strategies": block("pi"),
        "estimates": block("est"),
        "utilities": block("u"),
        "realized": np.array([float(r[-1]) for r in body]),
    }


def write_table(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(x) if isinstance(x, (float, np.floating)) else x for x in r])


def read_table(path) -> tuple[list, list]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty table")
    return rows[0], rows[1:]


def read_checkpoint_csv(path) -> dict:
    header, body = read_table(path)
    return {h: np.array([float(r[i]) for r in body]) for i, h in enumerate(header)}


def emit_plot_data(curves, path):
    """Mean average-regret curve with 95% normal-approximation half-widths.

    ``curves`` is a list of ``(t, avg_regret)`` pairs sharing one ``t``.
    """
    curves = list(curves)
    if not curves:
        raise ValueError("no traces to summarize")
    t = np.asarray(curves[0][0])
    for c in curves[1:]:
        if not np.array_equal(np.asarray(c[0]), t):
            raise ValueError("traces do not share a checkpoint schedule")
    vals = np.vstack([np.asarray(c[1], dtype=np.float64) for c in curves])
    mean = vals.mean(axis=0)
    if len(curves) > 1:
        half = 1.96 * vals.std(axis=0, ddof=1) / np.sqrt(len(curves))
    else:
        half = np.zeros_like(mean)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    write_table(path, PLOT_COLUMNS, [[int(a), b, c] for a, b, c in zip(t, mean, half)])
    return mean, half
