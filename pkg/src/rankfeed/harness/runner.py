"""Seeded multi-run execution over a hyperparameter grid."""

import json
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from rankfeed.environments import (
    RankingEnvironment,
    gen_bounded_variation,
    gen_noise_shift,
    gen_stationary,
    gen_theorem1_instance,
    read_sequence_csv,
    variation,
)
from rankfeed.estimation import EstimationBoundInputs, estimation_error_bound
from rankfeed.games import random_game, read_game, run_game
from rankfeed.harness.config import ExperimentConfig
from rankfeed.harness.io import (
    emit_plot_data,
    read_checkpoint_csv,
    read_table,
    write_table,
    write_trace_csv,
)
from rankfeed.harness.scores import ingest_scores
from rankfeed.learners import LearnerConfig, default_lambda, run_learner, theorem_defaults
from rankfeed.metrics import checkpoint_schedule, cumulative_regret, proposal_means
from rankfeed.oracles import OracleConfig
from rankfeed.ranking_model import RankingParams

OUTPUT_ENV = "RANKFEED_OUTPUT"
DEFAULT_OUTPUT = "rankfeed_runs"

SUMMARY_COLUMNS = [
    "run_id", "scenario", "grid_index", "seed", "feedback", "tau", "T", "K",
    "window_m", "block_M", "gamma", "lam", "final_regret", "final_avg_regret",
    "avg_regret_quarter", "avg_regret_half", "bandit_regret", "exploitability",
    "realized_variation", "estimation_bound", "checkpoint_file", "trace_file",
]


def output_root(config: ExperimentConfig, override=None) -> Path:
    return Path(override or config.output or os.environ.get(OUTPUT_ENV) or DEFAULT_OUTPUT)


def _env_seed(env, seed):
    return seed if env["seed"] == "run" else int(env["seed"])


def build_sequence(config: ExperimentConfig, seed):
    env, T = config.environment, config.T
    kind, es = env["kind"], _env_seed(env, seed)
    if kind == "bounded_variation":
        return gen_bounded_variation(T, float(env["q"]), es, int(env["n_actions"]), float(env["scale"]))
    if kind == "noise_shift":
        return gen_noise_shift(T, es, env["noise"], float(env["sigma"]), int(env["n_actions"]))
    if kind == "stationary":
        u = [float(x) for x in env["utilities"].replace(",", " ").split()]
        return gen_stationary(T, u)
    if kind == "theorem1":
        return gen_theorem1_instance(int(env["instance"]), T, es)
    if kind == "sequence_file":
        seq = read_sequence_csv(env["path"])
        if len(seq) < T:
            raise ValueError(f"{env['path']}: {len(seq)} rows, T = {T}")
        return seq
    if kind == "scores":
        return ingest_scores(env["path"]).sample_sequence(T, es)
    raise ValueError(f"unknown environment kind {kind!r}")


def _variation_budget(config, sequence):
    raw = config.environment["variation_budget"]
    if raw != "auto":
        return float(raw)
    if sequence is not None and "budget" in sequence.meta:
        return float(sequence.meta["budget"])
    return variation(sequence) if sequence is not None else float(config.T)


def build_learner_config(config: ExperimentConfig, n_actions, point, budget) -> LearnerConfig:
    lc, T = config.learner, config.T
    feedback = lc["feedback"]
    K = int(lc["K"]) if lc["K"] else None
    lam = point.get("lam", default_lambda(T) if lc["lam"] == "auto" else float(lc["lam"]))
    oracle = OracleConfig(kind=lc["oracle"], lam=float(lam), c0=float(lc["c0"]))
    defaults = theorem_defaults(feedback, T, n_actions, K=K, variation_budget=budget,
                                delta=float(lc["delta"]), L=oracle.L)

    def pick(key, cast):
        if key in point:
            return cast(point[key])
        return defaults[key] if lc[key] == "auto" else cast(lc[key])

    window_m = pick("window_m", int)
    gamma = pick("gamma", float) if feedback.endswith("_bandit") else 0.0
    block_M = None
    if feedback == "avg_bandit":
        block_M = pick("block_M", int)
        if "block_M" not in point and lc["block_M"] == "auto":
            block_M = max(block_M, 2 * window_m)
    return LearnerConfig(feedback=feedback, n_actions=n_actions, tau=float(lc["tau"]),
                         window_m=window_m, oracle=oracle, K=K, gamma=gamma, block_M=block_M)


def _bound(lcfg: LearnerConfig, delta):
    p = 1.0 if not lcfg.bandit else 1.0 - (1.0 - lcfg.gamma / lcfg.n_actions) ** lcfg.K
    if p <= 0:
        return ""
    b = estimation_error_bound(EstimationBoundInputs(lcfg.tau, p, lcfg.window_m, delta, lcfg.n_actions))
    return b.value if b.applicable else ""


def run_id(config, index, seed):
    return f"{config.name}_{config.scenario}_g{index:03d}_s{seed}"


def _run_online(config, index, point, seed, out):
    seq = build_sequence(config, seed)
    lcfg = build_learner_config(config, seq.n_actions, point, _variation_budget(config, seq))
    env = RankingEnvironment(seq, RankingParams(lcfg.tau), basis=lcfg.basis)
    trace = run_learner(env, lcfg, config.T, seed)
    rid = run_id(config, index, seed)
    T = config.T
    u = trace.utilities
    reg = cumulative_regret(u, trace.expected)
    breg = cumulative_regret(u, proposal_means(u, trace.proposals))
    steps = np.zeros(T)
    steps[1:] = np.linalg.norm(np.diff(u, axis=0), axis=1)
    var = np.cumsum(steps)
    cps = checkpoint_schedule(T)
    rows = [[int(c), reg[c - 1], reg[c - 1] / c, breg[c - 1], var[c - 1]] for c in cps]
    cp_file = out / f"{rid}_checkpoints.csv"
    write_table(cp_file, ["t", "regret", "avg_regret", "bandit_regret", "variation"], rows)
    trace_file = ""
    if config.trace == "full":
        trace_file = out / f"{rid}.csv"
        write_trace_csv(trace_file, trace)
    at = {int(c): reg[c - 1] / c for c in cps}
    return [
        rid, config.scenario, index, seed, lcfg.feedback, lcfg.tau, T, lcfg.K, lcfg.window_m,
        lcfg.block_M or "", lcfg.gamma, lcfg.oracle.lam, reg[-1], reg[-1] / T,
        at[int(np.ceil(T / 4))], at[int(np.ceil(T / 2))], breg[-1], "", var[-1],
        _bound(lcfg, float(config.learner["delta"])), cp_file.name,
        Path(trace_file).name if trace_file else "",
    ]


def _run_game(config, index, point, seed, out):
    env = config.environment
    if env["kind"] == "random_game":
        sizes = tuple(int(a) for a in env["action_sizes"].replace(",", " ").split())
        game = random_game(sizes, _env_seed(env, seed))
    else:
        game = read_game(env["path"])
    budget = None if env["variation_budget"] == "auto" else float(env["variation_budget"])
    cfgs = [build_learner_config(config, a, point, budget if budget is not None else config.T)
            for a in game.action_sizes]
    gt = run_game(game, cfgs, config.T, seed)
    rid = run_id(config, index, seed)
    N = game.N
    avg = gt.regrets.max(axis=1) / gt.checkpoints
    rows = [[int(c), e, a, *r] for c, e, a, r in zip(gt.checkpoints, gt.exploitability, avg, gt.regrets)]
    cp_file = out / f"{rid}_checkpoints.csv"
    write_table(cp_file, ["t", "exploitability", "avg_regret"] + [f"regret_{i}" for i in range(N)], rows)
    at = dict(zip(gt.checkpoints.tolist(), avg))
    T, c0 = config.T, cfgs[0]
    return [
        rid, config.scenario, index, seed, c0.feedback, c0.tau, T, c0.K, c0.window_m,
        c0.block_M or "", c0.gamma, c0.oracle.lam, float(gt.final_regrets.max()), avg[-1],
        at[int(np.ceil(T / 4))], at[int(np.ceil(T / 2))], "", gt.exploitability[-1],
        float(gt.utility_variation.max()), _bound(c0, float(config.learner["delta"])), cp_file.name, "",
    ]


def run_single(config: ExperimentConfig, index, point, seed, out):
    out = Path(out)
    if config.scenario == "game":
        return _run_game(config, index, point, seed, out)
    return _run_online(config, index, point, seed, out)


def _task(args):
    return run_single(*args)


def run_experiment(config: ExperimentConfig, output=None, workers=None, seeds=None) -> dict:
    """Run every (grid point, seed) pair; write per-run CSVs, summary.csv
    and selection.json; return the summary rows and the selected point."""
    out = output_root(config, output)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_probe"
        probe.write_text("", encoding="utf-8")
        probe.unlink()
    except OSError as exc:
        raise OSError(f"output directory {out} is not writable: {exc}") from None
    seeds = list(seeds) if seeds is not None else config.seeds
    points = config.grid_points()
    tasks = [(config, i, p, s, out) for i, p in enumerate(points) for s in seeds]
    workers = workers or config.workers
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_task, tasks))
    else:
        rows = [_task(t) for t in tasks]
    write_table(out / "summary.csv", SUMMARY_COLUMNS, rows)
    col = SUMMARY_COLUMNS.index("final_avg_regret")
    means = [float(np.mean([r[col] for r in rows if r[2] == i])) for i in range(len(points))]
    best = int(np.argmin(means))
    selection = {"grid_index": best, "point": points[best], "mean_final_avg_regret": means[best],
                 "all_means": means}
    with open(out / "selection.json", "w", encoding="utf-8") as fh:
        json.dump(selection, fh, indent=1)
        fh.write("\n")
    return {"rows": rows, "selection": selection, "output": out}


def plot_from_dir(run_dir, out_dir=None) -> list:
    """Emit one plot CSV per grid point from a finished experiment."""
    run_dir = Path(run_dir)
    header, body = read_table(run_dir / "summary.csv")
    gi, cf = header.index("grid_index"), header.index("checkpoint_file")
    groups = {}
    for r in body:
        groups.setdefault(int(r[gi]), []).append(run_dir / r[cf])
    if not groups:
        raise ValueError(f"{run_dir}: summary lists no runs")
    out_dir = Path(out_dir) if out_dir else run_dir
    written = []
    for index, files in sorted(groups.items()):
        curves = []
        for f in files:
            cp = read_checkpoint_csv(f)
            curves.append((cp["t"].astype(np.int64), cp["avg_regret"]))
        path = out_dir / f"plot_g{index:03d}.csv"
        emit_plot_data(curves, path)
        written.append(path)
    return written
