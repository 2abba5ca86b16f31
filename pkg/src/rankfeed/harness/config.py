"""Experiment configuration: a strict key = value INI file.

Every section and key is listed in ``SCHEMA`` with its default; anything
else in the file is an error.  ``auto`` for a learner size means the
theory-prescribed value for the run's horizon.

Example::

    [experiment]
    scenario = online
    T = 10000
    seeds = 0, 1, 2

    [environment]
    kind = bounded_variation
    n_actions = 10
    q = 0.3

    [learner]
    feedback = inst_full
    tau = 1.0

    [grid]
    gamma = 0.1, 0.05, 0.01
"""

import configparser
from dataclasses import dataclass, field
from pathlib import Path

SCENARIOS = ("online", "game", "llm_routing")
ENV_KINDS = {
    "online": ("bounded_variation", "noise_shift", "stationary", "sequence_file", "theorem1"),
    "game": ("random_game", "game_file"),
    "llm_routing": ("scores",),
}
GRID_KEYS = ("window_m", "block_M", "gamma", "lam")

# section -> key -> default (None: required)
SCHEMA = {
    "experiment": {
        "scenario": "online",
        "T": None,
        "seeds": "0",
        "output": "",
        "workers": "1",
        "name": "run",
        "trace": "full",  # "full": per-step trace CSV; "checkpoints": checkpoint CSV only
    },
    "environment": {
        "kind": None,
        "n_actions": "2",
        "seed": "run",  # "run": follow each run's seed; or a fixed integer
        "q": "0.5",
        "scale": "1.0",
        "noise": "gaussian",
        "sigma": "0.3",
        "utilities": "",
        "path": "",
        "instance": "1",
        "action_sizes": "2, 2",
        "variation_budget": "auto",
    },
    "learner": {
        "feedback": None,
        "tau": "1.0",
        "K": "",
        "gamma": "auto",
        "window_m": "auto",
        "block_M": "auto",
        "oracle": "hedge",
        "lam": "auto",
        "c0": "1.0",
        "delta": "0.05",
    },
    "grid": {k: "" for k in GRID_KEYS},
}


class ConfigError(ValueError):
    pass


def _floats(text):
    return [float(x) for x in text.replace(",", " ").split()]


def _ints(text):
    return [int(x) for x in text.replace(",", " ").split()]


@dataclass
class ExperimentConfig:
    scenario: str
    T: int
    seeds: list
    environment: dict
    learner: dict
    grid: dict = field(default_factory=dict)
    output: str = ""
    workers: int = 1
    name: str = "run"
    trace: str = "full"

    def grid_points(self) -> list:
        """Cartesian product of the grid lists, in file order."""
        points = [{}]
        for key in GRID_KEYS:
            if key in self.grid:
                points = [dict(p, **{key: v}) for p in points for v in self.grid[key]]
        return points


def parse_config_text(text, source="<config>") -> ExperimentConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    cp.optionxform = str  # keep K / M / T case
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    values = {}
    for section in cp.sections():
        if section not in SCHEMA:
            raise ConfigError(f"{source}: unknown section [{section}]")
        for key in cp[section]:
            if key not in SCHEMA[section]:
                raise ConfigError(f"{source}: unknown key {key!r} in [{section}]")
    for section, keys in SCHEMA.items():
        got = cp[section] if cp.has_section(section) else {}
        values[section] = {}
        for key, default in keys.items():
            raw = got.get(key, default)
            if raw is None:
                raise ConfigError(f"{source}: [{section}] {key} is required")
            values[section][key] = raw.strip()

    exp = values["experiment"]
    try:
        T = int(exp["T"])
        seeds = _ints(exp["seeds"])
        workers = int(exp["workers"])
        grid = {}
        for key, raw in values["grid"].items():
            if raw:
                grid[key] = _ints(raw) if key in ("window_m", "block_M") else _floats(raw)
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    if exp["scenario"] not in SCENARIOS:
        raise ConfigError(f"{source}: scenario must be one of {SCENARIOS}")
    if T < 1:
        raise ConfigError(f"{source}: T must be at least 1")
    if not seeds:
        raise ConfigError(f"{source}: seeds must be nonempty")
    if workers < 1:
        raise ConfigError(f"{source}: workers must be at least 1")
    if values["environment"]["kind"] not in ENV_KINDS[exp["scenario"]]:
        raise ConfigError(
            f"{source}: environment kind for {exp['scenario']} must be one of {ENV_KINDS[exp['scenario']]}"
        )
    if exp["trace"] not in ("full", "checkpoints"):
        raise ConfigError(f"{source}: trace must be 'full' or 'checkpoints'")
    for key, vals in grid.items():
        if not vals:
            raise ConfigError(f"{source}: grid list {key} is empty")
    return ExperimentConfig(
        scenario=exp["scenario"],
        T=T,
        seeds=seeds,
        environment=values["environment"],
        learner=values["learner"],
        grid=grid,
        output=exp["output"],
        workers=workers,
        name=exp["name"],
        trace=exp["trace"],
    )


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return parse_config_text(text, source=str(path))
