"""Experiment orchestration: configs, score ingestion, runs and plot data."""

from rankfeed.harness.config import ConfigError, ExperimentConfig, load_config, parse_config_text
from rankfeed.harness.io import (
    emit_plot_data,
    read_checkpoint_csv,
    read_trace_csv,
    write_trace_csv,
)
from rankfeed.harness.runner import plot_from_dir, run_experiment
from rankfeed.harness.scores import ScoreDataset, ingest_scores, write_ingested

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "ScoreDataset",
    "emit_plot_data",
    "ingest_scores",
    "load_config",
    "parse_config_text",
    "plot_from_dir",
    "read_checkpoint_csv",
    "read_trace_csv",
    "run_experiment",
    "write_ingested",
    "write_trace_csv",
]
