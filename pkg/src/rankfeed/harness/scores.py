"""Per-step model score tables for the routing scenario."""

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from rankfeed.environments import UtilitySequence, write_sequence_csv

REFERENCE_NAME = "__reference__"


@dataclass
class ScoreDataset:
    steps: list
    names: list  # model names, without the appended reference
    raw: np.ndarray  # (rows, models)
    offset: float
    scale: float

    @property
    def utilities(self) -> np.ndarray:
        """Rescaled scores with a zero-utility reference column appended."""
        u = (self.raw - self.offset) / self.scale
        return np.column_stack([u, np.zeros(len(u))])

    @property
    def n_actions(self) -> int:
        return len(self.names) + 1

    def metadata(self) -> dict:
        return {
            "models": self.names,
            "actions": self.names + [REFERENCE_NAME],
            "transform": "u = (score - offset) / scale",
            "offset": self.offset,
            "scale": self.scale,
            "reference": "last action is a synthetic model with utility 0 at every step",
        }

    def sample_sequence(self, T, seed) -> UtilitySequence:
        """T rows drawn uniformly with replacement."""
        rng = np.random.default_rng([int(seed), 0x5C0BE5])
        rows = rng.integers(0, len(self.raw), T)
        return UtilitySequence(self.utilities[rows], {"rows": rows, **self.metadata()})


def ingest_scores(path) -> ScoreDataset:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty file")
    header, body = rows[0], [r for r in rows[1:] if r]
    if header[0].strip() != "step":
        raise ValueError(f"{path}: first column must be 'step'")
    names = [h.strip() for h in header[1:]]
    if len(names) < 2:
        raise ValueError(f"{path}: need at least two model columns")
    if not body:
        raise ValueError(f"{path}: no score rows")
    raw = np.empty((len(body), len(names)))
    for i, r in enumerate(body):
        if len(r) != len(header):
            raise ValueError(f"{path}: row {i + 2} has {len(r)} cells, expected {len(header)}")
        try:
            raw[i] = [float(x) for x in r[1:]]
        except ValueError:
            raise ValueError(f"{path}: non-numeric score in row {i + 2}") from None
    if not np.all(np.isfinite(raw)):
        raise ValueError(f"{path}: non-finite score")
    lo, hi = float(raw.min()), float(raw.max())
    offset = (lo + hi) / 2.0
    scale = (hi - lo) / 2.0 if hi > lo else 1.0
    return ScoreDataset([r[0] for r in body], names, raw, offset, scale)


def write_ingested(dataset: ScoreDataset, out_dir):
    """Write the rescaled utilities as a sequence file plus a JSON sidecar."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_sequence_csv(out / "utilities.csv", dataset.utilities)
    with open(out / "utilities.json", "w", encoding="utf-8") as fh:
        json.dump(dataset.metadata(), fh, indent=1)
        fh.write("\n")
    return out / "utilities.csv"
