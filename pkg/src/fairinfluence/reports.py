"""Report rows, CSV emission, and the percentile bootstrap.

Cells are plain decimals or bare words; nothing needs quoting. Floats
use 12 significant digits so re-running a deterministic job reproduces
files byte-for-byte. Undefined metrics stay empty cells, never 0.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

INFLUENCE_HEADER = ("method", "feature", "measure", "value", "stderr", "n_samples")
FAIRNESS_HEADER = ("method", "metric", "value", "ci_low", "ci_high")
SWEEP_HEADER = (
    "scenario",
    "r",
    "method",
    "metric",
    "feature",
    "mean",
    "ci_low",
    "ci_high",
    "trials",
)


def bootstrap_ci(
    values, level: float = 0.95, resamples: int = 1000, seed: int = 0
) -> tuple[float, float]:
    """Percentile bootstrap interval for the mean, deterministic per seed."""
    values = np.asarray(values, dtype=np.float64).ravel()
    if values.size < 2:
        raise ValueError("bootstrap_ci needs at least 2 values")
    if not 0.0 < level < 1.0:
        raise ValueError("level must be in (0, 1)")
    if resamples < 1:
        raise ValueError("resamples must be >= 1")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, values.size, size=(resamples, values.size))
    means = values[idx].mean(axis=1)
    alpha = 0.5 * (1.0 - level)
    low, high = np.quantile(means, [alpha, 1.0 - alpha])
    return float(low), float(high)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".12g")


@dataclass(frozen=True)
class InfluenceRow:
    method: str
    feature: str
    measure: str
    value: float
    stderr: float
    n_samples: int


@dataclass(frozen=True)
class FairnessRow:
    method: str
    metric: str
    value: float | None
    ci_low: float | None = None
    ci_high: float | None = None


@dataclass(frozen=True)
class SweepRow:
    scenario: str
    r: float
    method: str
    metric: str
    feature: str | None
    mean: float | None
    ci_low: float | None
    ci_high: float | None
    trials: int


def _write(path, header, cell_rows) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(cell_rows)


def write_influence_csv(path, rows) -> None:
    _write(
        path,
        INFLUENCE_HEADER,
        (
            [r.method, r.feature, r.measure, _cell(r.value), _cell(r.stderr), _cell(r.n_samples)]
            for r in rows
        ),
    )


def write_fairness_csv(path, rows) -> None:
    _write(
        path,
        FAIRNESS_HEADER,
        (
            [r.method, r.metric, _cell(r.value), _cell(r.ci_low), _cell(r.ci_high)]
            for r in rows
        ),
    )


def write_sweep_csv(path, rows) -> None:
    _write(
        path,
        SWEEP_HEADER,
        (
            [
                r.scenario,
                _cell(r.r),
                r.method,
                r.metric,
                r.feature or "",
                _cell(r.mean),
                _cell(r.ci_low),
                _cell(r.ci_high),
                _cell(r.trials),
            ]
            for r in rows
        ),
    )
