"""Empirical baseline distributions and Monte Carlo estimates.

Two baseline flavors, both realized from the data itself:

* joint: whole rows drawn from the dataset, preserving dependence
  between columns;
* marginal: each column shuffled independently, preserving only the
  per-column marginals and breaking all cross-column dependence.

Per-estimate RNG streams are keyed by (seed, namespace, indices), so
results never depend on evaluation order or parallel scheduling.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

from .data import Dataset, RowSpace


@dataclass(frozen=True)
class InfluenceEstimate:
    """A Monte Carlo mean with its standard error.

    ``stderr`` is the sample standard deviation of the averaged values
    divided by sqrt(n_samples); 0 when a single sample was used.
    """

    value: float
    stderr: float
    n_samples: int

    def __post_init__(self) -> None:
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if not self.stderr >= 0.0:
            raise ValueError("stderr must be >= 0")


def estimate_from_values(values: np.ndarray) -> InfluenceEstimate:
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    n = values.size
    if n == 0:
        raise ValueError("cannot form an estimate from zero samples")
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return InfluenceEstimate(value=mean, stderr=stderr, n_samples=n)


def _key_to_ints(key: tuple) -> tuple[int, ...]:
    out = []
    for item in key:
        if isinstance(item, str):
            out.append(zlib.crc32(item.encode()))
        else:
            out.append(int(item) & 0xFFFFFFFF)
    return tuple(out)


def keyed_rng(seed: int, key: tuple) -> np.random.Generator:
    """Generator on an independent stream identified by (seed, key)."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=_key_to_ints(key))
    return np.random.Generator(np.random.PCG64(ss))


class BaselineSampler:
    """Joint and per-column-marginal reservoirs over a feature matrix."""

    def __init__(self, rows: np.ndarray, seed: int = 0, space: "RowSpace | None" = None):
        rows = np.array(rows, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[0] < 1:
            raise ValueError("baseline needs a nonempty 2-D row matrix")
        if space is not None and space.n_features != rows.shape[1]:
            raise ValueError("row space does not match the baseline width")
        self.space = space
        self.seed = int(seed)
        rows.flags.writeable = False
        self._rows = rows
        # one independent shuffle per column realizes the exhaustive
        # marginal baseline: same column marginals, dependence destroyed
        shuffled = np.empty_like(rows)
        for k in range(rows.shape[1]):
            perm = keyed_rng(self.seed, ("marginal-init", k)).permutation(rows.shape[0])
            shuffled[:, k] = rows[perm, k]
        shuffled.flags.writeable = False
        self._shuffled = shuffled

    @classmethod
    def from_dataset(cls, data: Dataset, seed: int = 0) -> "BaselineSampler":
        return cls(data.features, seed=seed, space=data.space)

    @property
    def n_rows(self) -> int:
        return self._rows.shape[0]

    @property
    def n_features(self) -> int:
        return self._rows.shape[1]

    @property
    def rows(self) -> np.ndarray:
        return self._rows

    def rng(self, key: tuple) -> np.random.Generator:
        return keyed_rng(self.seed, key)

    def joint_rows(self, n: int | None, key: tuple) -> np.ndarray:
        """n rows with replacement from the joint; all rows when n is None."""
        if n is None:
            return self._rows
        if n < 1:
            raise ValueError("n must be >= 1")
        idx = self.rng(("joint",) + key).integers(0, self.n_rows, size=n)
        return self._rows[idx]

    def marginal_rows(self, n: int | None, key: tuple) -> np.ndarray:
        """Rows with independently resampled columns; the fixed per-column
        shuffle of the full data when n is None."""
        if n is None:
            return self._shuffled
        if n < 1:
            raise ValueError("n must be >= 1")
        out = np.empty((n, self.n_features))
        for k in range(self.n_features):
            idx = self.rng(("marginal", k) + key).integers(0, self.n_rows, size=n)
            out[:, k] = self._rows[idx, k]
        return out

    def column_values(self, col: int, n: int | None, key: tuple) -> np.ndarray:
        """Draws from one column's empirical marginal."""
        if not 0 <= col < self.n_features:
            raise ValueError(f"column {col} out of range")
        if n is None:
            return self._shuffled[:, col]
        if n < 1:
            raise ValueError("n must be >= 1")
        idx = self.rng(("column", col) + key).integers(0, self.n_rows, size=n)
        return self._rows[idx, col]


class ConditionalSampler:
    """Full rows grouped by their protected-column values: P(X | z)."""

    def __init__(self, data: Dataset, seed: int = 0):
        if not data.protected_idx:
            raise ValueError("dataset has no protected columns")
        self.seed = int(seed)
        self.z_idx = data.z_idx
        z_rows = data.features[:, list(self.z_idx)]
        by_level: dict[tuple[float, ...], list[int]] = {}
        for i in range(data.n_rows):
            by_level.setdefault(tuple(float(v) for v in z_rows[i]), []).append(i)
        self._groups: dict[tuple[float, ...], np.ndarray] = {
            level: data.features[np.array(idx)] for level, idx in by_level.items()
        }

    def levels(self) -> list[tuple[float, ...]]:
        return sorted(self._groups)

    def rows_for(self, z_level) -> np.ndarray:
        level = tuple(float(v) for v in np.atleast_1d(np.asarray(z_level, dtype=np.float64)))
        if level not in self._groups:
            raise KeyError(f"no rows observed with protected value {level}")
        return self._groups[level]

    def sample(self, z_level, n: int | None, key: tuple) -> np.ndarray:
        rows = self.rows_for(z_level)
        if n is None:
            return rows
        if n < 1:
            raise ValueError("n must be >= 1")
        rng = keyed_rng(self.seed, ("conditional",) + key)
        idx = rng.integers(0, rows.shape[0], size=n)
        return rows[idx]
