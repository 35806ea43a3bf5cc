"""Datasets: named feature columns, protected-column roles, binary labels.

A :class:`Dataset` is immutable; the feature matrix and labels are
stored as read-only arrays so trained models and samplers can share
them safely across threads.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .configio import read_kv
from .errors import ConfigError


@dataclass(frozen=True)
class RowSpace:
    """Column layout of a full feature row: which indices are protected."""

    n_features: int
    protected_idx: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n_features < 1:
            raise ValueError("n_features must be >= 1")
        bad = [i for i in self.protected_idx if not 0 <= i < self.n_features]
        if bad:
            raise ValueError(f"protected indices {bad} out of range [0, {self.n_features})")
        if len(set(self.protected_idx)) != len(self.protected_idx):
            raise ValueError("duplicate protected indices")
        object.__setattr__(self, "protected_idx", tuple(sorted(self.protected_idx)))

    @property
    def x_idx(self) -> tuple[int, ...]:
        z = set(self.protected_idx)
        return tuple(i for i in range(self.n_features) if i not in z)

    def compose(self, x_vals, z_vals) -> np.ndarray:
        """Assemble a full row from its non-protected and protected parts."""
        x_vals = np.atleast_1d(np.asarray(x_vals, dtype=np.float64))
        z_vals = np.atleast_1d(np.asarray(z_vals, dtype=np.float64))
        if x_vals.shape != (len(self.x_idx),):
            raise ValueError(f"expected {len(self.x_idx)} non-protected values, got {x_vals.shape}")
        if z_vals.shape != (len(self.protected_idx),):
            raise ValueError(f"expected {len(self.protected_idx)} protected values, got {z_vals.shape}")
        row = np.empty(self.n_features)
        row[list(self.x_idx)] = x_vals
        row[list(self.protected_idx)] = z_vals
        return row


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Dataset:
    """Feature matrix with named columns, protected roles, binary labels."""

    features: np.ndarray
    names: tuple[str, ...]
    protected_idx: frozenset[int]
    labels: np.ndarray

    def __post_init__(self) -> None:
        feats = np.asarray(self.features, dtype=np.float64)
        if feats.ndim != 2:
            raise ValueError("features must be a 2-D matrix")
        n, d = feats.shape
        if n < 1 or d < 1:
            raise ValueError("dataset must have at least one row and one column")
        if not np.all(np.isfinite(feats)):
            bad = np.argwhere(~np.isfinite(feats))[0]
            raise ValueError(
                f"non-finite feature value at row {bad[0]}, column {self.names[bad[1]] if len(self.names) == d else bad[1]}"
            )
        names = tuple(self.names)
        if len(names) != d:
            raise ValueError(f"expected {d} column names, got {len(names)}")
        if len(set(names)) != d:
            raise ValueError("column names must be unique")
        prot = frozenset(int(i) for i in self.protected_idx)
        if any(not 0 <= i < d for i in prot):
            raise ValueError(f"protected indices {sorted(prot)} out of range [0, {d})")
        labels = np.asarray(self.labels)
        if labels.shape != (n,):
            raise ValueError(f"expected {n} labels, got shape {labels.shape}")
        if not np.isin(labels, (0, 1)).all():
            raise ValueError("labels must be 0 or 1")
        object.__setattr__(self, "features", _readonly(feats))
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "protected_idx", prot)
        object.__setattr__(self, "labels", _readonly(labels.astype(np.int64)))

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def z_idx(self) -> tuple[int, ...]:
        return tuple(sorted(self.protected_idx))

    @property
    def x_idx(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n_features) if i not in self.protected_idx)

    @property
    def space(self) -> RowSpace:
        return RowSpace(self.n_features, self.z_idx)

    def column(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no column named {name!r}") from None

    def take(self, indices: np.ndarray) -> "Dataset":
        """Row subset in the given order."""
        return Dataset(
            self.features[indices],
            self.names,
            self.protected_idx,
            self.labels[indices],
        )


@dataclass(frozen=True)
class CsvSchema:
    """Column roles for CSV ingestion: one label, >= 1 protected columns."""

    label: str
    protected: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if not self.label:
            raise ConfigError("schema: label column name must be nonempty")
        if not self.protected:
            raise ConfigError("schema: at least one protected column is required")
        if self.label in self.protected:
            raise ConfigError("schema: label column cannot also be protected")


def read_schema(path: str | Path) -> CsvSchema:
    kv = read_kv(path)
    if "label" not in kv:
        raise ConfigError(f"schema {path}: missing 'label' key")
    protected = tuple(p.strip() for p in kv.get("protected", "").split(",") if p.strip())
    return CsvSchema(label=kv["label"], protected=protected)


def load_dataset_csv(path: str | Path, schema: CsvSchema) -> Dataset:
    """Read a comma-separated file with a header row into a Dataset.

    All non-label columns become features in file order; the schema
    names the label column and the protected feature columns. Parse
    failures report the 1-based data row and the column name.
    """
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise ConfigError(f"{path}: empty file") from None
            header = [h.strip() for h in header]
            if len(set(header)) != len(header):
                raise ConfigError(f"{path}: duplicate column names in header")
            if schema.label not in header:
                raise ConfigError(f"{path}: schema label column {schema.label!r} not found")
            for p in schema.protected:
                if p not in header:
                    raise ConfigError(f"{path}: schema protected column {p!r} not found")
            label_col = header.index(schema.label)
            feature_cols = [j for j in range(len(header)) if j != label_col]
            if not feature_cols:
                raise ConfigError(f"{path}: no feature columns besides the label")
            rows: list[list[float]] = []
            labels: list[int] = []
            for rownum, record in enumerate(reader, start=1):
                if len(record) != len(header):
                    raise ConfigError(
                        f"{path}: row {rownum}: expected {len(header)} cells, got {len(record)}"
                    )
                feats = []
                for j in feature_cols:
                    try:
                        feats.append(float(record[j]))
                    except ValueError:
                        raise ConfigError(
                            f"{path}: row {rownum}, column {header[j]!r}: "
                            f"cannot parse {record[j]!r} as a number"
                        ) from None
                cell = record[label_col].strip()
                if cell not in ("0", "1"):
                    raise ConfigError(
                        f"{path}: row {rownum}, column {schema.label!r}: "
                        f"label must be 0 or 1, got {cell!r}"
                    )
                rows.append(feats)
                labels.append(int(cell))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise ConfigError(f"{path}: no data rows")
    names = tuple(header[j] for j in feature_cols)
    protected_idx = frozenset(names.index(p) for p in schema.protected)
    return Dataset(np.array(rows), names, protected_idx, np.array(labels))


def train_test_split(data: Dataset, test_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Disjoint, exhaustive split with |test| = round(test_fraction * N)."""
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must be in (0, 1)")
    n = data.n_rows
    if n < 2:
        raise ValueError("need at least 2 rows to split")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    n_test = int(round(test_fraction * n))
    n_test = min(max(n_test, 1), n - 1)
    return data.take(perm[n_test:]), data.take(perm[:n_test])
