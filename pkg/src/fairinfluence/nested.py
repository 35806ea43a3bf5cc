"""Nested removal of protected influence in feature pipelines.

When upstream features are themselves model outputs that read the
protected columns, debiasing only the final model leaves the indirect
path open. Here each unfairly-influenced feature model is replaced by
its interventional mixture, the corrected feature values are
substituted downstream in declaration order, and the final model is
mixed as well.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import ConfigError
from .mixtures import mim
from .models import Predictor, _as_rows


@dataclass(frozen=True)
class FeatureStage:
    """One produced feature: column `target` computed from `parents`.

    The stage model is full-width (reads whole rows); `parents` only
    declares the dependency structure for ordering validation. Stages
    flagged unfair get mixture-corrected, fair stages pass through.
    """

    target: int
    parents: tuple[int, ...]
    model: Predictor
    unfair: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "parents", tuple(int(p) for p in self.parents))
        if self.target in self.parents:
            raise ConfigError(f"cyclic dependency: stage target {self.target} lists itself as parent")


class NestedDebiasedModel:
    """Composite predictor: corrected stages substituted, mixed final."""

    def __init__(self, stage_models, targets, final_model, n_features: int):
        self._stages = tuple(stage_models)
        self._targets = tuple(targets)
        self._final = final_model
        self.n_features = int(n_features)

    def predict(self, rows: np.ndarray) -> np.ndarray:
        rows = _as_rows(rows, self.n_features).copy()
        for target, model in zip(self._targets, self._stages):
            rows[:, target] = model.predict(rows)
        return self._final.predict(rows)


def nested_removal(pipeline, final: Predictor, data: Dataset) -> NestedDebiasedModel:
    """Debias a feature pipeline end to end.

    `pipeline` is an ordered list of FeatureStage, upstream first. Each
    parent must be a root column (never produced by any stage) or the
    target of an earlier stage; anything else is a cycle or a
    forward reference and is rejected.
    """
    stages = list(pipeline)
    n = data.n_features
    targets = [s.target for s in stages]
    if len(set(targets)) != len(targets):
        raise ConfigError("duplicate stage targets in pipeline")
    produced = set(targets)
    available = set(range(n)) - produced
    for s in stages:
        if not 0 <= s.target < n:
            raise ConfigError(f"stage target {s.target} out of range for {n} columns")
        if s.target in data.z_idx:
            raise ConfigError(f"stage target {s.target} is a protected column")
        if s.model.n_features != n:
            raise ConfigError("stage model width does not match dataset")
        for p in s.parents:
            if not 0 <= p < n:
                raise ConfigError(f"stage parent {p} out of range for {n} columns")
            if p not in available:
                raise ConfigError(
                    f"cyclic dependency: stage for column {s.target} reads column {p} "
                    "before it is produced"
                )
        available.add(s.target)
    if final.n_features != n:
        raise ConfigError("final model width does not match dataset")

    corrected = [mim(s.model, data) if s.unfair else s.model for s in stages]
    return NestedDebiasedModel(corrected, targets, mim(final, data), n)
