"""Plain-text model serialization.

Key=value lines, floats at 17 significant digits so round-trips are
bitwise exact. Mixtures nest their base model under ``base.``-prefixed
keys plus a mixing-reservoir block (values and weights).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .configio import ConfigError, fmt_float, parse_kv_text
from .mixtures import MixtureModel
from .models import LinearLogisticModel, Predictor

LINEAR_TYPE = "linear_logistic"
MIXTURE_TYPE = "interventional_mixture"


def _floats_csv(values) -> str:
    return ",".join(fmt_float(v) for v in np.asarray(values, dtype=np.float64))


def _parse_floats(raw: str, what: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in raw.split(",")], dtype=np.float64)
    except ValueError as exc:
        raise ConfigError(f"cannot parse {what}: {raw!r}") from exc


def _linear_lines(model: LinearLogisticModel, prefix: str = "") -> list[str]:
    return [
        f"{prefix}type={LINEAR_TYPE}",
        f"{prefix}n_features={model.n_features}",
        f"{prefix}weights={_floats_csv(model.weights)}",
        f"{prefix}bias={fmt_float(model.bias)}",
        f"{prefix}active={','.join(str(i) for i in sorted(model.feature_mask))}",
    ]


def _linear_from_kv(kv: dict[str, str], prefix: str = "") -> LinearLogisticModel:
    try:
        n = int(kv[f"{prefix}n_features"])
        weights = _parse_floats(kv[f"{prefix}weights"], "weights")
        bias = float(kv[f"{prefix}bias"])
        active_raw = kv[f"{prefix}active"]
    except KeyError as exc:
        raise ConfigError(f"model file missing key {exc.args[0]!r}") from exc
    if weights.size != n:
        raise ConfigError(f"expected {n} weights, got {weights.size}")
    active = frozenset(int(i) for i in active_raw.split(",") if i.strip() != "")
    return LinearLogisticModel(weights, bias, active)


def model_to_text(model: Predictor) -> str:
    if isinstance(model, LinearLogisticModel):
        return "\n".join(_linear_lines(model)) + "\n"
    if isinstance(model, MixtureModel):
        if not isinstance(model.base, LinearLogisticModel):
            raise ConfigError("only mixtures with a linear-logistic base serialize")
        lines = [
            f"type={MIXTURE_TYPE}",
            f"protected={','.join(str(i) for i in model.protected_idx)}",
            "mix_values=" + ";".join(_floats_csv(row) for row in model.mix_values),
            f"mix_weights={_floats_csv(model.mix_weights)}",
        ]
        lines += _linear_lines(model.base, prefix="base.")
        return "\n".join(lines) + "\n"
    raise ConfigError(f"cannot serialize model of type {type(model).__name__}")


def model_from_text(text: str, source: str = "<string>") -> Predictor:
    kv = parse_kv_text(text, source=source)
    kind = kv.get("type")
    if kind == LINEAR_TYPE:
        return _linear_from_kv(kv)
    if kind == MIXTURE_TYPE:
        base_kind = kv.get("base.type")
        if base_kind != LINEAR_TYPE:
            raise ConfigError(f"unsupported mixture base type {base_kind!r}")
        base = _linear_from_kv(kv, prefix="base.")
        try:
            protected = tuple(int(i) for i in kv["protected"].split(","))
            rows = [_parse_floats(part, "mix_values") for part in kv["mix_values"].split(";")]
            weights = _parse_floats(kv["mix_weights"], "mix_weights")
        except KeyError as exc:
            raise ConfigError(f"model file missing key {exc.args[0]!r}") from exc
        return MixtureModel(
            base=base,
            protected_idx=protected,
            mix_values=np.vstack(rows),
            mix_weights=weights,
        )
    raise ConfigError(f"unknown model type {kind!r}")


def save_model(model: Predictor, path: str | Path) -> None:
    Path(path).write_text(model_to_text(model))


def load_model(path: str | Path) -> Predictor:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read model file {path}: {exc}") from exc
    return model_from_text(text, source=str(path))
