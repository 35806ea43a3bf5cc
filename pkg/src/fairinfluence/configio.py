"""Flat key=value config files.

One ``key=value`` pair per line; blank lines and ``#`` comments are
skipped. Values stay strings here; typed accessors raise ConfigError
with the offending key in the message.
"""

from __future__ import annotations

from pathlib import Path

from .errors import ConfigError


def parse_kv_text(text: str, source: str = "<string>") -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        if key in out:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        out[key] = value.strip()
    return out


def read_kv(path: str | Path) -> dict[str, str]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_kv_text(text, source=str(path))


def format_kv(mapping: dict[str, str]) -> str:
    return "".join(f"{k}={v}\n" for k, v in mapping.items())


def write_kv(path: str | Path, mapping: dict[str, str]) -> None:
    Path(path).write_text(format_kv(mapping))


def kv_str(kv: dict[str, str], key: str, default: str | None = None) -> str:
    if key in kv:
        return kv[key]
    if default is None:
        raise ConfigError(f"missing required key {key!r}")
    return default


def kv_int(kv: dict[str, str], key: str, default: int | None = None) -> int:
    if key not in kv:
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return default
    try:
        return int(kv[key])
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: expected integer, got {kv[key]!r}") from exc


def kv_float(kv: dict[str, str], key: str, default: float | None = None) -> float:
    if key not in kv:
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return default
    try:
        return float(kv[key])
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: expected number, got {kv[key]!r}") from exc


def kv_list(kv: dict[str, str], key: str, default: str | None = None) -> list[str]:
    raw = kv_str(kv, key, default)
    if not raw:
        return []
    return [item.strip() for item in raw.split(",")]


def kv_float_list(kv: dict[str, str], key: str, default: str | None = None) -> list[float]:
    items = kv_list(kv, key, default)
    try:
        return [float(item) for item in items]
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: expected comma-separated numbers") from exc


def fmt_float(x: float) -> str:
    """Format a float with enough digits to round-trip exactly."""
    return format(float(x), ".17g")
