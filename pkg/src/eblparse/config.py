"""Flat ``key=value`` configuration."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

DEFAULT_MARKERS = ("OH", "OKAY", "YEAH", "HEY", "WELL", "HUH")


@dataclass(frozen=True)
class Config:
    segmenter_markers: tuple = DEFAULT_MARKERS
    tagger_default_tag: str = "noun"
    runtime_max_deletions: int = 2
    runtime_time_budget_ms: float = 50.0
    train_top: int = 60
    train_cap_base: int = 2
    train_cap_per_generalizable: int = 2

    def with_overrides(self, **kw) -> "Config":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


_KEYS = {f.name.replace("_", ".", 1): f for f in fields(Config)}


class ConfigError(ValueError):
    pass


def load_config(text: str, base: Config | None = None) -> Config:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        f = _KEYS[key]
        try:
            if f.name == "segmenter_markers":
                values[f.name] = tuple(value.upper().split())
            elif f.type in ("int", int):
                values[f.name] = int(value)
            elif f.type in ("float", float):
                values[f.name] = float(value)
            else:
                values[f.name] = value
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value {value!r} for {key}") from None
    return replace(base or Config(), **values)
