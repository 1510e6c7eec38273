"""Run configuration: flat ``key = value`` text files plus command-line overrides."""
from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from .dataset import CASES, DEFAULT_SAMPLING_RATE
from .synth import SynthSpec
from .wavelet import MAX_LEVELS

ENV_DATA = "CFC_EEG_DATA"


class ConfigError(ValueError):
    pass


def _parse_levels(text) -> tuple:
    if isinstance(text, int):
        return (text,)
    text = str(text).strip()
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return tuple(out)


def _parse_cases(text) -> tuple:
    if isinstance(text, (tuple, list)):
        items = [str(t) for t in text]
    else:
        items = str(text).replace(",", " ").split()
    out = []
    for item in items:
        if item.lower() == "all":
            out.extend(CASES)
        else:
            out.append(item.upper())
    return tuple(dict.fromkeys(out))


def _parse_bool(text) -> bool:
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off", ""):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


@dataclass
class RunConfig:
    data: str | None = None
    synth: bool = False
    cases: tuple = tuple(CASES)
    levels: tuple = (7,)
    mode: str = "QDA"
    reg: float = 1e-3
    priors: str = "empirical"
    ranking: str = "fold"
    k: int = 10
    repeats: int = 10
    seed: int = 0
    n_min: int = 1
    n_max: int | None = None
    out: str = "results"
    sampling_rate_hz: float = DEFAULT_SAMPLING_RATE
    length: int = 4096
    n_jobs: int = 1
    synth_spec: SynthSpec = field(default_factory=SynthSpec)

    @property
    def level(self) -> int:
        if len(self.levels) != 1:
            raise ConfigError(f"this command takes a single level, got {self.levels}")
        return self.levels[0]

    def validate(self) -> "RunConfig":
        if self.synth and self.data:
            raise ConfigError("choose either a data manifest or --synth, not both")
        if not self.synth:
            if not self.data:
                raise ConfigError(f"no data source: pass --data/--manifest, set {ENV_DATA}, "
                                  "or use --synth")
            if not Path(self.data).exists():
                raise ConfigError(f"data manifest or directory not found: {self.data}")
            for c in self.cases:
                if c not in CASES:
                    raise ConfigError(f"unknown case {c!r}")
        if not self.levels or any(not 1 <= lv <= MAX_LEVELS for lv in self.levels):
            raise ConfigError(f"levels must lie in [1, {MAX_LEVELS}], got {self.levels}")
        if self.k < 2:
            raise ConfigError(f"k must be >= 2, got {self.k}")
        if self.repeats < 1:
            raise ConfigError(f"repeats must be >= 1, got {self.repeats}")
        if self.mode.upper() not in ("QDA", "LDA"):
            raise ConfigError(f"mode must be QDA or LDA, got {self.mode!r}")
        if not 0.0 <= self.reg < 1.0:
            raise ConfigError(f"lambda must be in [0, 1), got {self.reg}")
        if self.priors not in ("empirical", "equal"):
            raise ConfigError(f"priors must be 'empirical' or 'equal', got {self.priors!r}")
        if self.ranking not in ("fold", "global"):
            raise ConfigError(f"ranking must be 'fold' or 'global', got {self.ranking!r}")
        if self.n_min < 1 or (self.n_max is not None and self.n_max < self.n_min):
            raise ConfigError(f"bad feature-count range {self.n_min}..{self.n_max}")
        return self


_SYNTH_KEYS = {
    "synth_trials": ("n_trials", int),
    "synth_length": ("length", int),
    "synth_f_low": ("f_low", float),
    "synth_f_high": ("f_high", float),
    "synth_depth": ("depth", float),
    "synth_noise": ("noise", float),
    "synth_seed": ("seed", int),
    "synth_jitter": ("phase_jitter", float),
}

_KEYS = {
    "data": str, "manifest": str, "synth": _parse_bool, "cases": _parse_cases,
    "case": _parse_cases, "levels": _parse_levels, "mode": str, "lambda": float,
    "priors": str, "ranking": str, "k": int, "repeats": int, "seed": int,
    "n_min": int, "n_max": int, "out": str, "sampling_rate_hz": float,
    "length": int, "n_jobs": int,
}
_ALIASES = {"manifest": "data", "case": "cases", "lambda": "reg"}


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Return raw ``{key: value}`` pairs; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().lower()
        if not sep or not key:
            raise ConfigError(f"{source}:{lineno}: expected key = value")
        if key not in _KEYS and key not in _SYNTH_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def build_config(file_values: dict | None = None, overrides: dict | None = None) -> RunConfig:
    """Merge config-file values and flag overrides (flags win) into a RunConfig."""
    merged = dict(file_values or {})
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    kwargs, synth_kwargs = {}, {}
    try:
        for key, raw in merged.items():
            if key in _SYNTH_KEYS:
                name, conv = _SYNTH_KEYS[key]
                synth_kwargs[name] = conv(raw)
                continue
            conv = _KEYS[key]
            kwargs[_ALIASES.get(key, key)] = conv(raw) if isinstance(raw, str) else raw
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {key!r}: {exc}") from None
    cfg = RunConfig(**kwargs)
    if cfg.data is None and not cfg.synth and os.environ.get(ENV_DATA):
        cfg.data = os.environ[ENV_DATA]
    if synth_kwargs or cfg.synth:
        try:
            cfg.synth_spec = replace(cfg.synth_spec, levels=max(cfg.levels), **synth_kwargs)
        except ValueError as exc:
            raise ConfigError(f"synthetic spec: {exc}") from None
    return cfg


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    file_values = {}
    if path is not None:
        p = Path(path)
        try:
            file_values = parse_config_text(p.read_text(), str(p))
        except OSError as exc:
            raise ConfigError(f"cannot read config {p}: {exc.strerror}") from None
    return build_config(file_values, overrides)


def config_keys() -> list:
    return sorted(set(_KEYS) | set(_SYNTH_KEYS))


