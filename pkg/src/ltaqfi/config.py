"""Run configuration: a flat ``key = value`` text format."""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional

from .models import LMG, DrivenBEC, StaticBEC

MODELS = ("static-bec", "driven-bec", "lmg")
ESTIMATORS = ("time", "diagonal")
# sweep axes each model accepts; "q_over_qc" and "m" are resolved through the
# closed-form critical values
SWEEP_AXES = {
    "static-bec": ("q", "q_over_qc"),
    "driven-bec": ("eta", "m"),
    "lmg": ("chi", "m"),
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    model: str = "static-bec"
    N: int = 1000
    # static BEC
    c: float = 1.0
    q: Optional[float] = None
    # driven BEC
    G0: float = 1.0
    eta: Optional[float] = None
    # LMG
    chi: Optional[float] = None
    Omega: float = 1.0
    # initial coherent state
    rho0: float = 0.6
    theta: float = 0.0
    z0: float = 0.6
    phi: float = 0.0
    # time grid and estimator
    steps: int = 10_000
    dt: float = 10.0
    estimator: str = "time"
    # sweep axis
    sweep: Optional[str] = None
    sweep_min: Optional[float] = None
    sweep_max: Optional[float] = None
    sweep_points: int = 1
    store_pbar: bool = False
    out: Optional[str] = None

    def validate(self) -> "RunConfig":
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.estimator not in ESTIMATORS:
            raise ConfigError(f"estimator must be one of {ESTIMATORS}, got {self.estimator!r}")
        if self.N < 1 or (self.model != "lmg" and self.N % 2):
            raise ConfigError(f"invalid N = {self.N} for {self.model}")
        if self.steps < 1 or not self.dt > 0:
            raise ConfigError("steps must be >= 1 and dt > 0")
        if self.sweep_points < 1:
            raise ConfigError("sweep_points must be >= 1")
        if self.sweep is not None:
            if self.sweep not in SWEEP_AXES[self.model]:
                raise ConfigError(
                    f"sweep axis {self.sweep!r} not available for {self.model}; "
                    f"choose from {SWEEP_AXES[self.model]}"
                )
            if self.sweep_min is None or self.sweep_max is None:
                raise ConfigError("sweep needs sweep_min and sweep_max")
            if self.sweep_points > 1 and not self.sweep_max > self.sweep_min:
                raise ConfigError("sweep_max must exceed sweep_min")
        else:
            needed = {"static-bec": "q", "driven-bec": "eta", "lmg": "chi"}[self.model]
            if getattr(self, needed) is None:
                raise ConfigError(f"{self.model} needs {needed} (or a sweep axis)")
        if self.model in ("static-bec", "driven-bec") and not 0.0 <= self.rho0 <= 1.0:
            raise ConfigError("rho0 must lie in [0, 1]")
        if self.model == "lmg" and not -1.0 <= self.z0 <= 1.0:
            raise ConfigError("z0 must lie in [-1, 1]")
        return self

    def params(self):
        """Model parameter record for a config with every parameter resolved."""
        if self.model == "static-bec":
            return StaticBEC(self.c, self.q, self.rho0, self.theta)
        if self.model == "driven-bec":
            return DrivenBEC(self.G0, self.eta * self.G0, self.rho0, self.theta)
        return LMG(self.chi, self.z0, self.phi, self.Omega)

    def sweep_values(self) -> list[float]:
        if self.sweep is None:
            return []
        if self.sweep_points == 1:
            return [float(self.sweep_min)]
        step = (self.sweep_max - self.sweep_min) / (self.sweep_points - 1)
        return [self.sweep_min + i * step for i in range(self.sweep_points)]

    def with_(self, **kw) -> "RunConfig":
        return replace(self, **kw)


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    raw = raw.strip()
    if raw.lower() in ("none", ""):
        return None
    if "bool" in kind:
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{key}: expected a boolean, got {raw!r}")
    if "int" in kind:
        value = float(raw)
        if value != int(value):
            raise ConfigError(f"{key}: expected an integer, got {raw!r}")
        return int(value)
    if "float" in kind:
        value = float(raw)
        if not math.isfinite(value):
            raise ConfigError(f"{key}: value must be finite")
        return value
    return raw


ALIASES = {"rho0_init": "rho0", "z_init": "z0", "theta_init": "theta", "phi_init": "phi"}


def parse_config(text: str, base: Optional[RunConfig] = None) -> RunConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    driven_gj = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, raw = (s.strip() for s in line.split("=", 1))
        key = ALIASES.get(key, key)
        if key == "Gj":
            driven_gj = float(raw)
            continue
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = _coerce(key, raw)
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"line {lineno}: bad value for {key}: {raw!r}") from exc
    cfg = replace(base or RunConfig(), **values)
    if driven_gj is not None:
        cfg = replace(cfg, eta=driven_gj / cfg.G0)
    return cfg.validate()


def load_config(path: str | Path, base: Optional[RunConfig] = None) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, base)
