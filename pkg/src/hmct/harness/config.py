"""Simulation configuration and its flat ``key = value`` file format.

Example::

    # AWGN sweep at the default lattice
    channel = awgn
    snr_db = 0, 5, 10, 15, 20
    trials = 2000
    eps = 0.05
    master_seed = 7
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path

from ..channel import ScatteringProfile
from ..lattice import LatticeConfig

__all__ = ["ConfigError", "SimConfig", "load_config", "parse_config", "CHANNELS", "EPS_MODES"]

CHANNELS = ("awgn", "dd")
EPS_MODES = ("fixed", "uniform")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SimConfig:
    lattice: LatticeConfig = field(default_factory=LatticeConfig)
    alpha: float | None = None
    l_psi: int = 600
    pn_degree: int = 5
    pn_taps: tuple[int, ...] | None = None
    pn_seed: int | None = None
    n_p: int = 20
    slot: int = 1
    channel: str = "awgn"
    profile: ScatteringProfile = field(default_factory=ScatteringProfile)
    snr_db_list: tuple[float, ...] = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    trials: int = 1000
    eps_mode: str = "fixed"
    eps: float = 0.05
    eps_fraction: float = 0.9
    master_seed: int = 0
    m_max: int | None = None
    out: str | None = None
    fc: float = 5e9
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.channel not in CHANNELS:
            raise ConfigError(f"channel must be one of {CHANNELS}, got {self.channel!r}")
        if self.eps_mode not in EPS_MODES:
            raise ConfigError(f"eps_mode must be one of {EPS_MODES}, got {self.eps_mode!r}")
        if not 0 < self.eps_fraction <= 0.9:
            raise ConfigError(f"eps_fraction must lie in (0, 0.9], got {self.eps_fraction}")
        if not self.snr_db_list:
            raise ConfigError("snr_db list is empty")
        if any(math.isnan(s) or s == -math.inf for s in self.snr_db_list):
            raise ConfigError(f"invalid SNR values {self.snr_db_list}")
        if self.n_p > self.lattice.n_half:
            raise ConfigError(f"n_p={self.n_p} exceeds n_sub/2={self.lattice.n_half}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")

    def replace(self, **changes) -> "SimConfig":
        return dataclasses.replace(self, **changes)


def _int_list(s: str) -> tuple[int, ...]:
    return tuple(int(v) for v in _split(s))


def _float_list(s: str) -> tuple[float, ...]:
    return tuple(float(v) for v in _split(s))


def _split(s: str) -> list[str]:
    return [v for v in s.replace(",", " ").split() if v]


def _opt(parse):
    return lambda s: None if s.strip().lower() in ("none", "") else parse(s)


# file key -> (section, field, parser); section None means a top-level field
_KEYS = {
    "n_sub": ("lattice", "n_sub", int),
    "m_samples": ("lattice", "m_samples", int),
    "nfft": ("lattice", "nfft", int),
    "ts": ("lattice", "ts", float),
    "num_taps": ("profile", "num_taps", int),
    "tau_rms": ("profile", "tau_rms", float),
    "f_d": ("profile", "f_d", float),
    "n_osc": ("profile", "n_osc", int),
    "alpha": (None, "alpha", _opt(float)),
    "l_psi": (None, "l_psi", int),
    "pn_degree": (None, "pn_degree", int),
    "pn_taps": (None, "pn_taps", _opt(_int_list)),
    "pn_seed": (None, "pn_seed", _opt(lambda s: int(s, 0))),
    "n_p": (None, "n_p", int),
    "slot": (None, "slot", int),
    "channel": (None, "channel", lambda s: s.strip().lower()),
    "snr_db": (None, "snr_db_list", _float_list),
    "trials": (None, "trials", int),
    "eps_mode": (None, "eps_mode", lambda s: s.strip().lower()),
    "eps": (None, "eps", float),
    "eps_fraction": (None, "eps_fraction", float),
    "master_seed": (None, "master_seed", int),
    "m_max": (None, "m_max", _opt(int)),
    "out": (None, "out", _opt(str.strip)),
    "fc": (None, "fc", float),
    "workers": (None, "workers", int),
}


def parse_config(text: str, base: SimConfig | None = None) -> SimConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    top: dict = {}
    sections: dict[str, dict] = {"lattice": {}, "profile": {}}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        section, name, parse = _KEYS[key]
        try:
            parsed = parse(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from exc
        (sections[section] if section else top)[name] = parsed

    base = base or SimConfig()
    try:
        lattice = dataclasses.replace(base.lattice, **sections["lattice"])
        profile = dataclasses.replace(base.profile, **sections["profile"])
        if "ts" in sections["lattice"] and "ts" not in sections["profile"]:
            profile = dataclasses.replace(profile, ts=lattice.ts)
        return dataclasses.replace(base, lattice=lattice, profile=profile, **top)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str | Path, base: SimConfig | None = None) -> SimConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    return parse_config(text, base)
