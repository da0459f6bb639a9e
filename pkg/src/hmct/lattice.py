"""Hexagonal time-frequency lattice geometry and the prototype pulse.

All quantities are expressed on the sample grid: delays in samples, Doppler
and frequency offsets in cycles per sample unless a name says otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LatticeConfig",
    "PrototypePulse",
    "make_gaussian_pulse",
    "normalize_energy",
    "ambiguity",
    "gaussian_ambiguity_magnitude",
]


@dataclass(frozen=True)
class LatticeConfig:
    """Discrete hexagonal lattice.

    Sublattice A carries symbols at ``(m * m_samples, n * f_sub)``, sublattice B
    at ``(m * m_samples + m_samples / 2, (n + 1/2) * f_sub)``.

    Parameters
    ----------
    n_sub : int
        Total subcarrier count over both sublattices.
    m_samples : int
        Symbol period in samples.
    nfft : int
        FFT length, i.e. ``1 / (f_sub * ts)``.
    ts : float
        Sample period in seconds.
    """

    n_sub: int = 40
    m_samples: int = 100
    nfft: int = 40
    ts: float = 1e-6

    def __post_init__(self):
        for name in ("n_sub", "m_samples", "nfft"):
            value = getattr(self, name)
            if int(value) != value or value <= 0:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if self.n_sub % 2:
            raise ValueError(f"n_sub must be even, got {self.n_sub}")
        if self.m_samples % 2:
            raise ValueError(f"m_samples must be even, got {self.m_samples}")
        if self.n_sub // 2 > self.nfft:
            raise ValueError(
                f"{self.n_sub // 2} subcarriers per sublattice do not fit nfft={self.nfft}"
            )
        if not self.ts > 0:
            raise ValueError(f"ts must be positive, got {self.ts!r}")

    @classmethod
    def from_physical(cls, n_sub: int, f_sub: float, t_sym: float, ts: float) -> "LatticeConfig":
        """Build a config from subcarrier spacing and symbol period in SI units."""
        nfft = 1.0 / (f_sub * ts)
        m_samples = t_sym / ts
        if abs(nfft - round(nfft)) > 1e-9 * nfft or abs(m_samples - round(m_samples)) > 1e-9 * m_samples:
            raise ValueError("f_sub and t_sym must map to an integer number of samples")
        return cls(n_sub=n_sub, m_samples=int(round(m_samples)), nfft=int(round(nfft)), ts=ts)

    @property
    def n_half(self) -> int:
        """Subcarriers per sublattice."""
        return self.n_sub // 2

    @property
    def half_shift(self) -> int:
        return self.m_samples // 2

    @property
    def f_sub(self) -> float:
        return 1.0 / (self.nfft * self.ts)

    @property
    def t_sym(self) -> float:
        return self.m_samples * self.ts

    @property
    def rho(self) -> float:
        """Lattice density 2 / (T F); 0.8 for the default config."""
        return 2.0 * self.nfft / self.m_samples

    @property
    def eps_range(self) -> float:
        """Half-width of the unambiguous normalized-CFO interval, N / (2M)."""
        return self.n_sub / (2.0 * self.m_samples)

    def eps_to_hz(self, eps: float) -> float:
        return 2.0 * eps / (self.ts * self.n_sub)

    def hz_to_eps(self, df: float) -> float:
        return df * self.ts * self.n_sub / 2.0

    def slot_start(self, slot: int, sublattice: str) -> int:
        """First sample of the pulse window for ``slot`` on ``sublattice`` ('A' or 'B')."""
        if sublattice == "A":
            return slot * self.m_samples
        if sublattice == "B":
            return slot * self.m_samples + self.half_shift
        raise ValueError(f"sublattice must be 'A' or 'B', got {sublattice!r}")

    def subcarrier_frequency(self, n: int) -> float:
        """Frequency in cycles/sample of lattice index ``n`` (even: A, odd: B)."""
        if not 0 <= n < self.n_sub:
            raise ValueError(f"lattice index {n} outside [0, {self.n_sub})")
        return (n // 2 + 0.5 * (n % 2)) / self.nfft

    def lattice_start(self, slot: int, n: int) -> int:
        return self.slot_start(slot, "B" if n % 2 else "A")


@dataclass(frozen=True, eq=False)
class PrototypePulse:
    """Truncated, unit-energy prototype pulse sampled on ``[0, l_psi)``."""

    samples: np.ndarray
    alpha: float
    ts: float = 1e-6
    l_psi: int = field(init=False)

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.complex128)
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "l_psi", samples.size)

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2))

    def __len__(self) -> int:
        return self.l_psi


def normalize_energy(samples: np.ndarray) -> np.ndarray:
    """Scale to unit energy; already-normalized input is returned unchanged."""
    samples = np.asarray(samples, dtype=np.complex128)
    energy = float(np.sum(np.abs(samples) ** 2))
    if energy == 0.0:
        raise ValueError("cannot normalize an all-zero pulse")
    # a second pass would only perturb the last ulp
    if abs(energy - 1.0) <= 8 * np.finfo(float).eps * samples.size:
        return samples.copy()
    return samples / np.sqrt(energy)


def make_gaussian_pulse(
    cfg: LatticeConfig, alpha: float | None = None, l_psi: int = 600
) -> PrototypePulse:
    """Centered, truncated Gaussian ``(2 alpha)^(1/4) exp(-pi alpha t^2)``.

    ``alpha`` is in 1/s^2 and defaults to ``f_sub / t_sym``, which balances the
    pulse's time and frequency spread against the lattice spacing.
    """
    if alpha is None:
        alpha = cfg.f_sub / cfg.t_sym
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha!r}")
    if int(l_psi) != l_psi or l_psi < 1:
        raise ValueError(f"l_psi must be a positive integer, got {l_psi!r}")
    t = (np.arange(l_psi) - (l_psi - 1) / 2.0) * cfg.ts
    raw = (2.0 * alpha) ** 0.25 * np.exp(-np.pi * alpha * t**2)
    return PrototypePulse(normalize_energy(raw), float(alpha), cfg.ts)


def ambiguity(pulse: PrototypePulse, tau: int, nu):
    """Discrete ambiguity function ``sum_k psi[k] psi*[k - tau] exp(-j 2 pi nu k)``.

    ``tau`` is an integer delay in samples, ``nu`` a frequency in cycles/sample
    (scalar or array).  Returns 0 when the shifted copies do not overlap.
    """
    if int(tau) != tau:
        raise ValueError(f"tau must be an integer number of samples, got {tau!r}")
    tau = int(tau)
    psi = pulse.samples
    nu_arr = np.asarray(nu, dtype=float)
    if abs(tau) >= pulse.l_psi:
        out = np.zeros(nu_arr.shape, dtype=np.complex128)
        return out if out.ndim else complex(0.0)
    k = np.arange(max(0, tau), min(pulse.l_psi, pulse.l_psi + tau))
    prod = psi[k] * np.conj(psi[k - tau])
    phase = np.exp(-2j * np.pi * np.multiply.outer(nu_arr, k))
    out = phase @ prod
    return out if np.ndim(out) else complex(out)


def gaussian_ambiguity_magnitude(alpha: float, ts: float, tau, nu):
    """Closed-form ``|A|`` of the untruncated continuous Gaussian pulse.

    ``tau`` in samples, ``nu`` in cycles/sample.
    """
    tau_s = np.asarray(tau, dtype=float) * ts
    f_hz = np.asarray(nu, dtype=float) / ts
    return np.exp(-0.5 * np.pi * (alpha * tau_s**2 + f_hz**2 / alpha))
