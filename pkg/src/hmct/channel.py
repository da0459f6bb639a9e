"""WSSUS doubly-dispersive channel, carrier frequency offset and AWGN."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .lattice import LatticeConfig, PrototypePulse, ambiguity

__all__ = [
    "ScatteringProfile",
    "ChannelRealization",
    "AwgnSpec",
    "realize",
    "apply_channel",
    "apply_cfo",
    "add_awgn",
    "desired_gain",
]


@dataclass(frozen=True)
class ScatteringProfile:
    """Exponential power delay profile times a U-shaped (Jakes) Doppler spectrum.

    Taps sit at integer delays ``0 .. num_taps - 1`` samples.  ``tau_rms`` is the
    exponential decay constant in samples and ``f_d`` the maximum Doppler in Hz.
    """

    num_taps: int = 8
    tau_rms: float = 2.0
    f_d: float = 1e4
    ts: float = 1e-6
    n_osc: int = 32

    def __post_init__(self):
        if int(self.num_taps) != self.num_taps or self.num_taps < 1:
            raise ValueError(f"num_taps must be a positive integer, got {self.num_taps!r}")
        if not self.tau_rms > 0:
            raise ValueError(f"tau_rms must be positive, got {self.tau_rms!r}")
        if self.f_d < 0:
            raise ValueError(f"f_d must be non-negative, got {self.f_d!r}")
        if self.n_osc < 1:
            raise ValueError(f"n_osc must be positive, got {self.n_osc!r}")

    @property
    def tap_delays(self) -> np.ndarray:
        return np.arange(self.num_taps, dtype=np.int64)

    @property
    def pdp(self) -> np.ndarray:
        p = np.exp(-self.tap_delays / self.tau_rms)
        return p / p.sum()

    @property
    def tau_max(self) -> float:
        return (self.num_taps - 1) * self.ts

    @property
    def fd_norm(self) -> float:
        """Maximum Doppler in cycles/sample."""
        return self.f_d * self.ts


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One draw of the tapped-delay-line channel.

    Each tap is a sum of complex sinusoids, ``h_i[k] = sum_q amplitudes[i, q]
    exp(j 2 pi doppler[i, q] k)``; ``tap_gains`` holds it sampled over the
    realization length.
    """

    tap_delays: np.ndarray
    amplitudes: np.ndarray
    doppler: np.ndarray
    tap_gains: np.ndarray = field(repr=False)
    seed: int | None = None

    @classmethod
    def from_components(cls, tap_delays, amplitudes, doppler, length: int, seed=None) -> "ChannelRealization":
        delays = np.asarray(tap_delays, dtype=np.int64).reshape(-1)
        amps = np.atleast_2d(np.asarray(amplitudes, dtype=np.complex128))
        nus = np.atleast_2d(np.asarray(doppler, dtype=np.float64))
        if delays.size == 0:
            raise ValueError("a channel needs at least one tap")
        if amps.shape != nus.shape or amps.shape[0] != delays.size:
            raise ValueError("amplitudes/doppler must be (num_taps, n_osc)")
        if np.any(delays < 0):
            raise ValueError("tap delays must be non-negative")
        if length < 1:
            raise ValueError(f"length must be at least 1, got {length}")
        gains = kernels.sos_gains(amps, nus, int(length))
        for arr in (delays, amps, nus, gains):
            arr.setflags(write=False)
        return cls(delays, amps, nus, gains, seed)

    @classmethod
    def identity(cls, length: int) -> "ChannelRealization":
        return cls.from_components([0], [[1.0]], [[0.0]], length)

    @classmethod
    def pure_delay(cls, delay: int, length: int) -> "ChannelRealization":
        return cls.from_components([delay], [[1.0]], [[0.0]], length)

    @property
    def num_taps(self) -> int:
        return self.tap_delays.size

    @property
    def length(self) -> int:
        return self.tap_gains.shape[1]


@dataclass(frozen=True)
class AwgnSpec:
    """Noise level as an SNR in dB.

    With ``signal_power=None`` the reference power is measured from the signal
    the noise is added to; otherwise the given power is used, so
    ``noise_power = signal_power / 10**(snr_db / 10)``.
    """

    snr_db: float
    signal_power: float | None = None

    def noise_power(self, x: np.ndarray | None = None) -> float:
        if np.isposinf(self.snr_db):
            return 0.0
        ref = self.signal_power
        if ref is None:
            if x is None:
                raise ValueError("a signal is required to measure the reference power")
            ref = float(np.mean(np.abs(x) ** 2))
        return ref / 10.0 ** (self.snr_db / 10.0)


def realize(profile: ScatteringProfile, length: int, seed) -> ChannelRealization:
    """Draw a channel with random oscillator phases and arrival angles.

    Deterministic for a given ``seed`` (anything accepted by
    ``numpy.random.default_rng``).
    """
    if length < 1:
        raise ValueError(f"length must be at least 1, got {length}")
    rng = np.random.default_rng(seed)
    shape = (profile.num_taps, profile.n_osc)
    angles = rng.uniform(0.0, 2.0 * np.pi, shape)
    phases = rng.uniform(0.0, 2.0 * np.pi, shape)
    doppler = profile.fd_norm * np.cos(angles)
    scale = np.sqrt(profile.pdp / profile.n_osc)[:, None]
    amplitudes = scale * np.exp(1j * phases)
    return ChannelRealization.from_components(
        profile.tap_delays, amplitudes, doppler, length, seed if isinstance(seed, int) else None
    )


def apply_channel(x: np.ndarray, chan: ChannelRealization) -> np.ndarray:
    """``y[k] = sum_i h_i[k] x[k - d_i]``, output the same length as ``x``."""
    x = np.asarray(x, dtype=np.complex128)
    if chan.length < x.size:
        raise ValueError(f"channel realization ({chan.length}) shorter than signal ({x.size})")
    return kernels.tdl_apply(x, chan.tap_gains, chan.tap_delays)


def apply_cfo(x: np.ndarray, df: float, ts: float) -> np.ndarray:
    """Rotate by ``exp(j 2 pi df k ts)``."""
    x = np.asarray(x, dtype=np.complex128)
    if df == 0:
        return x.copy()
    return x * np.exp(2j * np.pi * df * ts * np.arange(x.size))


def add_awgn(x: np.ndarray, spec: AwgnSpec, seed) -> np.ndarray:
    """Add circular complex Gaussian noise of variance ``spec.noise_power(x)``."""
    x = np.asarray(x, dtype=np.complex128)
    var = spec.noise_power(x)
    if var == 0.0:
        return x.copy()
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((2, x.size))
    return x + np.sqrt(var / 2.0) * (noise[0] + 1j * noise[1])


def desired_gain(
    chan: ChannelRealization,
    pulse: PrototypePulse,
    cfg: LatticeConfig,
    df: float,
    slot: int,
    n: int,
) -> complex:
    """Diagonal coefficient seen by lattice point ``(slot, n)`` under CFO ``df`` (Hz).

    Factored as the CFO rotation at the pulse window start times the channel's
    attenuation, the sum of ``A*(d_i, nu_q + df ts)`` weighted by each
    component's delay and Doppler phases.
    """
    if slot < 0:
        raise ValueError(f"slot must be non-negative, got {slot}")
    f_n = cfg.subcarrier_frequency(n)
    start = cfg.lattice_start(slot, n)
    cfo = df * cfg.ts
    attenuation = 0j
    for delay, amps, nus in zip(chan.tap_delays, chan.amplitudes, chan.doppler):
        if delay >= pulse.l_psi:
            continue
        a_conj = np.conj(ambiguity(pulse, int(delay), nus + cfo))
        attenuation += complex(np.sum(amps * a_conj * np.exp(2j * np.pi * (nus * start - f_n * delay))))
    return np.exp(2j * np.pi * cfo * start) * attenuation
