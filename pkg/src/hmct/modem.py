"""Modulation onto the hexagonal lattice and matched-filter demodulation.

Lattice index ``n`` follows the interleaved convention: even ``n`` is
sublattice A subcarrier ``n // 2``, odd ``n`` is sublattice B subcarrier
``n // 2`` (shifted by half a symbol in time and half a bin in frequency).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .channel import ChannelRealization
from .lattice import LatticeConfig, PrototypePulse, ambiguity

__all__ = [
    "SymbolGrid",
    "modulate",
    "signal_length",
    "demodulate_naive",
    "demodulate_fast",
    "fold_segments",
    "interference_coefficient",
    "lattice_atom",
]


@dataclass
class SymbolGrid:
    """Symbols ``c[m, n]`` for ``n_frames`` slots and ``n_sub`` lattice indices."""

    symbols: np.ndarray
    avg_power: float = 1.0

    def __post_init__(self):
        self.symbols = np.atleast_2d(np.asarray(self.symbols, dtype=np.complex128))
        if self.symbols.ndim != 2 or self.symbols.size == 0:
            raise ValueError("symbols must be a non-empty (n_frames, n_sub) array")

    @classmethod
    def zeros(cls, n_frames: int, n_sub: int, avg_power: float = 1.0) -> "SymbolGrid":
        return cls(np.zeros((n_frames, n_sub), dtype=np.complex128), avg_power)

    @classmethod
    def random_qpsk(cls, n_frames: int, n_sub: int, rng: np.random.Generator) -> "SymbolGrid":
        bits = rng.integers(0, 2, size=(2, n_frames, n_sub))
        return cls(((1 - 2 * bits[0]) + 1j * (1 - 2 * bits[1])) / np.sqrt(2), 1.0)

    @property
    def n_frames(self) -> int:
        return self.symbols.shape[0]

    @property
    def n_sub(self) -> int:
        return self.symbols.shape[1]

    def __add__(self, other: "SymbolGrid") -> "SymbolGrid":
        return SymbolGrid(self.symbols + other.symbols, self.avg_power)


def signal_length(cfg: LatticeConfig, pulse: PrototypePulse, n_frames: int) -> int:
    return cfg.m_samples * n_frames + pulse.l_psi


def lattice_atom(cfg: LatticeConfig, pulse: PrototypePulse, slot: int, n: int, length: int) -> np.ndarray:
    """Transmit function of lattice point ``(slot, n)`` as a length-``length`` vector."""
    start = cfg.lattice_start(slot, n)
    if start + pulse.l_psi > length:
        raise ValueError("lattice point does not fit in the requested length")
    k = np.arange(start, start + pulse.l_psi)
    out = np.zeros(length, dtype=np.complex128)
    out[start : start + pulse.l_psi] = pulse.samples * np.exp(2j * np.pi * cfg.subcarrier_frequency(n) * k)
    return out


def _carriers(cfg: LatticeConfig, start: int, l_psi: int, half: bool) -> np.ndarray:
    """(n_half, l_psi) matrix of exp(j 2 pi f_n k) over absolute sample indices."""
    k = np.arange(start, start + l_psi)
    f = (np.arange(cfg.n_half) + (0.5 if half else 0.0)) / cfg.nfft
    return np.exp(2j * np.pi * np.multiply.outer(f, k))


def modulate(grid: SymbolGrid, pulse: PrototypePulse, cfg: LatticeConfig) -> np.ndarray:
    """Baseband HMCT signal of length ``m_samples * n_frames + l_psi``."""
    if grid.n_sub != cfg.n_sub:
        raise ValueError(f"grid has {grid.n_sub} lattice indices, config expects {cfg.n_sub}")
    x = np.zeros(signal_length(cfg, pulse, grid.n_frames), dtype=np.complex128)
    for m in range(grid.n_frames):
        for sub, half in (("A", False), ("B", True)):
            c = grid.symbols[m, 1 if half else 0 :: 2]
            if not np.any(c):
                continue
            start = cfg.slot_start(m, sub)
            x[start : start + pulse.l_psi] += pulse.samples * (c @ _carriers(cfg, start, pulse.l_psi, half))
    return x


def _window(r: np.ndarray, cfg: LatticeConfig, pulse: PrototypePulse, slot: int, sublattice: str):
    start = cfg.slot_start(slot, sublattice)
    if slot < 0:
        raise ValueError(f"slot must be non-negative, got {slot}")
    if r.size < start + pulse.l_psi:
        raise ValueError(
            f"signal of length {r.size} too short for slot {slot}/{sublattice} "
            f"(needs {start + pulse.l_psi})"
        )
    return start, r[start : start + pulse.l_psi]


def demodulate_naive(
    r: np.ndarray, pulse: PrototypePulse, cfg: LatticeConfig, slot: int, sublattice: str
) -> np.ndarray:
    """Inner products of ``r`` with every transmit function of one slot/sublattice."""
    r = np.asarray(r, dtype=np.complex128)
    start, seg = _window(r, cfg, pulse, slot, sublattice)
    basis = pulse.samples * _carriers(cfg, start, pulse.l_psi, sublattice == "B")
    return np.conj(basis) @ seg


def fold_segments(cfg: LatticeConfig, pulse: PrototypePulse) -> int:
    """Number of length-``nfft`` segments superimposed by the fast demodulator."""
    return -(-pulse.l_psi // cfg.nfft)


@lru_cache(maxsize=64)
def _fold_weights(pulse: PrototypePulse, nfft: int, half: bool) -> np.ndarray:
    w = np.conj(pulse.samples)
    if half:
        w = w * np.exp(-1j * np.pi * np.arange(pulse.l_psi) / nfft)
    w.setflags(write=False)
    return w


def demodulate_fast(
    r: np.ndarray, pulse: PrototypePulse, cfg: LatticeConfig, slot: int, sublattice: str
) -> np.ndarray:
    """Same outputs as :func:`demodulate_naive` via product, fold and one FFT.

    The received window is multiplied by the conjugate pulse, superimposed with
    period ``nfft`` and transformed; the window offset is restored as a per-bin
    phase.  Sublattice B is pre-rotated down by half a bin.
    """
    r = np.asarray(r, dtype=np.complex128)
    start, seg = _window(r, cfg, pulse, slot, sublattice)
    half = sublattice == "B"
    folded = kernels.fold_product(seg, _fold_weights(pulse, cfg.nfft, half), cfg.nfft)
    bins = np.fft.fft(folded)[: cfg.n_half]
    n = np.arange(cfg.n_half)
    phase = np.exp(-2j * np.pi * (n + (0.5 if half else 0.0)) * start / cfg.nfft)
    return bins * phase


def interference_coefficient(
    chan: ChannelRealization,
    pulse: PrototypePulse,
    cfg: LatticeConfig,
    df: float,
    src: tuple[int, int],
    dst: tuple[int, int],
) -> complex:
    """Gain from lattice point ``src = (m', n')`` into the matched filter of ``dst = (m, n)``.

    Evaluated in the delay-Doppler domain: every (tap, oscillator) component of
    the realization contributes a phase-weighted sample of the conjugate
    ambiguity function.  ``df`` is the carrier frequency offset in Hz.
    """
    (m_src, n_src), (m_dst, n_dst) = src, dst
    for m in (m_src, m_dst):
        if m < 0:
            raise ValueError(f"slot must be non-negative, got {m}")
    f_src = cfg.subcarrier_frequency(n_src)
    f_dst = cfg.subcarrier_frequency(n_dst)
    s_src = cfg.lattice_start(m_src, n_src)
    s_dst = cfg.lattice_start(m_dst, n_dst)
    cfo = df * cfg.ts
    total = 0j
    for delay, amps, nus in zip(chan.tap_delays, chan.amplitudes, chan.doppler):
        tau = int(delay) + s_src - s_dst
        if abs(tau) >= pulse.l_psi:
            continue
        u = f_src - f_dst + nus + cfo
        a_conj = np.conj(ambiguity(pulse, tau, u))
        terms = amps * np.exp(2j * np.pi * (u * s_dst - f_src * delay)) * a_conj
        total += complex(np.sum(terms))
    return total
