"""PN training sequences and their placement on the lattice."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import LatticeConfig
from .modem import SymbolGrid

__all__ = [
    "PRIMITIVE_TAPS",
    "PnSequence",
    "PreambleFrame",
    "generate_pn",
    "build_preamble",
]

# Fibonacci feedback taps of primitive polynomials, x^r + ... + 1.
PRIMITIVE_TAPS: dict[int, tuple[int, ...]] = {
    3: (3, 2),
    4: (4, 3),
    5: (5, 3),
    6: (6, 5),
    7: (7, 6),
    8: (8, 6, 5, 4),
    9: (9, 5),
    10: (10, 7),
}


@dataclass(frozen=True)
class PnSequence:
    degree: int
    taps: tuple[int, ...]
    seed_state: int
    values: np.ndarray

    def __len__(self) -> int:
        return self.values.size

    @property
    def period(self) -> int:
        """Maximal-length period ``2**degree - 1`` (valid for primitive taps)."""
        return 2**self.degree - 1


def generate_pn(degree: int, taps=None, seed_state: int | None = None, length: int | None = None) -> PnSequence:
    """Run a Fibonacci LFSR and map output bits 0 -> +1, 1 -> -1.

    Stage ``degree`` is the output; the feedback is the XOR of the tapped stages
    (1-based).  ``seed_state`` bit ``i - 1`` initialises stage ``i`` and defaults
    to all ones.  ``length`` defaults to one period.
    """
    if taps is None:
        try:
            taps = PRIMITIVE_TAPS[degree]
        except KeyError:
            raise ValueError(f"no built-in taps for degree {degree}; pass taps explicitly") from None
    taps = tuple(int(t) for t in taps)
    if degree < 1 or not taps or any(not 1 <= t <= degree for t in taps):
        raise ValueError(f"taps {taps} invalid for a degree-{degree} register")
    if seed_state is None:
        seed_state = 2**degree - 1
    seed_state = int(seed_state) & (2**degree - 1)
    if seed_state == 0:
        raise ValueError("LFSR seed state must be non-zero")
    if length is None:
        length = 2**degree - 1
    if length < 0:
        raise ValueError(f"length must be non-negative, got {length}")

    stages = [(seed_state >> i) & 1 for i in range(degree)]
    bits = np.empty(length, dtype=np.int8)
    for k in range(length):
        bits[k] = stages[-1]
        fb = 0
        for t in taps:
            fb ^= stages[t - 1]
        stages = [fb] + stages[:-1]
    values = 1.0 - 2.0 * bits
    values.setflags(write=False)
    return PnSequence(degree, taps, seed_state, values)


@dataclass(frozen=True)
class PreambleFrame:
    """Frequency-domain training values ``d[l] = p1[l // 2]`` for ``l < 2 n_p``."""

    p1: np.ndarray
    p2: np.ndarray
    d: np.ndarray
    slot: int
    sigma_s2: float

    @property
    def n_p(self) -> int:
        return self.p1.size

    def value(self, l: int) -> complex:
        """``D_l`` for any index; zero outside the occupied range."""
        return complex(self.d[l]) if 0 <= l < self.d.size else 0j

    @property
    def even(self) -> np.ndarray:
        """Values carried by sublattice A (indices ``2l``)."""
        return self.d[0::2]

    @property
    def odd(self) -> np.ndarray:
        """Values carried by sublattice B (indices ``2l + 1``)."""
        return self.d[1::2]


def build_preamble(pn: PnSequence, cfg: LatticeConfig, slot: int = 1) -> tuple[PreambleFrame, SymbolGrid]:
    """Map a PN sequence onto both sublattices of ``slot``.

    Even training index ``l`` goes to sublattice A subcarrier ``l // 2``, odd
    ``l`` to sublattice B subcarrier ``l // 2``; slots before ``slot`` are
    left empty.
    """
    p1 = np.asarray(pn.values, dtype=float)
    n_p = p1.size
    if n_p < 1:
        raise ValueError("training sequence is empty")
    if n_p > cfg.n_half:
        raise ValueError(f"training length {n_p} exceeds n_sub/2 = {cfg.n_half}")
    if slot < 0:
        raise ValueError(f"slot must be non-negative, got {slot}")
    d = np.repeat(p1, 2).astype(np.complex128)
    grid = SymbolGrid.zeros(slot + 1, cfg.n_sub)
    grid.symbols[slot, : 2 * n_p] = d
    sigma_s2 = float(np.mean(np.abs(d) ** 2))
    for arr in (p1, d):
        arr.setflags(write=False)
    return PreambleFrame(p1=p1, p2=p1.copy(), d=d, slot=slot, sigma_s2=sigma_s2), grid
