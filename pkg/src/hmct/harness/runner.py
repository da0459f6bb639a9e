"""Monte Carlo trials and MSE sweeps."""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from ..channel import AwgnSpec, add_awgn, apply_cfo, apply_channel, realize
from ..estimator import compute_gamma, crlb, estimate_ls, estimate_pd
from ..lattice import PrototypePulse, make_gaussian_pulse
from ..modem import demodulate_fast, modulate
from ..preamble import PreambleFrame, build_preamble, generate_pn
from .config import SimConfig

__all__ = ["TrialResult", "Transmitter", "transmitter", "run_trial", "run_sweep", "sweep_csv", "CSV_HEADER"]

CSV_HEADER = ("snr_db", "channel", "method", "trials", "mse", "crlb")
METHODS = ("pd", "ls")

# independent per-trial streams: SeedSequence([master_seed, trial_index, tag])
_EPS, _CHANNEL, _NOISE = 1, 2, 3


@dataclass(frozen=True)
class TrialResult:
    eps_true: float
    eps_hat_pd: float
    eps_hat_ls: float
    snr_db: float
    channel: str
    seed: int
    trial_index: int


@dataclass(frozen=True, eq=False)
class Transmitter:
    pulse: PrototypePulse
    frame: PreambleFrame
    signal: np.ndarray


@lru_cache(maxsize=16)
def transmitter(cfg: SimConfig) -> Transmitter:
    """Pulse, preamble and modulated burst; identical for every trial of a config."""
    pulse = make_gaussian_pulse(cfg.lattice, cfg.alpha, cfg.l_psi)
    pn = generate_pn(cfg.pn_degree, cfg.pn_taps, cfg.pn_seed, cfg.n_p)
    frame, grid = build_preamble(pn, cfg.lattice, cfg.slot)
    signal = modulate(grid, pulse, cfg.lattice)
    signal.setflags(write=False)
    return Transmitter(pulse, frame, signal)


def _stream(cfg: SimConfig, trial_index: int, tag: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([cfg.master_seed, trial_index, tag])


def draw_eps(cfg: SimConfig, trial_index: int) -> float:
    if cfg.eps_mode == "fixed":
        return float(cfg.eps)
    half = cfg.eps_fraction * cfg.lattice.eps_range
    return float(np.random.default_rng(_stream(cfg, trial_index, _EPS)).uniform(-half, half))


def run_trial(cfg: SimConfig, snr_db: float, trial_index: int) -> TrialResult:
    """One preamble through channel, CFO and noise, then both estimators.

    ``snr_db`` is the per-symbol SNR after matched filtering, i.e. the noise
    variance per sample is ``sigma_s^2 / 10**(snr_db / 10)`` for the unit-energy
    pulse.  Noise draws do not depend on ``snr_db``, so a sweep uses common
    random numbers across SNR points.
    """
    tx = transmitter(cfg)
    lat = cfg.lattice
    eps = draw_eps(cfg, trial_index)
    x = tx.signal
    if cfg.channel == "dd":
        chan = realize(cfg.profile, x.size, _stream(cfg, trial_index, _CHANNEL))
        x = apply_channel(x, chan)
    r = apply_cfo(x, lat.eps_to_hz(eps), lat.ts)
    r = add_awgn(r, AwgnSpec(snr_db, signal_power=tx.frame.sigma_s2), _stream(cfg, trial_index, _NOISE))
    slot = tx.frame.slot
    d_even = demodulate_fast(r, tx.pulse, lat, slot, "A")
    d_odd = demodulate_fast(r, tx.pulse, lat, slot, "B")
    gamma = compute_gamma(d_even, d_odd, tx.frame, cfg.m_max)
    return TrialResult(
        eps_true=eps,
        eps_hat_pd=estimate_pd(gamma, lat).eps_hat,
        eps_hat_ls=estimate_ls(gamma, lat).eps_hat,
        snr_db=float(snr_db),
        channel=cfg.channel,
        seed=cfg.master_seed,
        trial_index=trial_index,
    )


def _squared_errors(args) -> list[tuple[float, float]]:
    cfg, snr_db, indices = args
    out = []
    for i in indices:
        t = run_trial(cfg, snr_db, i)
        out.append(((t.eps_hat_pd - t.eps_true) ** 2, (t.eps_hat_ls - t.eps_true) ** 2))
    return out


def run_sweep(cfg: SimConfig) -> list[dict]:
    """MSE per (SNR, method) over ``cfg.trials`` trials; writes CSV if ``cfg.out`` is set.

    Sums use ``math.fsum`` so the result does not depend on trial order or
    worker count.
    """
    rows = []
    chunks = [range(i, min(i + 250, cfg.trials)) for i in range(0, cfg.trials, 250)]
    pool = ProcessPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        for snr_db in cfg.snr_db_list:
            jobs = [(cfg, snr_db, c) for c in chunks]
            parts = pool.map(_squared_errors, jobs) if pool else map(_squared_errors, jobs)
            errors = [e for part in parts for e in part]
            bound = crlb(cfg.lattice.n_sub, cfg.lattice.m_samples, 10 ** (snr_db / 10)) if math.isfinite(snr_db) else 0.0
            for j, method in enumerate(METHODS):
                rows.append(
                    {
                        "snr_db": float(snr_db),
                        "channel": cfg.channel,
                        "method": method,
                        "trials": cfg.trials,
                        "mse": math.fsum(e[j] for e in errors) / cfg.trials,
                        "crlb": bound,
                    }
                )
    finally:
        if pool:
            pool.shutdown()
    if cfg.out:
        Path(cfg.out).write_text(sweep_csv(rows))
    return rows


def _fmt(value) -> str:
    return format(value, ".9g") if isinstance(value, float) else str(value)


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([_fmt(row[k]) for k in CSV_HEADER])
    return buf.getvalue()


def trial_dict(result: TrialResult) -> dict:
    return asdict(result)
