"""Preamble correlation statistic, the two fine CFO estimators and their bound.

Sign convention: with the CFO applied as ``exp(+j 2 pi df k ts)`` the
noiseless statistic has ``arg(gamma_0) = +2 pi M eps / N`` (``M`` samples per
symbol, ``N`` subcarriers), so both estimators map that phase to ``+eps``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import LatticeConfig
from .preamble import PreambleFrame

__all__ = [
    "PHASE_SIGN",
    "InsufficientStatisticError",
    "GammaStatistics",
    "PhaseFit",
    "EstimateReport",
    "compute_gamma",
    "fit_phase",
    "estimate_pd",
    "estimate_ls",
    "crlb",
]

# +1: arg(gamma_0) grows with eps under apply_cfo's exp(+j...) rotation.
PHASE_SIGN = 1.0


class InsufficientStatisticError(ValueError):
    """Fewer than two correlation lags are available."""


@dataclass(frozen=True)
class GammaStatistics:
    gamma: np.ndarray
    valid_counts: np.ndarray

    @property
    def m_max(self) -> int:
        return self.gamma.size

    @property
    def phases(self) -> np.ndarray:
        """Unwrapped ``arg(gamma_m)``; the first entry is left in (-pi, pi]."""
        return np.unwrap(np.angle(self.gamma))


@dataclass(frozen=True)
class PhaseFit:
    theta0: float
    theta1: float
    residuals: np.ndarray


@dataclass(frozen=True)
class EstimateReport:
    eps_hat: float
    method: str
    fit: PhaseFit
    in_range: bool


def compute_gamma(
    dhat_even: np.ndarray, dhat_odd: np.ndarray, frame: PreambleFrame, m_max: int | None = None
) -> GammaStatistics:
    """Correlate de-rotated odd (B) and even (A) training values at lag ``m``.

    ``gamma_m = sum_l b[l + m] conj(a[l])`` where ``a[l] = dhat_even[l] exp(-j
    arg D_{2l})`` and ``b[l] = dhat_odd[l] exp(-j arg D_{2l+1})``.  Only pairs
    inside the training range are summed; lags with no pair are dropped.
    """
    n_p = frame.n_p
    if m_max is None:
        m_max = max(n_p // 2, 1)
    if m_max < 1:
        raise ValueError(f"m_max must be positive, got {m_max}")
    dhat_even = np.asarray(dhat_even, dtype=np.complex128)
    dhat_odd = np.asarray(dhat_odd, dtype=np.complex128)
    if dhat_even.size < n_p or dhat_odd.size < n_p:
        raise ValueError("demodulated sequences shorter than the training sequence")
    a = dhat_even[:n_p] * np.exp(-1j * np.angle(frame.even))
    b = dhat_odd[:n_p] * np.exp(-1j * np.angle(frame.odd))
    m_max = min(m_max, n_p)
    gamma = np.array([np.vdot(a[: n_p - m], b[m:]) for m in range(m_max)])
    counts = n_p - np.arange(m_max)
    return GammaStatistics(gamma, counts)


def fit_phase(phases: np.ndarray) -> PhaseFit:
    """Least-squares fit of ``phases[m] ~ theta0 + (m + 1) theta1``."""
    phases = np.asarray(phases, dtype=float)
    m = np.arange(phases.size, dtype=float)
    design = np.column_stack([np.ones_like(m), m])
    # normal equations (C^T C)^-1 C^T phi; C^T C is 2x2 and well conditioned
    intercept, slope = np.linalg.solve(design.T @ design, design.T @ phases)
    theta1 = slope
    theta0 = intercept - slope
    residuals = phases - (theta0 + (m + 1) * theta1)
    theta0 = float(np.angle(np.exp(1j * theta0)))
    return PhaseFit(theta0, float(theta1), residuals)


def _report(eps_hat: float, method: str, fit: PhaseFit, cfg: LatticeConfig) -> EstimateReport:
    return EstimateReport(float(eps_hat), method, fit, bool(abs(eps_hat) <= cfg.eps_range))


def _require_lags(gamma: GammaStatistics):
    if gamma.m_max < 2:
        raise InsufficientStatisticError(f"need at least 2 lags, got {gamma.m_max}")


def estimate_pd(gamma: GammaStatistics, cfg: LatticeConfig) -> EstimateReport:
    """Phase-differential estimate: intercept phase minus the mean lag increment."""
    _require_lags(gamma)
    phases = gamma.phases
    slope = float(np.mean(np.diff(phases)))
    eps_hat = PHASE_SIGN * cfg.n_sub * (phases[0] - slope) / (2.0 * np.pi * cfg.m_samples)
    m = np.arange(phases.size)
    theta0 = float(np.angle(np.exp(1j * (phases[0] - slope))))
    fit = PhaseFit(theta0, slope, phases - (phases[0] - slope + (m + 1) * slope))
    return _report(eps_hat, "pd", fit, cfg)


def estimate_ls(gamma: GammaStatistics, cfg: LatticeConfig) -> EstimateReport:
    """Least-squares estimate: ``arg(gamma_0)`` corrected by the fitted lag slope."""
    _require_lags(gamma)
    phases = gamma.phases
    fit = fit_phase(phases)
    eps_hat = PHASE_SIGN * cfg.n_sub * (phases[0] - fit.theta1) / (2.0 * np.pi * cfg.m_samples)
    return _report(eps_hat, "ls", fit, cfg)


def crlb(n_sub: int, m_samples: int, snr_linear):
    """Lower bound ``N / (2 pi^2 M^2 SNR)`` on the normalized-CFO MSE.

    ``snr_linear`` is the per-symbol SNR after matched filtering.
    """
    snr = np.asarray(snr_linear, dtype=float)
    if np.any(~(snr > 0)):
        raise ValueError(f"SNR must be positive, got {snr_linear!r}")
    out = n_sub / (2.0 * np.pi**2 * m_samples**2 * snr)
    return float(out) if out.ndim == 0 else out
