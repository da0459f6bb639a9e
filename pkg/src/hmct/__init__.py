"""Baseband simulation of carrier frequency offset estimation for
hexagonal multicarrier transmission."""
from .channel import (
    AwgnSpec,
    ChannelRealization,
    ScatteringProfile,
    add_awgn,
    apply_cfo,
    apply_channel,
    desired_gain,
    realize,
)
from .estimator import (
    EstimateReport,
    GammaStatistics,
    PHASE_SIGN,
    InsufficientStatisticError,
    PhaseFit,
    compute_gamma,
    crlb,
    estimate_ls,
    estimate_pd,
    fit_phase,
)
from .kernels import BACKEND
from .lattice import LatticeConfig, PrototypePulse, ambiguity, make_gaussian_pulse
from .modem import (
    SymbolGrid,
    demodulate_fast,
    demodulate_naive,
    fold_segments,
    interference_coefficient,
    modulate,
)
from .preamble import PnSequence, PreambleFrame, build_preamble, generate_pn

__version__ = "0.1.0"
