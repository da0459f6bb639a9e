import numpy as np
import pytest

from hmct import (
    ChannelRealization,
    LatticeConfig,
    ScatteringProfile,
    SymbolGrid,
    ambiguity,
    apply_cfo,
    apply_channel,
    build_preamble,
    demodulate_fast,
    demodulate_naive,
    fold_segments,
    generate_pn,
    interference_coefficient,
    make_gaussian_pulse,
    modulate,
    realize,
)

from .conftest import crandn


def brute_force_modulate(grid, pulse, cfg):
    """Direct evaluation of the lattice sum, one sample at a time."""
    length = cfg.m_samples * grid.n_frames + pulse.l_psi
    x = np.zeros(length, complex)
    for k in range(length):
        acc = 0j
        for m in range(grid.n_frames):
            for n in range(cfg.n_half):
                for idx, shift, freq in ((2 * n, 0, n), (2 * n + 1, cfg.m_samples // 2, n + 0.5)):
                    j = k - m * cfg.m_samples - shift
                    if 0 <= j < pulse.l_psi and grid.symbols[m, idx] != 0:
                        acc += grid.symbols[m, idx] * pulse.samples[j] * np.exp(2j * np.pi * freq * k / cfg.nfft)
        x[k] = acc
    return x


def one_symbol(cfg, n_frames, m, n, value=1.0):
    grid = SymbolGrid.zeros(n_frames, cfg.n_sub)
    grid.symbols[m, n] = value
    return grid


def test_single_symbol_is_the_pulse(cfg, pulse):
    x = modulate(one_symbol(cfg, 1, 0, 0), pulse, cfg)
    assert x.size == cfg.m_samples + pulse.l_psi
    assert np.array_equal(x[: pulse.l_psi], pulse.samples)
    assert not np.any(x[pulse.l_psi :])


def test_second_slot_is_delayed_pulse(cfg, pulse):
    x = modulate(one_symbol(cfg, 2, 1, 0), pulse, cfg)
    assert not np.any(x[: cfg.m_samples])
    assert np.allclose(x[cfg.m_samples : cfg.m_samples + pulse.l_psi], pulse.samples, atol=1e-15)


def test_modulate_matches_brute_force(rng):
    cfg = LatticeConfig(n_sub=8, m_samples=12, nfft=6)
    pulse = make_gaussian_pulse(cfg, l_psi=30)
    grid = SymbolGrid.random_qpsk(3, 8, rng)
    assert np.allclose(modulate(grid, pulse, cfg), brute_force_modulate(grid, pulse, cfg), atol=1e-12)


def test_modulate_is_linear(cfg, pulse, rng):
    g1, g2 = SymbolGrid(crandn(rng, 3, 40)), SymbolGrid(crandn(rng, 3, 40))
    lhs = modulate(g1, pulse, cfg) + modulate(g2, pulse, cfg)
    assert np.max(np.abs(lhs - modulate(g1 + g2, pulse, cfg))) < 1e-12


def test_modulate_rejects_wrong_width(cfg, pulse):
    with pytest.raises(ValueError):
        modulate(SymbolGrid.zeros(1, 38), pulse, cfg)


@pytest.mark.parametrize("n", [0, 7, 19])
def test_naive_recovers_unit_symbol(cfg, pulse, n):
    r = modulate(one_symbol(cfg, 1, 0, 2 * n), pulse, cfg)
    assert abs(demodulate_naive(r, pulse, cfg, 0, "A")[n] - 1.0) < 1e-12


def test_zero_signal_demodulates_to_zero(cfg, pulse):
    r = np.zeros(800, complex)
    for demod in (demodulate_naive, demodulate_fast):
        for sub in "AB":
            assert not np.any(demod(r, pulse, cfg, 1, sub))


def test_fast_on_pulse_itself(cfg, pulse):
    out = demodulate_fast(pulse.samples, pulse, cfg, 0, "A")
    assert abs(out[0] - 1.0) < 1e-12
    assert np.allclose(out, demodulate_naive(pulse.samples, pulse, cfg, 0, "A"), atol=1e-12)


def test_default_fold_count(cfg, pulse):
    assert fold_segments(cfg, pulse) == 15


@pytest.mark.parametrize("demod", [demodulate_naive, demodulate_fast])
def test_short_signal_rejected(cfg, pulse, demod):
    with pytest.raises(ValueError):
        demod(np.zeros(649, complex), pulse, cfg, 0, "B")


def test_bad_sublattice_rejected(cfg, pulse):
    with pytest.raises(ValueError):
        demodulate_fast(np.zeros(800, complex), pulse, cfg, 0, "C")


def test_fast_equals_naive_random(rng):
    worst = 0.0
    for trial in range(100):
        n_sub = int(rng.choice([8, 16, 40]))
        nfft = int(rng.integers(n_sub // 2, 2 * n_sub + 1))
        m_samples = 2 * int(rng.integers(2, 80))
        cfg = LatticeConfig(n_sub=n_sub, m_samples=m_samples, nfft=nfft)
        pulse = make_gaussian_pulse(cfg, l_psi=int(rng.choice([64, 600])))
        slot, sub = int(rng.integers(0, 3)), "AB"[trial % 2]
        r = crandn(rng, cfg.m_samples * 4 + pulse.l_psi)
        naive = demodulate_naive(r, pulse, cfg, slot, sub)
        fast = demodulate_fast(r, pulse, cfg, slot, sub)
        worst = max(worst, np.max(np.abs(fast - naive)) / np.max(np.abs(naive)))
    assert worst < 1e-9


@pytest.mark.parametrize("slot", [0, 1, 2])
@pytest.mark.parametrize("df", [-6e3, 1.5e3, 4e3])
def test_cfo_phase_and_attenuation_law(cfg, pulse, slot, df):
    delta = df * cfg.ts
    for n in (0, 10, 33):
        r = apply_cfo(modulate(one_symbol(cfg, 3, slot, n, 0.6 - 0.8j), pulse, cfg), df, cfg.ts)
        out = demodulate_fast(r, pulse, cfg, slot, "B" if n % 2 else "A")[n // 2]
        ratio = out / (0.6 - 0.8j)
        start = cfg.lattice_start(slot, n)
        a0 = ambiguity(pulse, 0, delta)
        # rotation by the CFO at the window start, then the conjugate pulse ambiguity
        expected_phase = 2 * np.pi * start * delta - np.angle(a0)
        assert abs(np.angle(ratio * np.exp(-1j * expected_phase))) < 1e-9
        assert abs(abs(ratio) - abs(a0)) < 1e-12


def test_demodulated_energy_bounded_by_frame_bound(cfg, pulse, rng):
    k = np.arange(cfg.m_samples, cfg.m_samples + pulse.l_psi)
    basis = pulse.samples * np.exp(2j * np.pi * np.outer(np.arange(cfg.n_half), k) / cfg.nfft)
    upper = np.linalg.eigvalsh(basis @ basis.conj().T).max()
    for _ in range(20):
        r = crandn(rng, 800)
        out = demodulate_fast(r, pulse, cfg, 1, "A")
        assert np.sum(np.abs(out) ** 2) <= upper * np.sum(np.abs(r[k]) ** 2) * (1 + 1e-12)


def test_interference_identity_diagonal(cfg, pulse):
    ident = ChannelRealization.identity(1000)
    assert abs(interference_coefficient(ident, pulse, cfg, 0.0, (1, 4), (1, 4)) - 1.0) < 1e-12


@pytest.mark.parametrize("n_src,n_dst", [(2, 0), (0, 6), (10, 12)])
def test_interference_identity_off_diagonal(cfg, pulse, n_src, n_dst):
    ident = ChannelRealization.identity(1000)
    xi = interference_coefficient(ident, pulse, cfg, 0.0, (0, n_src), (0, n_dst))
    oracle = np.conj(ambiguity(pulse, 0, (n_src - n_dst) / 2 / cfg.nfft))
    assert abs(xi - oracle) < 1e-14


def test_single_symbol_through_dd_channel_matches_xi(cfg, pulse, rng):
    profile = ScatteringProfile()
    for trial in range(6):
        m_src, n_src = int(rng.integers(0, 3)), int(rng.integers(0, 40))
        m_dst, n_dst = int(rng.integers(0, 3)), int(rng.integers(0, 40))
        df = float(rng.uniform(-8e3, 8e3))
        c = complex(*rng.standard_normal(2))
        x = modulate(one_symbol(cfg, 3, m_src, n_src, c), pulse, cfg)
        chan = realize(profile, x.size, trial)
        r = apply_cfo(apply_channel(x, chan), df, cfg.ts)
        got = demodulate_naive(r, pulse, cfg, m_dst, "B" if n_dst % 2 else "A")[n_dst // 2]
        xi = interference_coefficient(chan, pulse, cfg, df, (m_src, n_src), (m_dst, n_dst))
        assert abs(got - c * xi) < 1e-6


def test_preamble_round_trip_matches_xi_prediction(cfg, pulse):
    frame, grid = build_preamble(generate_pn(5, length=20), cfg)
    x = modulate(grid, pulse, cfg)
    ident = ChannelRealization.identity(x.size)
    occupied = [(frame.slot, l) for l in range(40)]
    for sub in "AB":
        got = demodulate_fast(x, pulse, cfg, frame.slot, sub)
        for j in range(20):
            dst = (frame.slot, 2 * j + (sub == "B"))
            predicted = sum(
                grid.symbols[src] * interference_coefficient(ident, pulse, cfg, 0.0, src, dst) for src in occupied
            )
            assert abs(got[j] - predicted) < 1e-6
