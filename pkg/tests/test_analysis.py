import numpy as np
import pytest
from scipy import integrate

from ambc.analysis import (LinkBudget, ber_camf_conditional, ber_cuif_chiani,
                           ber_cuif_closed, ber_cuif_conditional,
                           ber_unknown_symbols, q_function,
                           snr_db_to_gamma_x, theorem1_gap)
from ambc.channel import cir_to_freq, sample_cir, CirProfile
from ambc.config import E_X, SimParams


def budget_at(snr_db, L=32, P=4, alpha_sq=0.2):
    return LinkBudget.from_sim(SimParams(L=L, P=P, alpha_sq=alpha_sq,
                                         snr_db=snr_db))


def test_q_function_half_at_zero():
    assert q_function(0.0) == 0.5


def test_q_function_tail_limits():
    assert q_function(-8.0) > 1 - 1e-14
    assert q_function(40.0) < 1e-300


def test_q_function_against_quadrature():
    for x in (-2.0, -0.5, 0.3, 1.959964, 3.0):
        val, _ = integrate.quad(
            lambda t: np.exp(-t * t / 2) / np.sqrt(2 * np.pi), x, np.inf)
        assert abs(q_function(x) - val) < 1e-12
    assert abs(q_function(1.959964) - 0.025) < 1e-6


def test_gamma_x_conversion():
    assert np.isclose(snr_db_to_gamma_x(6.0), 2 * 10 ** 0.6)
    assert np.isclose(budget_at(6.0).gamma_x, 2 * 10 ** 0.6)


def test_conditional_cuif_no_signal():
    G = np.ones(8)
    assert ber_cuif_conditional(G, 0.0, E_X, 1.0) == 0.5


def test_conditional_cuif_forms_agree():
    rng = np.random.default_rng(0)
    g = sample_cir(CirProfile.uniform(4), rng)
    G = cir_to_freq(g, 32)
    beta, n0 = 0.4 + 0.2j, 0.5
    via_l = ber_cuif_conditional(G, beta, E_X, n0)
    arg = 2 * abs(beta) ** 2 * 32 * (E_X / n0) * np.sum(np.abs(g) ** 2)
    via_p = float(q_function(np.sqrt(arg)))
    assert abs(via_l - via_p) < 1e-10


def test_conditional_cuif_noiseless_limit():
    G = np.ones(8)
    assert ber_cuif_conditional(G, 0.5, E_X, 1e-12) < 1e-300


def test_camf_conditional_flat_equals_cuif():
    L = 16
    G = np.exp(1j * np.linspace(0, 3, L))  # flat magnitude
    beta = 0.4 * np.exp(0.3j)
    kappa = np.sqrt(L) / np.linalg.norm(G)
    camf = ber_camf_conditional(G, beta * kappa, E_X, 0.7)
    cuif = ber_cuif_conditional(G, beta, E_X, 0.7)
    assert abs(camf - cuif) < 1e-12


def test_camf_conditional_never_worse():
    rng = np.random.default_rng(1)
    for _ in range(200):
        g = sample_cir(CirProfile.uniform(4), rng)
        G = cir_to_freq(g, 32)
        beta = 0.447
        kappa = np.sqrt(32) / np.linalg.norm(G)
        assert (ber_camf_conditional(G, beta * kappa, E_X, 0.5)
                <= ber_cuif_conditional(G, beta, E_X, 0.5) + 1e-15)


def test_camf_conditional_no_signal():
    assert ber_camf_conditional(np.ones(8), 0.0, E_X, 1.0) == 0.5


def test_chiani_zero_snr_limit():
    b = LinkBudget(L=32, P_g=4, P_h=4, alpha_sq=0.2, gamma_x=1e-12,
                   sigma_g=np.full(4, 0.25), sigma_h=np.full(4, 0.25))
    assert abs(ber_cuif_chiani(b) - 1 / 3) < 1e-9


def test_chiani_close_to_closed_form():
    b = budget_at(6.0)
    chiani = ber_cuif_chiani(b)
    closed = ber_cuif_closed(b)
    assert abs(chiani - closed) / closed < 0.25


def test_chiani_within_25pct_over_snr_range():
    for snr in np.arange(0.0, 10.5, 0.5):
        b = budget_at(snr)
        assert (abs(ber_cuif_chiani(b) - ber_cuif_closed(b))
                / ber_cuif_closed(b) < 0.25)


def test_chiani_decreases_with_L():
    assert ber_cuif_chiani(budget_at(6.0, L=64)) < ber_cuif_chiani(
        budget_at(6.0, L=32))


def test_closed_form_single_branch():
    b = budget_at(4.0, P=1)
    branch = b.L * b.beta_sq * b.gamma_x * b.sigma_g[0]
    mu = np.sqrt(branch / (1 + branch))
    assert np.isclose(ber_cuif_closed(b), (1 - mu) / 2)


def test_closed_form_high_snr_limit():
    assert ber_cuif_closed(budget_at(80.0)) < 1e-12


def test_closed_form_rejects_unequal_variances():
    b = LinkBudget(L=32, P_g=2, P_h=2, alpha_sq=0.2, gamma_x=5.0,
                   sigma_g=np.array([0.7, 0.3]), sigma_h=np.array([0.5, 0.5]))
    with pytest.raises(ValueError):
        ber_cuif_closed(b)


def test_closed_form_matches_conditional_expectation():
    # Monte Carlo mean of the conditional BER over channel draws
    b = budget_at(4.0)
    rng = np.random.default_rng(2)
    n = 10 ** 5
    g = np.sqrt(0.25 / 2) * (rng.standard_normal((n, 4))
                             + 1j * rng.standard_normal((n, 4)))
    arg = 2 * b.beta_sq * b.L * b.gamma_x * np.sum(np.abs(g) ** 2, axis=1)
    samples = q_function(np.sqrt(arg))
    mean = samples.mean()
    se = samples.std(ddof=1) / np.sqrt(n)
    assert abs(mean - ber_cuif_closed(b)) < 3 * se


def test_unknown_symbols_limits():
    b = budget_at(6.0)
    # the mixture sits between the known-symbol closed form and 0.5
    mix = ber_unknown_symbols(b)
    closed = ber_cuif_closed(b)
    assert closed < mix < 0.5


def test_unknown_symbols_strictly_above_closed_form():
    b = budget_at(6.0)
    assert ber_unknown_symbols(b) > ber_cuif_closed(b)


def test_unknown_symbols_k0_term():
    # with a single usable subcarrier budget, result approaches 0.5
    b = budget_at(-40.0)
    assert abs(ber_unknown_symbols(b) - 0.5) < 0.01


def test_theorem1_flat_equality():
    L = 16
    G = np.exp(1j * np.linspace(0, 5, L))
    camf, cuif = theorem1_gap(G, budget_at(6.0, L=L))
    assert abs(camf - cuif) <= 1e-10 * cuif


def test_theorem1_single_tone_max_gap():
    L = 8
    G = np.zeros(L, dtype=complex)
    G[0] = 2.0
    camf, cuif = theorem1_gap(G, budget_at(6.0, L=L))
    assert np.isclose(camf / cuif, L)


def test_theorem1_property_sweep():
    rng = np.random.default_rng(3)
    b = budget_at(6.0)
    for _ in range(10 ** 4):
        g = sample_cir(CirProfile.uniform(4), rng)
        G = cir_to_freq(g, 32)
        camf, cuif = theorem1_gap(G, b)
        assert camf >= cuif - 1e-12


def test_theorem1_rejects_zero_channel():
    with pytest.raises(ValueError):
        theorem1_gap(np.zeros(8), budget_at(6.0))


def test_probability_ranges_and_monotonicity():
    snrs = np.arange(-2.0, 12.0)
    closed = [ber_cuif_closed(budget_at(s)) for s in snrs]
    chiani = [ber_cuif_chiani(budget_at(s)) for s in snrs]
    mix = [ber_unknown_symbols(budget_at(s)) for s in snrs]
    for seq in (closed, chiani, mix):
        assert all(0 <= v <= 0.5 for v in seq)
        assert all(a >= b for a, b in zip(seq, seq[1:]))
    for L in (8, 16, 32, 64):
        assert (ber_cuif_closed(budget_at(6.0, L=2 * L))
                <= ber_cuif_closed(budget_at(6.0, L=L)))
    for a2 in (0.05, 0.1, 0.2, 0.4):
        assert (ber_cuif_closed(budget_at(6.0, alpha_sq=min(1.0, 2 * a2)))
                <= ber_cuif_closed(budget_at(6.0, alpha_sq=a2)))
