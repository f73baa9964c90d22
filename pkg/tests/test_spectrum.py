import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import HALF_PI, random_params
from fluxion.dynamics import build_h_eff
from fluxion.errors import NotConverged, UnsortedGrid
from fluxion.model import SystemParams
from fluxion.spectrum import (
    default_grid,
    emission_amplitudes,
    emission_spectrum,
    integrated_spectrum,
    laplace_matrix,
    line_centers,
    spectrum_flux_sweep,
    spectrum_time_domain_oracle,
)

# numpy.linalg.solve oracle, four Laplace points per frequency, Fig. 4 set
S_BG_INIT_A_MINUS = 0.0326113683709691
S_BG_INIT_A_PLUS = 1.643602564888114e-05
S_AG_INIT_B_PLUS = 0.032611367396543765
S_AG_INIT_B_MINUS = 1.643505127776111e-05


def lorentzian(omega, center, gamma):
    return gamma / (2 * math.pi) / ((omega - center) ** 2 + gamma**2 / 4)


def test_laplace_matrix_undriven(undriven):
    m = laplace_matrix(undriven, 0)
    expected = np.diag([0.5, 0.5, 50 + 50j, 50 - 50j])
    assert np.array_equal(m, expected)


def test_laplace_matrix_entry(fig2):
    m = laplace_matrix(fig2.with_flux(HALF_PI), 1j)
    assert m[0, 2] == pytest.approx(-10, abs=1e-14)


def test_laplace_matrix_structural_identity():
    rng = np.random.default_rng(42)
    for _ in range(100):
        p = random_params(rng)
        s = complex(*rng.normal(scale=50, size=2))
        lhs = laplace_matrix(p, s)
        rhs = s * np.eye(4) + 1j * build_h_eff(p)
        assert np.array_equal(lhs, rhs)


def test_amplitudes_single_level(undriven):
    p = undriven.replace(omega_ag=3.0)
    for w in (-2.0, 3.0, 7.5):
        a, b, c, d = emission_amplitudes(p, "a", w)
        assert a == pytest.approx(1 / (1j * (3.0 - w) + 0.5), rel=1e-14)
        assert b == c == d == 0


def test_amplitudes_zero_state(fig4):
    assert emission_amplitudes(fig4, np.zeros(4), 12.0) == (0, 0, 0, 0)


def test_amplitudes_flux_contrast(fig4):
    plus = abs(emission_amplitudes(fig4.with_flux(HALF_PI), "a", 100.0)[1])
    minus = abs(emission_amplitudes(fig4.with_flux(-HALF_PI), "a", 100.0)[1])
    assert minus > 3 * plus
    assert minus == pytest.approx(0.4525483399593905, rel=1e-12)


def test_single_line_lorentzian(undriven):
    w = default_grid(undriven)
    spectrum_ = emission_spectrum(undriven, "a", w)
    assert np.allclose(spectrum_.values, lorentzian(w, 0.0, 1.0), rtol=1e-6, atol=0)
    assert spectrum_.values.max() == pytest.approx(2 / math.pi, rel=1e-12)


def test_single_line_integral(undriven):
    total, _ = integrated_spectrum(undriven, "a")
    assert total == pytest.approx(1.0, abs=0.02)


def test_fig4a_line_elimination(fig4):
    plus = emission_spectrum(fig4.with_flux(HALF_PI), "a", [100.0]).values[0]
    minus = emission_spectrum(fig4.with_flux(-HALF_PI), "a", [100.0]).values[0]
    assert plus == pytest.approx(S_BG_INIT_A_PLUS, rel=1e-9)
    assert minus == pytest.approx(S_BG_INIT_A_MINUS, rel=1e-9)
    assert minus / plus >= 10


def test_fig4b_line_elimination(fig4):
    plus = emission_spectrum(fig4.with_flux(HALF_PI), "b", [0.0]).values[0]
    minus = emission_spectrum(fig4.with_flux(-HALF_PI), "b", [0.0]).values[0]
    assert plus == pytest.approx(S_AG_INIT_B_PLUS, rel=1e-9)
    assert minus == pytest.approx(S_AG_INIT_B_MINUS, rel=1e-9)
    assert plus / minus >= 10


def test_spectrum_metadata(fig4):
    spectrum_ = emission_spectrum(fig4.with_flux(0.3), "b", [0.0, 1.0])
    assert spectrum_.flux == pytest.approx(0.3)
    assert np.array_equal(spectrum_.initial_state, [0, 1, 0, 0])


def test_unsorted_grid(fig4):
    with pytest.raises(UnsortedGrid):
        emission_spectrum(fig4, "a", [1.0, 0.0])
    with pytest.raises(UnsortedGrid):
        emission_spectrum(fig4, "a", [])


@pytest.mark.parametrize("phi", [HALF_PI, -HALF_PI])
@pytest.mark.parametrize("init", ["a", "b"])
def test_fig4_conservation(fig4, phi, init):
    total, halfwidth = integrated_spectrum(fig4.with_flux(phi), init)
    assert total == pytest.approx(1.0, abs=0.02)
    assert halfwidth >= 80


def test_conservation_superposition(fig4):
    psi = np.array([0.6, 0.8j, 0, 0])
    total, _ = integrated_spectrum(fig4.with_flux(0.9), psi)
    assert total == pytest.approx(1.0, abs=0.02)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_spectrum_nonnegative(seed):
    rng = np.random.default_rng(seed)
    p = random_params(rng)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    spectrum_ = emission_spectrum(p, psi, np.linspace(-200, 2700, 3001))
    assert np.all(spectrum_.values >= 0)


def test_flux_sweep_minimum_near_half_pi(fig4):
    phis = -math.pi + 2 * math.pi * np.arange(1, 630) / 629
    pts = spectrum_flux_sweep(fig4, "a", fig4.omega_bg, phis)
    values = [s for _, s in pts]
    assert [phi for phi, _ in pts] == pytest.approx(list(phis))
    assert abs(phis[int(np.argmin(values))] - HALF_PI) <= 2 * math.pi / 629


def test_flux_sweep_crossing(fig4):
    phis = np.linspace(0.05, math.pi - 0.05, 40)
    from_b = spectrum_flux_sweep(fig4, "b", fig4.omega_ag, phis)
    from_a = spectrum_flux_sweep(fig4, "a", fig4.omega_bg, phis)
    for (_, sb), (_, sa) in zip(from_b, from_a):
        assert sb > sa
    neg_b = spectrum_flux_sweep(fig4, "b", fig4.omega_ag, -phis)
    neg_a = spectrum_flux_sweep(fig4, "a", fig4.omega_bg, -phis)
    for (_, sb), (_, sa) in zip(neg_b, neg_a):
        assert sb < sa


def test_flux_sweep_mirror(fig4):
    swapped = fig4.replace(omega_ag=fig4.omega_bg, omega_bg=fig4.omega_ag)
    phis = np.linspace(-3, 3, 13)
    from_a = spectrum_flux_sweep(fig4, "a", fig4.omega_bg, phis)
    from_b = spectrum_flux_sweep(swapped, "b", swapped.omega_ag, -phis)
    for (_, sa), (_, sb) in zip(from_a, from_b):
        assert sa == pytest.approx(sb, rel=1e-9)


def test_zero_flux_spectrum_exchange(fig4):
    swapped = fig4.replace(omega_ag=fig4.omega_bg, omega_bg=fig4.omega_ag)
    w = np.linspace(-60, 160, 441)
    sa = emission_spectrum(fig4, "a", w).values
    sb = emission_spectrum(swapped, "b", w).values
    assert np.allclose(sa, sb, rtol=1e-9, atol=0)


def test_line_centers(fig4):
    assert list(line_centers(fig4)) == [0.0, 100.0, 950.0, 2050.0]


# -- time-domain oracle ----------------------------------------------------------

def test_time_domain_single_line(undriven):
    probes = np.array([-3.0, -0.5, 0.0, 0.7, 4.0])
    td = spectrum_time_domain_oracle(undriven, "a", probes, 40.0, 1e-3)
    assert np.allclose(td, lorentzian(probes, 0.0, 1.0), rtol=1e-6, atol=0)


def test_time_domain_zero_state(fig4):
    assert spectrum_time_domain_oracle(fig4, np.zeros(4), 10.0, 1.0, 1e-3) == 0.0


def test_time_domain_requires_decay(fig4):
    with pytest.raises(NotConverged):
        spectrum_time_domain_oracle(fig4, "a", 0.0, 1.0, 1e-4)


@pytest.mark.parametrize("phi", [HALF_PI, -HALF_PI])
def test_time_domain_matches_laplace(fig4, phi):
    p = fig4.with_flux(phi)
    probes = np.array([-20.0, 0.0, 3.0, 100.0, 950.0])
    td = spectrum_time_domain_oracle(p, "a", probes, 6.0, 1e-4)
    lap = emission_spectrum(p, "a", probes).values
    assert np.all(np.abs(td / lap - 1) <= 1e-3)
