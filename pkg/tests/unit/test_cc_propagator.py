"""Unit tests for the closed-form degenerate Cauchy-Riemann propagator."""
import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from burgerslab.core.models.config import CcParams, Convention
from burgerslab.core.numerics.cc_propagator import (
    amplification_time,
    cc_evolve,
    cc_exponent,
    cc_mode,
    cr_mode,
    linearized_max_im,
    linearized_overlay,
    predicted_amplification_times,
    symbol_re,
    transition_time,
)
from burgerslab.core.numerics.torus_field import ModeSpectrum


@pytest.mark.parametrize("eps", [2.5e-3, 1e-2])
def test_cc_mode_matches_ode_integration(eps):
    """Test cc_mode against adaptive integration of dv_k/dt = (2 pi k t - 4 pi^2 eps k^2) v_k."""
    params = CcParams(eps=eps)
    ks = np.arange(-32, 33)
    times = np.linspace(0.0, 1.0, 11)

    def rhs(t, y):
        return (2 * math.pi * ks * t - 4 * math.pi**2 * eps * ks**2) * y

    solution = solve_ivp(
        rhs, (0.0, 1.0), np.ones(ks.size), method="DOP853", t_eval=times, rtol=1e-12, atol=1e-300
    )
    assert solution.success
    for i, t in enumerate(times):
        exact = np.array([cc_mode(1.0, int(k), params, float(t)) for k in ks])
        np.testing.assert_allclose(solution.y[:, i], exact.real, rtol=1e-8)


def test_amplification_time_recovery():
    """Test that |cc_mode(a, k, 4 pi eps k)| = |a| for every k."""
    eps = 1e-2
    params = CcParams(eps=eps)
    a = 0.3 - 0.4j
    for k in range(1, 33):
        t = 4 * math.pi * eps * k
        assert abs(cc_mode(a, k, params, t)) == pytest.approx(abs(a), rel=1e-12)


def test_cc_mode_two_time_composition():
    """Test that propagating through an intermediate time is the same as one jump."""
    params = CcParams(eps=5e-3)
    direct = cc_mode(1.0 + 1j, 7, params, 0.8)
    staged = cc_mode(cc_mode(1.0 + 1j, 7, params, 0.3), 7, params, 0.8, t_start=0.3)
    assert staged == pytest.approx(direct, rel=1e-13)


def test_cc_mode_rejects_negative_times():
    """Test that negative times are rejected."""
    with pytest.raises(ValueError):
        cc_mode(1.0, 1, CcParams(eps=1e-2), -0.1)


def test_cc_evolve_uses_base_frequency():
    """Test that a k0 spectrum evolves mode k at frequency k * k0."""
    params = CcParams(eps=1e-2)
    spectrum = ModeSpectrum.from_modes({1: 1.0, -1: 1.0}, K=2, base_frequency=3)

    evolved = cc_evolve(spectrum, params, 0.5)

    assert evolved[1] == pytest.approx(cc_mode(1.0, 3, params, 0.5))
    assert evolved[-1] == pytest.approx(cc_mode(1.0, -3, params, 0.5))
    assert evolved.base_frequency == 3


def test_cr_mode_grows_instantly():
    """Test that the non-degenerate equation amplifies at once while cc first damps."""
    params = CcParams(eps=1e-2)
    t = 0.05
    assert abs(cr_mode(1.0, 8, t)) > 1.0
    assert abs(cc_mode(1.0, 8, params, t)) < 1.0


def test_symbol_and_times():
    """Test the sign change of the symbol and the predicted times."""
    eps, xi = 1e-2, 5
    t_star = 2 * math.pi * eps * xi
    assert symbol_re(eps, 0.5 * t_star, xi) > 0
    assert symbol_re(eps, t_star, xi) == pytest.approx(0.0, abs=1e-12)
    assert symbol_re(eps, 2 * t_star, xi) < 0

    params = CcParams(eps=eps, k0=xi)
    assert transition_time(params) == pytest.approx(t_star)
    assert amplification_time(params) == pytest.approx(2 * t_star)
    rescaled = CcParams(eps=eps, k0=xi, rescaled=True)
    assert amplification_time(rescaled) == pytest.approx(4 * math.pi * xi)


def test_predicted_amplification_times():
    """Test both normalisations, 4 pi eps N and 8 pi eps N."""
    single, double = predicted_amplification_times(2.5e-3, 16)
    assert single == pytest.approx(0.5026548245743669)
    assert double == pytest.approx(2 * single)


def test_linearized_envelope_conventions():
    """Test the envelope in both conventions and its overlay."""
    torus = CcParams(eps=2.5e-3)
    paper = CcParams(eps=2.5e-3, convention=Convention.PAPER_FIG1)
    t = np.array([0.0, 0.2, 0.6])

    assert linearized_max_im(16, torus, 0.0) == 0.0
    growth = math.pi * 16 * 0.36
    damping = 4 * math.pi**2 * 2.5e-3 * 256 * 0.6
    expected = 0.5 * (math.exp(growth - damping) - math.exp(-growth - damping))
    assert linearized_max_im(16, torus, 0.6) == pytest.approx(expected)

    paper_value = linearized_max_im(16, paper, 0.6)
    assert paper_value == pytest.approx(
        0.5 * (math.exp(8 * 0.36 - 2.5e-3 * 256 * 0.6) - math.exp(-8 * 0.36 - 2.5e-3 * 256 * 0.6))
    )
    np.testing.assert_allclose(
        linearized_overlay(16, torus, t), t + linearized_max_im(16, torus, t)
    )
    with pytest.raises(ValueError):
        linearized_max_im(0, torus, 0.1)


def test_cc_exponent_is_vectorised():
    """Test that exponents broadcast over modes."""
    params = CcParams(eps=1e-2)
    values = cc_exponent(np.array([1, 2, 3]), params, 0.5)
    assert values.shape == (3,)
    assert values[0] == pytest.approx(math.pi * 0.25 - 4 * math.pi**2 * 1e-2 * 0.5)
