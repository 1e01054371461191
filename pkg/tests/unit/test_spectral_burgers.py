"""Unit tests for the rescaled Galerkin solver."""
import math

import numpy as np
import pytest

from burgerslab.core.exceptions import GridError, SpectralOverflowError
from burgerslab.core.models.config import RescaledParams
from burgerslab.core.numerics.spectral_burgers import (
    RescaledState,
    initial_state,
    lambda_k,
    mu_k,
    nonlinear_rhs,
    re_lambda1,
    run_rescaled,
    step,
    theorem2_lower_bound_exponent,
)
from burgerslab.core.numerics.torus_field import ComplexField, ModeSpectrum, dft, idft


def _state(modes, K):
    return RescaledState(t=0.0, scaled_modes=ModeSpectrum.from_modes(modes, K).coefficients)


def test_lambda_k_values():
    """Test the exponent of the linear propagator."""
    params = RescaledParams(eps=1e-2, abar=0.5)

    assert lambda_k(1, 1.0, params) == pytest.approx(
        complex(math.pi * (1e-2 - 4 * math.pi), -math.pi)
    )
    assert lambda_k(0, 3.0, params) == 0
    assert mu_k(1, 2.0, params).real == pytest.approx(0.0, abs=1e-12)


def test_re_lambda1_dip_and_return():
    """Test the minimum -4 pi^3 / eps and the return to zero at 4 pi / eps."""
    eps = 1e-2
    params = RescaledParams(eps=eps)

    assert re_lambda1(2 * math.pi / eps, params) == pytest.approx(-4 * math.pi**3 / eps)
    assert re_lambda1(params.amplification_time, params) == pytest.approx(0.0, abs=1e-8)
    assert re_lambda1(0.0, params) == 0.0


def test_lower_bound_exponent_in_original_time():
    """Test that the original-time exponent matches Re lambda_1 at t_fast = t / eps."""
    params = RescaledParams(eps=5e-2, k0=2)
    for t_fast in (1.0, 100.0, 700.0):
        assert theorem2_lower_bound_exponent(
            params.eps * t_fast, params, original_time=True
        ) == pytest.approx(re_lambda1(t_fast, params), rel=1e-10, abs=1e-8)


def test_nonlinear_rhs_single_mode():
    """Test that v = exp(4 pi i x) only feeds mode 4."""
    params = RescaledParams(eps=1e-2, alpha=0.5)
    rhs = nonlinear_rhs(_state({2: 1.0}, 4), params)

    expected = np.zeros(9, dtype=complex)
    expected[4 + 4] = -0.1j * math.pi * 4
    np.testing.assert_allclose(rhs, expected, atol=1e-15)


def test_nonlinear_rhs_cosine_is_conjugate_symmetric():
    """Test that 2 cos(2 pi x) feeds modes +-2 with conjugate coefficients."""
    params = RescaledParams(eps=1e-2)
    rhs = ModeSpectrum(nonlinear_rhs(_state({1: 1.0, -1: 1.0}, 4), params))

    assert rhs[2] == pytest.approx(-2j * math.pi)
    assert rhs[-2] == pytest.approx(np.conj(rhs[2]))
    assert rhs[0] == 0
    assert rhs[1] == 0


def test_nonlinear_rhs_matches_pseudo_spectral_product():
    """Test the convolution against the product -v v_x sampled on a fine grid."""
    K, J = 8, 64
    rng = np.random.default_rng(7)
    values = rng.normal(size=2 * K + 1) + 1j * rng.normal(size=2 * K + 1)
    values[K] = 0.0
    spectrum = ModeSpectrum(values)
    params = RescaledParams(eps=1e-2, alpha=0.5)

    v = idft(spectrum, J)
    v_x = idft(spectrum.derivative(), J)
    product = dft(ComplexField(-params.amplitude * v.samples * v_x.samples), K)
    rhs = nonlinear_rhs(RescaledState(t=0.0, scaled_modes=values), params)

    expected = np.array(product.coefficients)
    expected[K] = 0.0
    np.testing.assert_allclose(rhs, expected, rtol=1e-12, atol=1e-10)


def test_linear_run_is_exact():
    """Test that without convection every mode follows exp(lambda_k)."""
    params = RescaledParams(
        eps=0.1, abar=0.3, K=4, dt=0.1, t_end=2.0, record_every=5, nonlinear=False
    )
    datum = ModeSpectrum.from_modes({1: 0.5 - 0.5j, -1: 0.5 + 0.5j, 2: 0.25}, K=4)

    trajectory = run_rescaled(datum, params)

    final = trajectory.final
    assert final.t == pytest.approx(2.0)
    modes = np.arange(-4, 5)
    expected = datum.coefficients * np.exp(mu_k(modes, 2.0, params))
    expected[4] = 0.0
    np.testing.assert_allclose(final.scaled_modes, expected, rtol=1e-10, atol=1e-300)
    assert trajectory.log_abs_v1[-1] == pytest.approx(
        re_lambda1(2.0, params) + math.log(abs(0.5 - 0.5j)), abs=1e-10
    )
    assert trajectory.times == sorted(trajectory.times)
    assert trajectory.times[0] == 0.0


def test_mean_mode_stays_zero():
    """Test that the mean mode is identically zero along a nonlinear run."""
    params = RescaledParams(eps=0.5, K=8, dt=1e-2, t_end=0.5, record_every=10)
    datum = ModeSpectrum.from_sines({1: 1.0, 2: 0.5}, K=8)

    trajectory = run_rescaled(datum, params)

    assert all(state.scaled_modes[8] == 0 for state in trajectory.states)


def test_one_sided_data_stay_one_sided():
    """Test that data on positive modes never populate negative modes."""
    params = RescaledParams(eps=0.5, K=8, dt=1e-2, t_end=1.0, record_every=10)
    datum = ModeSpectrum.from_modes({1: 1.0, 3: 0.5}, K=8)

    trajectory = run_rescaled(datum, params)

    for state in trajectory.states:
        assert np.all(state.scaled_modes[:9] == 0)
    # nothing can feed mode 1 from modes >= 1
    np.testing.assert_allclose(trajectory.log_abs_v1, trajectory.re_lambda1, atol=1e-12)


def test_truncation_convergence():
    """Test that K = 16 and K = 32 agree on the low modes."""
    datum = ModeSpectrum.from_sines({1: 1.0}, K=16)
    low = run_rescaled(datum, RescaledParams(eps=0.5, K=16, dt=1e-3, t_end=1.0))
    high = run_rescaled(datum, RescaledParams(eps=0.5, K=32, dt=1e-3, t_end=1.0))

    coarse = low.final.scaled_spectrum().truncated(8).coefficients
    fine = high.final.scaled_spectrum().truncated(8).coefficients
    np.testing.assert_allclose(coarse, fine, atol=1e-9)


def test_truncation_convergence_through_amplification_window():
    """Test that doubling K moves |v_1| by at most 1e-8 relative at 4 pi k0 / eps + 1."""
    eps = 1e-2
    t_end = 4.0 * math.pi / eps + 1.0
    datum = ModeSpectrum.from_sines({1: 1.0}, K=32)

    finals = []
    for K in (16, 32):
        params = RescaledParams(
            k0=1, eps=eps, alpha=0.4, K=K, dt=2e-2, t_end=t_end, record_every=10_000
        )
        trajectory = run_rescaled(datum, params)
        assert not trajectory.stopped_on_overflow
        assert trajectory.times[-1] == pytest.approx(t_end)
        finals.append(trajectory.log_abs_v1[-1])

    assert abs(math.expm1(finals[1] - finals[0])) <= 1e-8


def test_real_datum_does_not_stay_real():
    """Test that the complex forcing breaks conjugate symmetry."""
    params = RescaledParams(eps=0.1, K=4, dt=1e-2, t_end=1.0)
    datum = ModeSpectrum.from_sines({1: 1.0}, K=4)
    assert datum.is_real()

    trajectory = run_rescaled(datum, params)

    assert not trajectory.final.scaled_spectrum().is_real()


def test_rk4_and_midpoint_agree():
    """Test that both integrating-factor schemes converge to the same state."""
    datum = ModeSpectrum.from_sines({1: 1.0}, K=8)
    rk4 = run_rescaled(datum, RescaledParams(eps=0.5, K=8, dt=2e-4, t_end=0.5))
    midpoint = run_rescaled(
        datum, RescaledParams(eps=0.5, K=8, dt=2e-4, t_end=0.5, scheme="midpoint")
    )

    np.testing.assert_allclose(
        rk4.final.scaled_modes, midpoint.final.scaled_modes, atol=1e-4
    )


def test_zero_datum_stays_zero():
    """Test that the zero datum is a fixed point."""
    params = RescaledParams(eps=0.1, K=4, dt=0.1, t_end=1.0)

    trajectory = run_rescaled(ModeSpectrum.zeros(4), params)

    assert np.all(trajectory.final.scaled_modes == 0)
    assert trajectory.log_abs_v1[-1] == -math.inf
    assert trajectory.log_w_l2[-1] == -math.inf


def test_step_advances_by_dt():
    """Test the single-step helper."""
    params = RescaledParams(eps=0.1, K=4, dt=0.05)
    state = initial_state(ModeSpectrum.from_sines({1: 1.0}, K=4), params)

    nxt = step(state, params)

    assert nxt.t == pytest.approx(0.05)
    assert nxt.log_scale == pytest.approx(re_lambda1(0.05, params))


def test_overflow_is_reported():
    """Test that a propagator leaving the float range stops the run."""
    params = RescaledParams(eps=1.0, K=4, dt=10.0, t_end=100.0, record_every=1, nonlinear=False)
    datum = ModeSpectrum.from_modes({1: 1.0, 3: 1.0}, K=4)

    with pytest.raises(SpectralOverflowError) as exc_info:
        run_rescaled(datum, params, stop_on_overflow=False)
    assert exc_info.value.exponent > 700

    trajectory = run_rescaled(datum, params)
    assert trajectory.stopped_on_overflow
    assert trajectory.times[-1] < params.t_end


def test_initial_state_validation():
    """Test that excess modes and a non-zero mean are rejected."""
    params = RescaledParams(eps=0.1, K=4)
    with pytest.raises(GridError):
        initial_state(ModeSpectrum.from_modes({6: 1.0}, K=6), params)
    with pytest.raises(GridError):
        initial_state(ModeSpectrum.from_modes({0: 1.0, 1: 1.0}, K=4), params)

    padded = initial_state(ModeSpectrum.from_modes({1: 1.0}, K=6), params)
    assert padded.K == 4


def test_time_step_self_convergence():
    """Test that halving dt changes v_1 at t = 10 by at most 1e-6 relative."""
    datum = ModeSpectrum.from_sines({1: 1.0}, K=16)
    coarse = run_rescaled(
        datum, RescaledParams(eps=1e-2, alpha=0.4, K=16, dt=1e-3, t_end=10.0, record_every=1000)
    )
    fine = run_rescaled(
        datum, RescaledParams(eps=1e-2, alpha=0.4, K=16, dt=5e-4, t_end=10.0, record_every=2000)
    )

    a = coarse.final.scaled_modes[17]
    b = fine.final.scaled_modes[17]
    assert coarse.final.t == pytest.approx(fine.final.t)
    assert abs(a - b) / abs(b) <= 1e-6
