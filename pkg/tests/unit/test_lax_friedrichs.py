"""Unit tests for the Lax-Friedrichs solver."""
import math

import numpy as np
import pytest

from burgerslab.core.exceptions import GridError, SolverDivergedError
from burgerslab.core.models.config import SchemeConfig
from burgerslab.core.numerics.lax_friedrichs import (
    Termination,
    cfl_ok,
    effective_viscosity,
    lf_step,
    run,
    trivial_solution,
)
from burgerslab.core.numerics.reference import solve_viscous_burgers
from burgerslab.core.numerics.torus_field import ComplexField


def test_constant_datum_is_exact():
    """Test that u = c + i t is reproduced over 10^4 steps."""
    c = 0.7
    cfg = SchemeConfig(J=64, sigma=1e-4, t_max=1.0, record_every=1000)

    trace = run(ComplexField.constant(c, 64), cfg)

    assert trace.termination == Termination.HORIZON_REACHED
    assert trace.steps == 10_000
    expected = c + trivial_solution(1.0)
    assert np.max(np.abs(trace.final_field.samples - expected)) <= 1e-10


def test_zero_datum_follows_trivial_solution():
    """Test that the zero datum evolves into i t."""
    cfg = SchemeConfig(J=32, sigma=1e-3, t_max=0.5, record_every=50)

    trace = run(ComplexField.constant(0.0, 32), cfg)

    arrays = trace.as_arrays()
    np.testing.assert_allclose(arrays["max_im"], arrays["t"], atol=1e-12)
    np.testing.assert_allclose(arrays["max_im_shifted"], 0.0, atol=1e-12)
    assert trace.t_f is None


def test_unforced_step_keeps_constants():
    """Test that a step without forcing leaves constants untouched."""
    cfg = SchemeConfig(J=16, sigma=1e-3, forcing=False)
    field = ComplexField.constant(0.3 + 0.1j, 16)

    np.testing.assert_allclose(lf_step(field, cfg).samples, field.samples, atol=1e-15)


def test_datum_violating_cfl_stops_at_zero():
    """Test that a datum above the blow-up threshold gives t_f = 0."""
    cfg = SchemeConfig(J=128, sigma=0.1 / 128)
    datum = ComplexField.from_function(lambda x: 5.0 * np.sin(2 * np.pi * x), 128)

    assert not cfl_ok(datum, cfg)
    trace = run(datum, cfg)

    assert trace.termination == Termination.CFL_BREAK
    assert trace.t_f == 0.0
    assert trace.steps == 0


def test_zero_field_passes_cfl():
    """Test that a non-positive peak always satisfies the CFL test."""
    cfg = SchemeConfig(J=16, sigma=10.0)
    assert cfl_ok(ComplexField.constant(0.0, 16), cfg)
    assert cfl_ok(ComplexField.constant(-1j, 16), cfg)


def test_growing_mode_breaks_cfl():
    """Test that sin(2 pi N x) eventually breaks the CFL condition."""
    J = 256
    cfg = SchemeConfig(J=J, sigma=0.1 / J, t_max=4.0, record_every=10)
    datum = ComplexField.from_function(lambda x: np.sin(2 * np.pi * 4 * x), J)

    trace = run(datum, cfg)

    assert trace.termination == Termination.CFL_BREAK
    assert trace.t_f == pytest.approx((trace.steps - 1) * cfg.sigma)
    assert 2 * math.pi * effective_viscosity(cfg) * 4 < trace.t_f < cfg.t_max
    assert max(trace.max_im[-1], trace.max_re[-1]) >= cfg.blowup_threshold
    assert trace.times == sorted(trace.times)


def test_grid_mismatch_is_rejected():
    """Test that datum and configuration must agree on J."""
    cfg = SchemeConfig(J=32, sigma=1e-3)
    with pytest.raises(GridError):
        run(ComplexField.constant(0.0, 16), cfg)
    with pytest.raises(GridError):
        lf_step(ComplexField.constant(0.0, 16), cfg)


def test_non_finite_state_raises(mocker):
    """Test that a non-finite update aborts with the partial trace."""
    mocker.patch(
        "burgerslab.core.numerics.lax_friedrichs._stencil_update",
        return_value=np.full(16, np.nan, dtype=np.complex128),
    )
    cfg = SchemeConfig(J=16, sigma=1e-3)

    with pytest.raises(SolverDivergedError) as exc_info:
        run(ComplexField.constant(0.0, 16), cfg)

    assert exc_info.value.t == pytest.approx(1e-3)
    assert exc_info.value.trace.times == [0.0]


def test_effective_viscosity():
    """Test eps = h^2 / (2 sigma), i.e. 5 / J at sigma = h / 10."""
    cfg = SchemeConfig(J=2000, sigma=5e-5)
    assert effective_viscosity(cfg) == pytest.approx(2.5e-3)


def test_numerical_diffusion_second_order():
    """
    Test that Lax-Friedrichs for the inviscid equation converges at second order
    to the viscous equation with eps = h^2 / (2 sigma), eps held fixed.
    """
    eps = 1.0 / 32.0
    t_end = 1.0 / 16.0
    J_ref = 512

    def datum(x):
        return 0.5 * np.sin(2 * np.pi * x)

    reference = solve_viscous_burgers(
        ComplexField.from_function(datum, J_ref), eps, t_end, dt=t_end / 400
    )

    errors = []
    for J in (64, 128, 256, 512):
        h = 1.0 / J
        cfg = SchemeConfig(J=J, sigma=h * h / (2 * eps), t_max=t_end, record_every=10**6)
        trace = run(ComplexField.from_function(datum, J), cfg)
        assert trace.termination == Termination.HORIZON_REACHED
        exact = reference.samples[:: J_ref // J]
        errors.append(float(np.max(np.abs(trace.final_field.samples - exact))))

    orders = [math.log2(a / b) for a, b in zip(errors, errors[1:])]
    assert min(orders) >= 1.8


def _unforced_steps(field: ComplexField, cfg: SchemeConfig, steps: int) -> ComplexField:
    for _ in range(steps):
        field = lf_step(field, cfg)
    return field


@pytest.fixture
def unforced():
    J = 64
    cfg = SchemeConfig(J=J, sigma=0.1 / J, forcing=False)
    datum = ComplexField.from_function(lambda x: 0.5 * np.sin(2 * np.pi * x) + 0.2, J)
    return cfg, datum


def test_unforced_real_datum_stays_real(unforced):
    """Test that without forcing a real datum never picks up an imaginary part."""
    cfg, datum = unforced

    final = _unforced_steps(datum, cfg, 200)

    assert np.max(np.abs(final.samples.imag)) == 0.0


def test_unforced_scheme_conserves_mass(unforced):
    """Test that the grid mean is preserved over 200 conservative steps."""
    cfg, datum = unforced

    final = _unforced_steps(datum, cfg, 200)

    assert abs(np.mean(final.samples) - np.mean(datum.samples)) <= 1e-12


@pytest.mark.parametrize("cells", [1, 5, 32])
def test_step_commutes_with_grid_translation(unforced, cells):
    """Test that stepping a shifted datum equals shifting the stepped datum."""
    cfg, datum = unforced

    moved_first = _unforced_steps(datum.shifted(cells), cfg, 50)
    stepped_first = _unforced_steps(datum, cfg, 50).shifted(cells)

    np.testing.assert_allclose(moved_first.samples, stepped_first.samples, rtol=0, atol=1e-14)


def test_solver_logs_stay_off_stdout(capsys):
    """Test that solver logging never writes to standard output."""
    cfg = SchemeConfig(J=128, sigma=0.1 / 128)
    datum = ComplexField.from_function(lambda x: 5.0 * np.sin(2 * np.pi * x), 128)

    run(datum, cfg)

    assert capsys.readouterr().out == ""
