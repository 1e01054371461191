"""
Executable verdicts for the quantitative statements about the viscous
equation: Poincare-Wirtinger, the linear growth estimate of the imaginary
part (alpha = 0 regime), the exponential lower bound on the leading mode
(alpha > 1/3 regime), energy decay under a smallness condition, and the
error-function and Gaussian-tail bounds used along the way.

Every check returns a CheckReport whose margin is the worst ratio
achieved / allowed; a check passes exactly when the margin is at most 1.
Checks only read the trajectories handed to them.
"""
from __future__ import annotations

import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator
from scipy import integrate

from burgerslab.core.exceptions import CheckPreconditionError
from burgerslab.core.logger import get_logger
from burgerslab.core.numerics.spectral_burgers import Trajectory
from burgerslab.core.numerics.torus_field import ModeSpectrum, sobolev_norm
from burgerslab.features.theory.manifest import CalibrationManifest, dump_key_values

logger = get_logger(__name__)

MAX_DETAILS = 10
# integrand weight below which the errfn quadrature is truncated
ERRFN_CUTOFF = 50.0
RATIO_BAND = (0.75, 1.33)
DELTA_STEPS = 10


class CheckReport(BaseModel):
    """Outcome of one check; details hold the worst samples as (t, value, bound)."""

    name: str
    passed: bool
    margin: float
    details: List[Tuple[float, float, float]] = Field(default_factory=list)
    extras: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def validate_verdict(self) -> "CheckReport":
        if self.passed != (self.margin <= 1.0):
            raise ValueError(f"passed={self.passed} inconsistent with margin={self.margin}")
        return self

    def to_text(self) -> str:
        pairs: Dict[str, object] = {
            "check": self.name,
            "passed": self.passed,
            "margin": float(self.margin),
        }
        for key, value in sorted(self.extras.items()):
            pairs[key] = float(value)
        for i, (t, value, bound) in enumerate(self.details):
            pairs[f"detail.{i}"] = f"{t:.17g}, {value:.17g}, {bound:.17g}"
        return dump_key_values(pairs)


def _report(
    name: str,
    margin: float,
    samples: Iterable[Tuple[float, float, float, float]] = (),
    extras: Optional[Dict[str, float]] = None,
) -> CheckReport:
    """samples are (score, t, value, bound); the highest scores become the details."""
    worst = sorted(samples, key=lambda item: item[0], reverse=True)[:MAX_DETAILS]
    margin = float(margin)
    report = CheckReport(
        name=name,
        passed=margin <= 1.0,
        margin=margin,
        details=[(t, value, bound) for _, t, value, bound in worst],
        extras=extras or {},
    )
    logger.info("check.finished", check=name, passed=report.passed, margin=report.margin)
    return report


# --- Poincare-Wirtinger ----------------------------------------------------------


def check_pw(spectrum: ModeSpectrum) -> CheckReport:
    """
    |v - mean v|_L2 <= |dv/dx|_L2 / (2 pi k_eff), k_eff the smallest populated frequency.

    Equality holds on single-mode spectra.
    """
    centred = spectrum.without_mean()
    k_min = centred.smallest_populated_mode()
    if k_min == 0:
        return _report("pw", 0.0, extras={"k_eff": 0.0})
    k_eff = k_min * spectrum.base_frequency
    # ratio written without 2 pi factors so that eigenmodes give exactly 1
    weights = (centred.modes / k_min) ** 2
    power = np.abs(centred.coefficients) ** 2
    value = math.sqrt(float(np.sum(power)))
    bound = math.sqrt(float(np.sum(weights * power)))
    return _report(
        "pw",
        value / bound,
        [(value / bound, 0.0, value, bound)],
        extras={"k_eff": float(k_eff)},
    )


# --- growth of the imaginary part (alpha = 0) -----------------------------------


def theorem1_ratios(
    trajectory: Trajectory, s: int
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    R_im(t) = |Im v|_Hs / (eps t |a - abar|_Hs+1) and R_re(t) = |Re v|_Hs / |a - abar|_Hs+1
    for recorded times t >= 10 dt. A zero datum gives zero ratios.
    """
    params = trajectory.params
    scale = sobolev_norm(trajectory.datum, s + 1)
    delta = DELTA_STEPS * params.dt
    times, r_im, r_re = [], [], []
    for t, state in zip(trajectory.times, trajectory.states):
        if t < delta:
            continue
        spectrum = state.spectrum(params.k0)
        times.append(t)
        if scale == 0.0:
            r_im.append(0.0)
            r_re.append(0.0)
            continue
        r_im.append(sobolev_norm(spectrum.imag_part(), s) / (params.eps * t * scale))
        r_re.append(sobolev_norm(spectrum.real_part(), s) / scale)
    return np.asarray(times), np.asarray(r_im), np.asarray(r_re)


def _validate_theorem1(trajectories: Sequence[Trajectory]) -> None:
    if not trajectories:
        raise CheckPreconditionError("at least one trajectory is required")
    for trajectory in trajectories:
        params = trajectory.params
        if params.nonlinear and params.alpha != 0.0:
            raise CheckPreconditionError(
                f"growth estimate needs alpha = 0, got alpha={params.alpha}"
            )
        horizon = params.eps * trajectory.times[-1]
        if horizon >= 2.0 * math.pi * params.k0:
            raise CheckPreconditionError(
                f"horizon eps*t={horizon:.6g} reaches the transition time 2 pi k0"
            )


def _fitted_constants(
    trajectories: Sequence[Trajectory], s: int
) -> List[Tuple[float, float, float]]:
    """(eps, C_im, C_re) per trajectory, sorted by decreasing eps."""
    fitted = []
    for trajectory in trajectories:
        _, r_im, r_re = theorem1_ratios(trajectory, s)
        c_im = float(np.max(r_im)) if r_im.size else 0.0
        c_re = float(np.max(r_re)) if r_re.size else 0.0
        fitted.append((trajectory.params.eps, c_im, c_re))
    return sorted(fitted, key=lambda item: item[0], reverse=True)


def _stability_ratio(coarse: float, fine: float) -> float:
    if coarse == 0.0 and fine == 0.0:
        return 1.0
    if coarse == 0.0:
        return math.inf
    return fine / coarse


def check_theorem1(
    trajectories: Sequence[Trajectory], s: int, c_check: float
) -> CheckReport:
    """
    Linear growth of |Im v|_Hs in eps t, and boundedness of |Re v|_Hs.

    Args:
        trajectories: alpha = 0 runs of one datum for several eps, horizon eps t < 2 pi k0
        s: Sobolev index
        c_check: frozen bound on both ratios (see calibrate_theorem1)

    Raises:
        CheckPreconditionError: wrong regime or horizon past the transition time
    """
    _validate_theorem1(trajectories)
    fitted = _fitted_constants(trajectories, s)

    samples = []
    extras: Dict[str, float] = {"c_check": c_check}
    margin = 0.0
    for trajectory in trajectories:
        times, r_im, r_re = theorem1_ratios(trajectory, s)
        for t, a, b in zip(times, r_im, r_re):
            worst = max(a, b)
            samples.append((worst / c_check, float(t), float(worst), c_check))
    for eps, c_im, c_re in fitted:
        extras[f"constant_im.eps_{eps:g}"] = c_im
        extras[f"constant_re.eps_{eps:g}"] = c_re
        margin = max(margin, c_im / c_check, c_re / c_check)

    low, high = RATIO_BAND
    for (eps_a, c_a, _), (eps_b, c_b, _) in zip(fitted, fitted[1:]):
        ratio = _stability_ratio(c_a, c_b)
        extras[f"ratio.eps_{eps_a:g}_to_{eps_b:g}"] = ratio
        margin = max(margin, ratio / high, low / ratio if ratio > 0 else math.inf)

    return _report("theorem1", margin, samples, extras)


def calibrate_theorem1(
    trajectories: Sequence[Trajectory], s: int, safety: float = 2.0
) -> CalibrationManifest:
    """Fit the growth constants on reference runs and freeze safety * max of them."""
    _validate_theorem1(trajectories)
    fitted = _fitted_constants(trajectories, s)
    constants: Dict[str, float] = {}
    for eps, c_im, c_re in fitted:
        constants[f"im.eps_{eps:g}"] = c_im
        constants[f"re.eps_{eps:g}"] = c_re
    largest = max(max(c_im, c_re) for _, c_im, c_re in fitted)
    c_check = safety * largest if largest > 0 else 1.0
    logger.info("check.calibrated", check="theorem1", c_check=c_check, runs=len(fitted))
    return CalibrationManifest(
        check="theorem1", s=s, c_check=c_check, safety=safety, constants=constants
    )


# --- exponential lower bound on v_1 (alpha > 1/3) -------------------------------


def check_theorem2(trajectory: Trajectory) -> CheckReport:
    """
    |v_1(t)| >= |v_1(0)| exp(Re lambda_1(t)) / 2 at every recorded time, compared in log space.

    margin = exp(max_t (log bound - log |v_1|)), also reported as log_margin. At the
    amplification time 4 pi k0 / eps, |v_1| must lie within a factor 2 of |v_1(0)|.

    Raises:
        CheckPreconditionError: alpha <= 1/3, a datum with v_1(0) = 0, a run stopped on
            overflow or one that ends before the amplification time
    """
    params = trajectory.params
    if params.alpha <= 1.0 / 3.0:
        raise CheckPreconditionError(f"lower bound needs alpha > 1/3, got {params.alpha}")
    first = abs(trajectory.datum[1])
    if first == 0.0:
        raise CheckPreconditionError("datum has no first Fourier mode (v_1(0) = 0)")
    if trajectory.stopped_on_overflow:
        raise CheckPreconditionError("trajectory stopped on overflow")
    t_amp = params.amplification_time
    if not trajectory.times or trajectory.times[-1] < t_amp:
        end = trajectory.times[-1] if trajectory.times else 0.0
        raise CheckPreconditionError(
            f"trajectory ends at t={end:.6g}, before the amplification time {t_amp:.6g}"
        )

    log_half = math.log(0.5 * first)
    times = np.asarray(trajectory.times)
    values = np.asarray(trajectory.log_abs_v1)
    bounds = log_half + np.asarray(trajectory.re_lambda1)
    excess = bounds - values
    log_margin = float(np.max(excess))
    samples = [
        (float(e), float(t), float(v), float(b))
        for e, t, v, b in zip(excess, times, values, bounds)
    ]
    extras = {"log_margin": log_margin, "log_abs_v1_0": math.log(first)}
    margin = math.exp(min(log_margin, 700.0))

    recovery = math.exp(float(np.interp(t_amp, times, values)) - math.log(first))
    extras["recovery_ratio"] = recovery
    margin = max(margin, recovery / 2.0, 0.5 / recovery if recovery > 0 else math.inf)

    return _report("theorem2", margin, samples, extras)


# --- error-function and Gaussian tail bounds -------------------------------------


def errfn_ratio(eps: float, k0: int, t: float) -> float:
    """
    integral_0^t exp(-pi k0 eps (tau - c)^2) dtau divided by its closed-form bound
    exp(-pi k0 eps (t - c)^2) / (2 pi k0 (2 pi k0 - eps t)), with c = 2 pi k0 / eps.

    Both sides are scaled by exp(pi k0 eps (t - c)^2); with s = t - tau the integrand
    is bounded by exp(-rate s), rate = 2 pi k0 eps (c - t), which fixes the cutoff.
    """
    c = 2.0 * math.pi * k0 / eps
    gap = c - t
    rate = 2.0 * math.pi * k0 * eps * gap

    def integrand(s: float) -> float:
        return math.exp(-math.pi * k0 * eps * s * (2.0 * gap + s))

    upper = min(t, ERRFN_CUTOFF / rate)
    value, _ = integrate.quad(integrand, 0.0, upper, epsabs=0.0, epsrel=1e-12, limit=200)
    tail = max(t - upper, 0.0) * math.exp(-ERRFN_CUTOFF)
    return rate * (value + tail)


def default_errfn_grid(eps: float, k0: int, points: int = 20) -> np.ndarray:
    """points times spread over (0, 2 pi k0 / eps), endpoints excluded."""
    c = 2.0 * math.pi * k0 / eps
    return np.linspace(0.0, c, points + 2)[1:-1]


def check_errfn(eps: float, k0: int, t_grid: Optional[Sequence[float]] = None) -> CheckReport:
    """
    Error-function estimate at every t of t_grid.

    Raises:
        CheckPreconditionError: some t >= 2 pi k0 / eps (the bound's denominator vanishes)
    """
    if eps <= 0 or k0 < 1:
        raise CheckPreconditionError(f"need eps > 0 and k0 >= 1, got eps={eps}, k0={k0}")
    grid = default_errfn_grid(eps, k0) if t_grid is None else np.asarray(t_grid, dtype=float)
    c = 2.0 * math.pi * k0 / eps
    if np.any(grid >= c):
        raise CheckPreconditionError(f"errfn bound needs t < 2 pi k0 / eps = {c:.6g}")
    if np.any(grid < 0):
        raise CheckPreconditionError("errfn bound needs t >= 0")

    samples = []
    for t in grid:
        ratio = errfn_ratio(eps, k0, float(t))
        samples.append((ratio, float(t), ratio, 1.0))
    margin = max((item[0] for item in samples), default=0.0)
    return _report("errfn", margin, samples, extras={"eps": eps, "k0": float(k0)})


def check_gaussian_tail(xs: Sequence[float] = (0.5, 1.0, 2.0)) -> CheckReport:
    """integral_x^inf exp(-z^2) dz <= exp(-x^2) / (2x) for x > 0."""
    samples = []
    for x in xs:
        if x <= 0:
            raise CheckPreconditionError(f"Gaussian tail bound needs x > 0, got {x}")
        value, _ = integrate.quad(lambda z: math.exp(-z * z), x, math.inf, epsabs=0.0)
        bound = math.exp(-x * x) / (2.0 * x)
        samples.append((value / bound, float(x), value, bound))
    margin = max((item[0] for item in samples), default=0.0)
    return _report("gaussian_tail", margin, samples)


# --- energy decay (alpha = 0) ----------------------------------------------------


def energy_condition(trajectory: Trajectory, index: int) -> float:
    """eps t / (2 pi k0) + sum_k |v_k|, an upper bound for eps t / (2 pi k0) + |v|_Linf."""
    params = trajectory.params
    state = trajectory.states[index]
    return params.eps * state.t / (2.0 * math.pi * params.k0) + float(
        np.sum(np.abs(state.modes))
    )


def check_energy_decay(trajectory: Trajectory, s: int) -> CheckReport:
    """
    |v(t)|_Hs <= |v(0)|_Hs for as long as eps t / (2 pi k0) + |v|_Linf <= 1.

    Times after the condition first fails are outside the scope of the estimate and
    skipped; the last covered time is reported as window_end.
    """
    params = trajectory.params
    initial = sobolev_norm(trajectory.datum, s)
    samples = []
    window_end = 0.0
    margin = 0.0
    for index, state in enumerate(trajectory.states):
        if energy_condition(trajectory, index) > 1.0:
            break
        window_end = state.t
        if initial == 0.0:
            continue
        current = sobolev_norm(state.spectrum(params.k0), s)
        ratio = current / initial
        margin = max(margin, ratio)
        samples.append((ratio, state.t, current, initial))

    extras = {"window_end": window_end, "initial_norm": initial}
    if window_end < trajectory.times[-1]:
        logger.info("check.energy_window_closed", window_end=window_end)
    return _report("energy", margin, samples, extras)
