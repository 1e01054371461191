"""Galerkin-truncated Fourier solver for the rescaled equation

    dv/dt + (i eps t + abar + eps^alpha v) dv/dx - d2v/dx2 = 0,   mean(v) = 0,

written on the modes v_k of exp(2 pi i k k0 x), |k| <= K. The linear part of
mode k integrates exactly to exp(lambda_k(t)) with

    lambda_k(t) = -2 i pi k0 k abar t + pi k0 k (eps t^2 - 4 pi k0 k t).

Re lambda_1 dips to -4 (pi k0)^3 / eps before returning to 0 at the
amplification time 4 pi k0 / eps, far outside the float range for small eps.
The solver therefore stores the scaled modes z_k = exp(-Re lambda_1(t)) v_k
together with log_scale = Re lambda_1(t); the scaled system reads

    dz_k/dt = mu_k'(t) z_k + exp(Re lambda_1(t)) C_k(z),   mu_k = lambda_k - Re lambda_1,

with C the truncated convective term, and is stepped with integrating-factor
Runge-Kutta schemes built on the two-time propagator exp(mu_k(t2) - mu_k(t1)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from burgerslab.core.exceptions import GridError, SpectralOverflowError
from burgerslab.core.logger import get_logger
from burgerslab.core.models.config import RescaledParams
from burgerslab.core.numerics.torus_field import ModeSpectrum

logger = get_logger(__name__)

# exp() overflows just above 709
MAX_EXPONENT = 700.0


@dataclass(frozen=True)
class PropagatorExponent:
    """lambda_k(t) and mu_k(t) = lambda_k(t) - Re lambda_1(t) for a set of modes."""

    lambda_k: np.ndarray
    mu_k: np.ndarray


@dataclass(frozen=True)
class RescaledState:
    """Fast time t and the modes v_k = exp(log_scale) * scaled_modes, k = -K..K."""

    t: float
    scaled_modes: np.ndarray
    log_scale: float = 0.0

    @property
    def K(self) -> int:
        return (self.scaled_modes.size - 1) // 2

    @property
    def modes(self) -> np.ndarray:
        """Unscaled v_k; underflows to zero deep inside the decay window."""
        return math.exp(self.log_scale) * self.scaled_modes

    def log_abs_mode(self, k: int) -> float:
        """log |v_k|, computed without leaving log space (-inf for a zero mode)."""
        value = abs(self.scaled_modes[k + self.K])
        return self.log_scale + math.log(value) if value > 0 else -math.inf

    def spectrum(self, k0: int = 1) -> ModeSpectrum:
        return ModeSpectrum(self.modes, k0)

    def scaled_spectrum(self, k0: int = 1) -> ModeSpectrum:
        return ModeSpectrum(self.scaled_modes, k0)


@dataclass
class Trajectory:
    """States and diagnostics recorded by run_rescaled."""

    params: RescaledParams
    datum: ModeSpectrum
    states: List[RescaledState] = field(default_factory=list)
    times: List[float] = field(default_factory=list)
    log_abs_v1: List[float] = field(default_factory=list)
    log_w_l2: List[float] = field(default_factory=list)
    re_lambda1: List[float] = field(default_factory=list)
    stopped_on_overflow: bool = False

    def record(self, state: RescaledState) -> None:
        if self.times and self.times[-1] == state.t:
            return
        K = state.K
        w = np.array(state.scaled_modes)
        w[K] = 0.0
        w[K + 1] = 0.0
        w_norm = float(np.sqrt(np.sum(np.abs(w) ** 2)))
        self.states.append(state)
        self.times.append(state.t)
        self.log_abs_v1.append(state.log_abs_mode(1))
        self.log_w_l2.append(state.log_scale + math.log(w_norm) if w_norm > 0 else -math.inf)
        self.re_lambda1.append(state.log_scale)

    @property
    def final(self) -> RescaledState:
        return self.states[-1]


def lambda_k(k, t, params: RescaledParams):
    """Accumulated exponent of the linear propagator of mode(s) k at fast time t."""
    k = np.asarray(k, dtype=float)
    t = np.asarray(t, dtype=float)
    k0 = params.k0
    real = math.pi * k0 * k * (params.eps * t**2 - 4.0 * math.pi * k0 * k * t)
    value = real - 2j * math.pi * k0 * k * params.abar * t
    return complex(value) if np.ndim(value) == 0 else value


def re_lambda1(t, params: RescaledParams):
    """Re lambda_1(t) = pi k0 (eps t^2 - 4 pi k0 t)."""
    t = np.asarray(t, dtype=float)
    value = math.pi * params.k0 * (params.eps * t**2 - 4.0 * math.pi * params.k0 * t)
    return float(value) if np.ndim(value) == 0 else value


def mu_k(k, t, params: RescaledParams):
    """lambda_k(t) - Re lambda_1(t); Re mu_k = pi k0 (k - 1) t (eps t - 4 pi k0 (k + 1))."""
    return lambda_k(k, t, params) - re_lambda1(t, params)


def propagator_exponent(k, t: float, params: RescaledParams) -> PropagatorExponent:
    lam = np.asarray(lambda_k(k, t, params), dtype=np.complex128)
    return PropagatorExponent(lambda_k=lam, mu_k=lam - re_lambda1(t, params))


def theorem2_lower_bound_exponent(t, params: RescaledParams, original_time: bool = False):
    """Exponent of the leading-mode lower bound.

    In fast time this is Re lambda_1(t). In original time t_orig = eps * t_fast
    it reads pi k0 (t - 2 pi k0)^2 / eps - 4 (pi k0)^3 / eps.
    """
    if not original_time:
        return re_lambda1(t, params)
    t = np.asarray(t, dtype=float)
    k0, eps = params.k0, params.eps
    value = math.pi * k0 * (t - 2.0 * math.pi * k0) ** 2 / eps - 4.0 * (math.pi * k0) ** 3 / eps
    return float(value) if np.ndim(value) == 0 else value


def _convective(values: np.ndarray, amplitude: float, k0: int, modes: np.ndarray) -> np.ndarray:
    """-amplitude * i pi k0 k (v * v)_k truncated to |k| <= K, i.e. -amplitude d/dx(v^2 / 2)."""
    if amplitude == 0.0:
        return np.zeros_like(values)
    K = (values.size - 1) // 2
    square = np.convolve(values, values)[K:3 * K + 1]
    result = -amplitude * 1j * math.pi * k0 * modes * square
    result[K] = 0.0
    return result


def nonlinear_rhs(state: RescaledState, params: RescaledParams) -> np.ndarray:
    """Fourier coefficients of -eps^alpha v dv/dx for the unscaled modes of state."""
    modes = np.arange(-state.K, state.K + 1)
    return _convective(state.modes, params.amplitude, params.k0, modes)


class SpectralSolver:
    """Integrating-factor stepper for the scaled modes.

    Each step evaluates mu_k at t, t + dt/2 and t + dt and applies the exact
    propagators between those times; only the convective term is approximated.
    """

    def __init__(self, params: RescaledParams):
        self.params = params
        self.modes = np.arange(-params.K, params.K + 1)
        self._step = self._rk4 if params.scheme == "rk4" else self._midpoint
        self._cached: tuple[float, np.ndarray] | None = None

    def _mu(self, t: float) -> np.ndarray:
        if self._cached is not None and self._cached[0] == t:
            return self._cached[1]
        value = np.asarray(mu_k(self.modes, t, self.params), dtype=np.complex128)
        self._cached = (t, value)
        return value

    def _propagator(self, mu_from: np.ndarray, mu_to: np.ndarray, t: float) -> np.ndarray:
        exponent = mu_to - mu_from
        # mode 0 is identically zero; its exponent -Re lambda_1 is irrelevant
        exponent[self.params.K] = 0.0
        worst = float(np.max(exponent.real))
        if worst > MAX_EXPONENT:
            raise SpectralOverflowError(
                f"propagator exponent {worst:.1f} at t={t:.6g}", t=t, exponent=worst
            )
        return np.exp(exponent)

    def _source(self, t: float, z: np.ndarray) -> np.ndarray:
        if self.params.amplitude == 0.0:
            return np.zeros_like(z)
        exponent = re_lambda1(t, self.params)
        if exponent > MAX_EXPONENT:
            raise SpectralOverflowError(
                f"mode scale exp({exponent:.1f}) at t={t:.6g}", t=t, exponent=exponent
            )
        weight = math.exp(exponent)
        return weight * _convective(z, self.params.amplitude, self.params.k0, self.modes)

    def _rk4(self, t: float, z: np.ndarray, dt: float) -> np.ndarray:
        t_half, t_next = t + 0.5 * dt, t + dt
        mu0, mu_half, mu1 = self._mu(t), self._mu(t_half), self._mu(t_next)
        to_half = self._propagator(mu0, mu_half, t)
        to_next = self._propagator(mu0, mu1, t)
        half_to_next = self._propagator(mu_half, mu1, t_half)

        k1 = self._source(t, z)
        k2 = self._source(t_half, to_half * (z + 0.5 * dt * k1))
        k3 = self._source(t_half, to_half * z + 0.5 * dt * k2)
        k4 = self._source(t_next, to_next * z + dt * half_to_next * k3)
        return to_next * z + dt / 6.0 * (to_next * k1 + 2.0 * half_to_next * (k2 + k3) + k4)

    def _midpoint(self, t: float, z: np.ndarray, dt: float) -> np.ndarray:
        t_half, t_next = t + 0.5 * dt, t + dt
        mu0, mu_half, mu1 = self._mu(t), self._mu(t_half), self._mu(t_next)
        to_half = self._propagator(mu0, mu_half, t)
        z_half = to_half * (z + 0.5 * dt * self._source(t, z))
        return (
            self._propagator(mu0, mu1, t) * z
            + dt * self._propagator(mu_half, mu1, t_half) * self._source(t_half, z_half)
        )

    def step(self, state: RescaledState, dt: float | None = None) -> RescaledState:
        dt = self.params.dt if dt is None else dt
        z = self._step(state.t, np.asarray(state.scaled_modes, dtype=np.complex128), dt)
        z[self.params.K] = 0.0
        t_next = state.t + dt
        if not np.all(np.isfinite(z)):
            raise SpectralOverflowError(
                f"non-finite modes at t={t_next:.6g}", t=t_next, exponent=math.inf
            )
        return RescaledState(t=t_next, scaled_modes=z, log_scale=re_lambda1(t_next, self.params))


def step(state: RescaledState, params: RescaledParams) -> RescaledState:
    """Advance state by params.dt."""
    return SpectralSolver(params).step(state)


def initial_state(datum: ModeSpectrum, params: RescaledParams) -> RescaledState:
    """State at t = 0 from a band-limited, zero-mean datum spectrum."""
    excess = datum.K - params.K
    if excess > 0 and (
        np.any(datum.coefficients[:excess] != 0) or np.any(datum.coefficients[-excess:] != 0)
    ):
        raise GridError(f"datum carries modes beyond the truncation order K={params.K}")
    if abs(datum.mean) > 1e-12:
        raise GridError(f"datum must have zero mean, got {datum.mean}")
    values = np.array(datum.truncated(params.K).coefficients)
    values[params.K] = 0.0
    return RescaledState(t=0.0, scaled_modes=values, log_scale=0.0)


def run_rescaled(
    datum: ModeSpectrum, params: RescaledParams, stop_on_overflow: bool = True
) -> Trajectory:
    """Integrate from datum to params.t_end, recording every params.record_every steps.

    With stop_on_overflow the run ends early (flagged on the trajectory) when the
    propagator leaves the float range; otherwise SpectralOverflowError propagates.
    """
    solver = SpectralSolver(params)
    state = initial_state(datum, params)
    trajectory = Trajectory(params=params, datum=datum.truncated(params.K))
    trajectory.record(state)

    log = logger.bind(k0=params.k0, eps=params.eps, alpha=params.alpha, K=params.K)
    log.debug("spectral.run_started", dt=params.dt, t_end=params.t_end, scheme=params.scheme)

    n_steps = params.n_steps
    dt = params.t_end / n_steps
    for n in range(1, n_steps + 1):
        try:
            state = solver.step(state, dt)
        except SpectralOverflowError as exc:
            log.warning("spectral.overflow", t=exc.t, exponent=exc.exponent)
            if not stop_on_overflow:
                raise
            trajectory.stopped_on_overflow = True
            break
        # re-anchor on the grid n * dt so long runs do not drift
        state = RescaledState(
            t=n * dt, scaled_modes=state.scaled_modes, log_scale=re_lambda1(n * dt, params)
        )
        if n % params.record_every == 0 or n == n_steps:
            trajectory.record(state)
    trajectory.record(state)

    log.info(
        "spectral.run_finished",
        t=state.t,
        log_abs_v1=trajectory.log_abs_v1[-1],
        overflow=trajectory.stopped_on_overflow,
    )
    return trajectory

