"""Closed-form solution of the viscous degenerate Cauchy-Riemann equation

    dv/dt + i t dv/dx - eps d2v/dx2 = 0

on the unit torus, with the symbol, transition-time and amplification-time
predictors derived from it.

Two exponent normalisations are exposed. Convention.TORUS is the exact
propagator for modes exp(2 pi i k x):

    v_k(t2) = v_k(t1) exp(pi k (t2^2 - t1^2) - 4 pi^2 eps k^2 (t2 - t1)),

and Convention.PAPER_FIG1 is the exponent k (t2^2 - t1^2) / 2 - eps k^2 (t2 - t1)
used only to overlay Figure 1 as originally printed.
"""
from __future__ import annotations

import math
from typing import Tuple, Union

import numpy as np

from burgerslab.core.models.config import CcParams, Convention
from burgerslab.core.numerics.torus_field import ModeSpectrum

ArrayLike = Union[float, np.ndarray]


def cc_exponent(k: ArrayLike, params: CcParams, t: ArrayLike, t_start: ArrayLike = 0.0):
    """Exponent of the two-time propagator from t_start to t for mode(s) k."""
    k = np.asarray(k, dtype=float)
    dt2 = np.asarray(t, dtype=float) ** 2 - np.asarray(t_start, dtype=float) ** 2
    dt1 = np.asarray(t, dtype=float) - np.asarray(t_start, dtype=float)
    if params.convention is Convention.TORUS:
        return math.pi * k * dt2 - 4.0 * math.pi**2 * params.eps * k**2 * dt1
    return 0.5 * k * dt2 - params.eps * k**2 * dt1


def cc_mode(a_k: complex, k: int, params: CcParams, t: float, t_start: float = 0.0) -> complex:
    """Evolve a single Fourier coefficient from t_start to t."""
    if t < 0 or t_start < 0:
        raise ValueError("times must be non-negative")
    return complex(a_k * np.exp(cc_exponent(k, params, t, t_start)))


def cc_evolve(
    spectrum: ModeSpectrum, params: CcParams, t: float, t_start: float = 0.0
) -> ModeSpectrum:
    """Apply cc_mode to every coefficient; mode k is the frequency k * base_frequency."""
    if t < 0 or t_start < 0:
        raise ValueError("times must be non-negative")
    frequencies = spectrum.modes * spectrum.base_frequency
    factors = np.exp(cc_exponent(frequencies, params, t, t_start))
    return ModeSpectrum(spectrum.coefficients * factors, spectrum.base_frequency)


def cr_mode(a_k: complex, k: int, t: float) -> complex:
    """Propagator of the non-degenerate equation dv/dt + i dv/dx = 0: a_k exp(2 pi k t)."""
    return complex(a_k * math.exp(2.0 * math.pi * k * t))


def symbol_re(eps: float, t: ArrayLike, xi: ArrayLike):
    """Real part -(2 pi xi)(t - 2 pi eps xi) of the symbol of the cc operator."""
    xi = np.asarray(xi, dtype=float)
    value = -(2.0 * math.pi * xi) * (np.asarray(t, dtype=float) - 2.0 * math.pi * eps * xi)
    return float(value) if np.ndim(value) == 0 else value


def _scale(params: CcParams) -> float:
    # Oscillating data a(k0 x / eps) carry frequency k0 / eps, so eps drops out.
    return float(params.k0) if params.rescaled else params.eps * params.k0


def transition_time(params: CcParams) -> float:
    """First time the symbol takes negative real values: 2 pi eps k0 (2 pi k0 if rescaled)."""
    return 2.0 * math.pi * _scale(params)


def amplification_time(params: CcParams) -> float:
    """First time the leading mode recovers its initial modulus: 4 pi eps k0 (4 pi k0)."""
    return 4.0 * math.pi * _scale(params)


def predicted_amplification_times(eps: float, n: int) -> Tuple[float, float]:
    """Both normalisations of the linear amplification time: (4 pi eps N, 8 pi eps N)."""
    base = 4.0 * math.pi * eps * n
    return base, 2.0 * base


def linearized_max_im(n: int, params: CcParams, t: ArrayLike):
    """max_x Im v(t, x) for the cc solution issued from sin(2 pi N x).

    The two branches are exp(+g - d) and exp(-g - d), where g is the growth
    part and d the damping part of the exponent in the chosen convention.
    """
    if n < 1:
        raise ValueError(f"mode must be positive, got {n}")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("times must be non-negative")
    if params.convention is Convention.TORUS:
        growth = math.pi * n * t**2
        damping = 4.0 * math.pi**2 * params.eps * n**2 * t
    else:
        growth = 0.5 * n * t**2
        damping = params.eps * n**2 * t
    value = 0.5 * (np.exp(growth - damping) - np.exp(-growth - damping))
    return float(value) if value.ndim == 0 else value


def linearized_overlay(n: int, params: CcParams, t: ArrayLike):
    """Figure-1 thin line: t + linearized_max_im, i.e. max Im of i t + v."""
    return np.asarray(t, dtype=float) + linearized_max_im(n, params, t)
