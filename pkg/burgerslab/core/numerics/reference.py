"""Pseudo-spectral reference solver for du/dt + u du/dx - eps d2u/dx2 = i.

Fourier collocation on a fine grid with 2/3-rule dealiasing and
integrating-factor RK4 time stepping (the diffusion is integrated exactly).
Used as the fine-grid oracle against which Lax-Friedrichs runs are measured.
"""
from __future__ import annotations

import math

import numpy as np

from burgerslab.core.exceptions import GridError, SolverDivergedError
from burgerslab.core.logger import get_logger
from burgerslab.core.numerics.torus_field import ComplexField, dft, idft

logger = get_logger(__name__)


def solve_viscous_burgers(
    datum: ComplexField,
    eps: float,
    t_end: float,
    dt: float,
    forcing: bool = True,
) -> ComplexField:
    """Integrate the viscous equation from datum up to t_end on datum's grid."""
    if eps < 0:
        raise ValueError(f"viscosity must be non-negative, got {eps}")
    J = datum.J
    if J < 8:
        raise GridError(f"reference grid too coarse: J={J}")

    n_steps = max(1, math.ceil(round(t_end / dt, 9)))
    dt = t_end / n_steps

    kappa = 2.0 * np.pi * np.fft.fftfreq(J, d=1.0 / J)
    dealias = np.abs(np.fft.fftfreq(J, d=1.0 / J)) < J / 3.0
    half = np.exp(-eps * kappa**2 * dt / 2.0)
    full = half * half
    source = np.zeros(J, dtype=np.complex128)
    if forcing:
        source[0] = 1j * J  # unnormalised FFT of the constant i

    def rhs(u_hat: np.ndarray) -> np.ndarray:
        u = np.fft.ifft(u_hat * dealias)
        return -0.5j * kappa * np.fft.fft(u * u) * dealias + source

    u_hat = np.fft.fft(datum.samples)
    for _ in range(n_steps):
        k1 = rhs(u_hat)
        k2 = rhs(half * (u_hat + 0.5 * dt * k1))
        k3 = rhs(half * u_hat + 0.5 * dt * k2)
        k4 = rhs(full * u_hat + dt * half * k3)
        u_hat = full * u_hat + dt / 6.0 * (full * k1 + 2.0 * half * (k2 + k3) + k4)
        if not np.all(np.isfinite(u_hat)):
            raise SolverDivergedError("reference solver produced non-finite values", t=t_end)

    logger.debug("reference.solved", J=J, eps=eps, t_end=t_end, steps=n_steps)
    return ComplexField(np.fft.ifft(u_hat))


def resample(field: ComplexField, J: int, K: int) -> ComplexField:
    """Spectral interpolation of field onto a J-point grid through modes |k| <= K."""
    return idft(dft(field, K), J)
