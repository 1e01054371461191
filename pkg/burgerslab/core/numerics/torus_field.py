"""Complex fields on the unit torus and their truncated Fourier spectra.

Fourier convention, fixed for the whole package:

    f(x)  = sum_k c_k exp(+2 pi i k k0 x)
    c_k   = (1/J) sum_j exp(-2 pi i k k0 j / J) f(x_j),   x_j = j / J

so that c_0 is the mean of the field over [0, 1). Spectra store the modes
k = -K..K in increasing order; mode k stands for the physical frequency k * k0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from burgerslab.core.exceptions import GridError


def _frozen(values: np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=np.complex128, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class ComplexField:
    """Complex samples u(x_j), x_j = j / J, on a uniform grid of the unit torus."""

    samples: np.ndarray

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples)
        if samples.ndim != 1:
            raise GridError(f"samples must be one-dimensional, got shape {samples.shape}")
        if samples.size < 2:
            raise GridError(f"grid needs at least 2 points, got {samples.size}")
        object.__setattr__(self, "samples", _frozen(samples))

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], J: int) -> "ComplexField":
        """Sample func on the grid x_j = j / J."""
        return cls(func(grid(J)))

    @classmethod
    def constant(cls, value: complex, J: int) -> "ComplexField":
        return cls(np.full(J, value, dtype=np.complex128))

    @property
    def J(self) -> int:
        return int(self.samples.size)

    @property
    def h(self) -> float:
        return 1.0 / self.J

    @property
    def x(self) -> np.ndarray:
        return grid(self.J)

    def shifted(self, cells: int) -> "ComplexField":
        """Translate by a whole number of grid cells: u'(x_j) = u(x_{j - cells})."""
        return ComplexField(np.roll(self.samples, cells))


@dataclass(frozen=True)
class ModeSpectrum:
    """Coefficients c_k for k = -K..K; mode k is the physical frequency k * base_frequency."""

    coefficients: np.ndarray
    base_frequency: int = 1

    def __post_init__(self) -> None:
        coefficients = np.asarray(self.coefficients)
        if coefficients.ndim != 1 or coefficients.size % 2 != 1:
            raise GridError("coefficients must be a 1-D array of odd length 2K + 1")
        if self.base_frequency < 1:
            raise GridError(f"base frequency must be positive, got {self.base_frequency}")
        object.__setattr__(self, "coefficients", _frozen(coefficients))

    @classmethod
    def zeros(cls, K: int, base_frequency: int = 1) -> "ModeSpectrum":
        return cls(np.zeros(2 * K + 1, dtype=np.complex128), base_frequency)

    @classmethod
    def from_modes(
        cls, modes: Mapping[int, complex], K: int | None = None, base_frequency: int = 1
    ) -> "ModeSpectrum":
        """Build a spectrum from a sparse {k: c_k} mapping."""
        if K is None:
            K = max((abs(k) for k in modes), default=0)
        values = np.zeros(2 * K + 1, dtype=np.complex128)
        for k, c in modes.items():
            if abs(k) > K:
                raise GridError(f"mode {k} exceeds truncation order {K}")
            values[k + K] = c
        return cls(values, base_frequency)

    @classmethod
    def from_sines(
        cls, terms: Mapping[int, float], K: int, base_frequency: int = 1
    ) -> "ModeSpectrum":
        """Spectrum of sum_n a_n sin(2 pi n k0 x): c_n = a_n / 2i, c_-n = -a_n / 2i."""
        modes: dict[int, complex] = {}
        for n, a in terms.items():
            if n == 0:
                continue
            modes[n] = modes.get(n, 0.0) + a / 2j
            modes[-n] = modes.get(-n, 0.0) - a / 2j
        return cls.from_modes(modes, K, base_frequency)

    @property
    def K(self) -> int:
        return (self.coefficients.size - 1) // 2

    @property
    def modes(self) -> np.ndarray:
        """Mode indices -K..K aligned with coefficients."""
        return np.arange(-self.K, self.K + 1)

    @property
    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers 2 pi k k0 of each mode."""
        return 2.0 * np.pi * self.modes * self.base_frequency

    @property
    def mean(self) -> complex:
        return complex(self.coefficients[self.K])

    def __getitem__(self, k: int) -> complex:
        if abs(k) > self.K:
            return 0j
        return complex(self.coefficients[k + self.K])

    def is_real(self, atol: float = 1e-13) -> bool:
        """True when c_-k = conj(c_k) for every k."""
        mirrored = self.coefficients[::-1]
        return bool(np.allclose(mirrored, np.conj(self.coefficients), rtol=0, atol=atol))

    def real_part(self) -> "ModeSpectrum":
        """Spectrum of Re f: (c_k + conj c_-k) / 2."""
        mirrored = np.conj(self.coefficients[::-1])
        return ModeSpectrum(0.5 * (self.coefficients + mirrored), self.base_frequency)

    def imag_part(self) -> "ModeSpectrum":
        """Spectrum of Im f: (c_k - conj c_-k) / 2i."""
        mirrored = np.conj(self.coefficients[::-1])
        return ModeSpectrum((self.coefficients - mirrored) / 2j, self.base_frequency)

    def derivative(self) -> "ModeSpectrum":
        """Spectrum of d/dx."""
        return ModeSpectrum(1j * self.wavenumbers * self.coefficients, self.base_frequency)

    def without_mean(self) -> "ModeSpectrum":
        values = np.array(self.coefficients)
        values[self.K] = 0.0
        return ModeSpectrum(values, self.base_frequency)

    def truncated(self, K: int) -> "ModeSpectrum":
        """Restrict to |k| <= K, zero-padding when K exceeds the current order."""
        values = np.zeros(2 * K + 1, dtype=np.complex128)
        keep = min(K, self.K)
        values[K - keep:K + keep + 1] = self.coefficients[self.K - keep:self.K + keep + 1]
        return ModeSpectrum(values, self.base_frequency)

    def smallest_populated_mode(self, atol: float = 0.0) -> int:
        """Smallest |k| > 0 with |c_k| > atol, or 0 when only the mean is populated."""
        populated = np.abs(self.coefficients) > atol
        populated[self.K] = False
        ks = np.abs(self.modes[populated])
        return int(ks.min()) if ks.size else 0


def grid(J: int) -> np.ndarray:
    """Grid points x_j = j / J of [0, 1)."""
    if J < 2:
        raise GridError(f"grid needs at least 2 points, got {J}")
    return np.arange(J) / J


def _check_truncation(K: int, J: int, base_frequency: int) -> None:
    if K < 0:
        raise GridError(f"truncation order must be non-negative, got {K}")
    if 2 * K * base_frequency + 1 > J:
        raise GridError(
            f"truncation K={K} (k0={base_frequency}) needs 2*K*k0 + 1 <= J, got J={J}"
        )


def dft(field: ComplexField, K: int, base_frequency: int = 1) -> ModeSpectrum:
    """Forward transform with 1/J normalisation, truncated to |k| <= K."""
    _check_truncation(K, field.J, base_frequency)
    full = np.fft.fft(field.samples) / field.J
    index = (np.arange(-K, K + 1) * base_frequency) % field.J
    return ModeSpectrum(full[index], base_frequency)


def idft(spectrum: ModeSpectrum, J: int) -> ComplexField:
    """Synthesise samples_j = sum_k c_k exp(2 pi i k k0 j / J)."""
    _check_truncation(spectrum.K, J, spectrum.base_frequency)
    full = np.zeros(J, dtype=np.complex128)
    index = (spectrum.modes * spectrum.base_frequency) % J
    full[index] = spectrum.coefficients
    return ComplexField(np.fft.ifft(full) * J)


def sobolev_norm(spectrum: ModeSpectrum, s: int) -> float:
    """Euclidean H^s norm: (sum_{a <= s} |d^a w / dx^a|_{L2}^2)^(1/2)."""
    if s < 0:
        raise ValueError(f"Sobolev index must be non-negative, got {s}")
    squared = spectrum.wavenumbers**2
    weights = np.sum(np.power.outer(squared, np.arange(s + 1)), axis=1)
    return float(np.sqrt(np.sum(weights * np.abs(spectrum.coefficients) ** 2)))


def l2_norm(spectrum: ModeSpectrum) -> float:
    return sobolev_norm(spectrum, 0)


def l2_norm_samples(field: ComplexField) -> float:
    """Discrete L2 norm (sum_j |u_j|^2 / J)^(1/2); equals l2_norm by Parseval."""
    return float(np.sqrt(np.mean(np.abs(field.samples) ** 2)))


def linf_max_im(field: ComplexField) -> float:
    """max_j Im u_j."""
    return float(np.max(field.samples.imag))


def linf_norm(field: ComplexField) -> float:
    return float(np.max(np.abs(field.samples)))
