"""Rescaled-solver runs behind the check presets."""
from __future__ import annotations

import math
from typing import List, Sequence, Tuple

from burgerslab.core.models.config import (
    EnergyPreset,
    RescaledParams,
    Theorem1Preset,
    Theorem2Preset,
)
from burgerslab.core.numerics.spectral_burgers import Trajectory, run_rescaled
from burgerslab.core.numerics.torus_field import ModeSpectrum
from burgerslab.features.experiments.sweep import run_sweep

Job = Tuple[ModeSpectrum, RescaledParams]


def sine_datum(amplitude: float, K: int, k0: int = 1) -> ModeSpectrum:
    """Spectrum of amplitude * sin(2 pi k0 x)."""
    return ModeSpectrum.from_sines({1: amplitude}, K, k0)


def theorem1_jobs(preset: Theorem1Preset) -> List[Job]:
    """alpha = 0 runs up to eps t = T_fraction * 2 pi k0 for every eps of the preset."""
    datum = sine_datum(preset.amplitude, preset.K, preset.k0)
    jobs = []
    for eps in preset.eps_list:
        params = RescaledParams(
            k0=preset.k0,
            eps=eps,
            alpha=0.0,
            K=preset.K,
            dt=preset.dt,
            t_end=preset.T_fraction * 2.0 * math.pi * preset.k0 / eps,
            record_every=preset.record_every,
        )
        jobs.append((datum, params))
    return jobs


def theorem2_jobs(preset: Theorem2Preset) -> List[Job]:
    """Runs from sin(2 pi k0 x) up to the amplification time 4 pi k0 / eps plus T."""
    datum = sine_datum(1.0, preset.K, preset.k0)
    jobs = []
    for eps in preset.eps_list:
        params = RescaledParams(
            k0=preset.k0,
            eps=eps,
            alpha=preset.alpha,
            K=preset.K,
            dt=preset.dt,
            t_end=4.0 * math.pi * preset.k0 / eps + preset.T,
            record_every=preset.record_every,
        )
        jobs.append((datum, params))
    return jobs


def energy_job(preset: EnergyPreset) -> Job:
    params = RescaledParams(
        k0=preset.k0,
        eps=preset.eps,
        alpha=0.0,
        K=preset.K,
        dt=preset.dt,
        t_end=preset.t_end,
        record_every=preset.record_every,
    )
    return sine_datum(preset.amplitude, preset.K, preset.k0), params


def run_job(job: Job) -> Trajectory:
    datum, params = job
    return run_rescaled(datum, params)


def run_jobs(jobs: Sequence[Job], workers: int = 1) -> List[Trajectory]:
    """Trajectories in decreasing eps order."""
    items = [((-params.eps,), (datum, params)) for datum, params in jobs]
    return [trajectory for _, trajectory in run_sweep(run_job, items, workers)]
