"""Pydantic models for solver parameters and experiment presets."""
from __future__ import annotations

import math
from enum import Enum
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from burgerslab.core.config import DEFAULT_PRESETS_PATH


class Convention(str, Enum):
    """Exponent normalisation of the degenerate Cauchy-Riemann propagator."""
    TORUS = "torus"            # e^{2 pi i k x} modes on the unit torus
    PAPER_FIG1 = "paper_fig1"  # exponent t^2 N / 2 - eps t N^2, Figure 1 overlay only


class SchemeConfig(BaseModel):
    """Run contract of the explicit Lax-Friedrichs solver."""

    model_config = ConfigDict(frozen=True)

    J: int = Field(..., ge=2, description="Number of grid points on [0, 1)")
    sigma: float = Field(..., gt=0, description="Time step")
    cfl_cap: float = Field(default=0.4, gt=0, description="Numerator of the CFL bound")
    t_max: float = Field(default=1.0, gt=0, description="Time horizon")
    record_every: int = Field(default=20, ge=1, description="Recording stride (steps)")
    forcing: bool = Field(default=True, description="Add the constant source i")

    @classmethod
    def from_ratio(cls, J: int, ratio: float = 0.1, **kwargs) -> "SchemeConfig":
        """Build a configuration with sigma = ratio * h."""
        return cls(J=J, sigma=ratio / J, **kwargs)

    @property
    def h(self) -> float:
        return 1.0 / self.J

    @property
    def cfl_ratio(self) -> float:
        """sigma / h, rounded so that 5e-5 * 2000 reads as exactly 0.1."""
        return round(self.sigma * self.J, 12)

    @property
    def blowup_threshold(self) -> float:
        """Magnitude at which the CFL condition breaks (4 for ratio 0.1, cap 0.4)."""
        return self.cfl_cap / self.cfl_ratio

    @property
    def n_steps(self) -> int:
        return max(1, math.ceil(round(self.t_max / self.sigma, 9)))


class CcParams(BaseModel):
    """Parameters of the viscous degenerate Cauchy-Riemann equation."""

    model_config = ConfigDict(frozen=True)

    eps: float = Field(..., gt=0, description="Viscosity")
    k0: int = Field(default=1, ge=1, description="Smallest positive mode of the datum")
    convention: Convention = Field(default=Convention.TORUS)
    rescaled: bool = Field(
        default=False, description="Datum oscillates as a(k0 x / eps) instead of a(k0 x)"
    )


class RescaledParams(BaseModel):
    """Parameters of the rescaled equation solved by the Galerkin solver."""

    model_config = ConfigDict(frozen=True)

    k0: int = Field(default=1, ge=1, description="Base mode")
    eps: float = Field(..., gt=0, description="Viscosity of the original equation")
    alpha: float = Field(default=0.0, ge=0, description="Amplitude exponent")
    abar: float = Field(default=0.0, description="Mean of the datum")
    K: int = Field(default=16, ge=4, description="Truncation order")
    dt: float = Field(default=1e-2, gt=0, description="Fast-time step")
    t_end: float = Field(default=1.0, gt=0, description="Fast-time horizon")
    record_every: int = Field(default=10, ge=1, description="Recording stride (steps)")
    scheme: Literal["rk4", "midpoint"] = Field(default="rk4")
    nonlinear: bool = Field(default=True, description="Keep the convective term")

    @property
    def amplitude(self) -> float:
        """Coefficient eps**alpha of the convective term (0 when switched off)."""
        return self.eps ** self.alpha if self.nonlinear else 0.0

    @property
    def amplification_time(self) -> float:
        """Fast time 4 pi k0 / eps at which Re lambda_1 returns to zero."""
        return 4.0 * math.pi * self.k0 / self.eps

    @property
    def n_steps(self) -> int:
        return max(1, math.ceil(round(self.t_end / self.dt, 9)))


class CaseSpec(BaseModel):
    """One Lax-Friedrichs experiment: datum sum_j a_j sin(N_j 2 pi x) on a grid."""

    model_config = ConfigDict(frozen=True)

    label: str = Field(..., min_length=1)
    modes: List[Tuple[int, float]] = Field(..., min_length=1)
    J: int = Field(..., ge=2)
    sigma: float = Field(..., gt=0)
    t_max: float = Field(..., gt=0)
    record_every: int = Field(default=20, ge=1)

    @field_validator("modes")
    @classmethod
    def validate_modes(cls, value: List[Tuple[int, float]]) -> List[Tuple[int, float]]:
        for n, _ in value:
            if n < 0:
                raise ValueError("mode numbers must be non-negative")
        return value

    @property
    def is_live(self) -> bool:
        return any(a != 0.0 and n > 0 for n, a in self.modes)

    @property
    def smallest_mode(self) -> int:
        """Smallest non-zero mode carrying a non-zero amplitude (0 for a dead case)."""
        live = [n for n, a in self.modes if a != 0.0 and n > 0]
        return min(live) if live else 0

    @property
    def eps(self) -> float:
        """Effective viscosity h^2 / (2 sigma) of the scheme."""
        return 1.0 / (2.0 * self.sigma * self.J**2)

    def scheme(self) -> SchemeConfig:
        return SchemeConfig(
            J=self.J, sigma=self.sigma, t_max=self.t_max, record_every=self.record_every
        )


class FigurePreset(BaseModel):
    """Grid, time step and mode list of one figure reproduction."""

    model_config = ConfigDict(frozen=True)

    J: int = Field(default=1024, ge=2)
    sigma: Optional[float] = Field(default=None, gt=0, description="Defaults to cfl_ratio / J")
    cfl_ratio: float = Field(default=0.1, gt=0)
    N: List[int] = Field(default_factory=list)
    J_list: List[int] = Field(default_factory=list)
    min_horizon: float = Field(default=1.0, gt=0)
    record_every: int = Field(default=20, ge=1)
    gap_cap: float = Field(default=0.5, gt=0, description="Figure-1 agreement window")

    @field_validator("N", "J_list")
    @classmethod
    def validate_positive(cls, value: List[int]) -> List[int]:
        if any(v < 1 for v in value):
            raise ValueError("entries must be positive")
        return value

    def sigma_for(self, J: int) -> float:
        if self.sigma is not None and J == self.J:
            return self.sigma
        return self.cfl_ratio / J


class Theorem1Preset(BaseModel):
    k0: int = Field(default=1, ge=1)
    amplitude: float = Field(default=0.05, gt=0)
    s: int = Field(default=2, ge=0)
    eps_list: List[float] = Field(default_factory=lambda: [2e-2, 1e-2])
    T_fraction: float = Field(default=0.9, gt=0, lt=1)
    K: int = Field(default=16, ge=4)
    dt: float = Field(default=5e-3, gt=0)
    record_every: int = Field(default=10, ge=1)
    c_check: float = Field(default=10.0, gt=0)


class Theorem2Preset(BaseModel):
    k0: int = Field(default=1, ge=1)
    alpha: float = Field(default=0.4, gt=1.0 / 3.0)
    eps_list: List[float] = Field(default_factory=lambda: [1e-2, 5e-3])
    K: int = Field(default=16, ge=4)
    dt: float = Field(default=2e-2, gt=0)
    T: float = Field(default=1.0, gt=0)
    record_every: int = Field(default=50, ge=1)


class EnergyPreset(BaseModel):
    k0: int = Field(default=1, ge=1)
    amplitude: float = Field(default=0.05, gt=0)
    s: int = Field(default=2, ge=0)
    eps: float = Field(default=1e-2, gt=0)
    K: int = Field(default=16, ge=4)
    dt: float = Field(default=5e-3, gt=0)
    t_end: float = Field(default=50.0, gt=0)
    record_every: int = Field(default=10, ge=1)


class CheckPresets(BaseModel):
    theorem1: Theorem1Preset = Field(default_factory=Theorem1Preset)
    theorem2: Theorem2Preset = Field(default_factory=Theorem2Preset)
    energy: EnergyPreset = Field(default_factory=EnergyPreset)


class PresetBook(BaseModel):
    """Top-level content of presets.yaml."""

    figures: Dict[str, Dict[str, FigurePreset]]
    checks: CheckPresets = Field(default_factory=CheckPresets)

    @model_validator(mode="after")
    def validate_figures(self) -> "PresetBook":
        for name, presets in self.figures.items():
            if not presets:
                raise ValueError(f"figure {name} has no presets")
        return self

    def figure(self, name: str, preset: str) -> FigurePreset:
        try:
            return self.figures[name][preset]
        except KeyError as exc:
            raise KeyError(f"no preset {preset!r} for figure {name!r}") from exc


def load_presets(path: Path | str = DEFAULT_PRESETS_PATH) -> PresetBook:
    """Load figure and check presets from presets.yaml."""
    config_path = Path(path)
    data = yaml.safe_load(config_path.read_text(encoding="utf-8"))
    return PresetBook.model_validate(data)
