"""Core Pydantic models for configuration."""

from .config import (
    CaseSpec,
    CcParams,
    CheckPresets,
    Convention,
    EnergyPreset,
    FigurePreset,
    PresetBook,
    RescaledParams,
    SchemeConfig,
    Theorem1Preset,
    Theorem2Preset,
    load_presets,
)

__all__ = [
    "CaseSpec",
    "CcParams",
    "CheckPresets",
    "Convention",
    "EnergyPreset",
    "FigurePreset",
    "PresetBook",
    "RescaledParams",
    "SchemeConfig",
    "Theorem1Preset",
    "Theorem2Preset",
    "load_presets",
]
