"""
Run configuration: a flat `key = value` file merged with command-line overrides.

Example file:

    figure = fig4
    preset = ci
    workers = 2

Overrides win over file entries. Every value is type-checked before any run
starts; errors name the offending key.
"""
from __future__ import annotations

from pathlib import Path
from typing import Any, List, Literal, Mapping, Optional

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from burgerslab.core.exceptions import ConfigError
from burgerslab.core.models.config import Convention
from burgerslab.features.theory.manifest import parse_key_values

Command = Literal["simulate", "cc", "spectral", "check", "figure"]
FigureName = Literal["fig1", "fig4", "fig5", "fig6"]
CheckName = Literal["pw", "theorem1", "theorem2", "errfn", "energy"]


class Config(BaseModel):
    """Selector plus parameter overrides of one run."""

    model_config = ConfigDict(extra="forbid")

    command: Optional[Command] = None
    figure: Optional[FigureName] = None
    check: Optional[CheckName] = None
    preset: str = "ci"

    J: Optional[int] = Field(default=None, ge=2)
    sigma: Optional[float] = Field(default=None, gt=0)
    N: Optional[List[int]] = None
    t_max: Optional[float] = Field(default=None, gt=0)
    eps: Optional[float] = Field(default=None, gt=0)
    alpha: Optional[float] = Field(default=None, ge=0)
    abar: Optional[float] = None
    k0: Optional[int] = Field(default=None, ge=1)
    K: Optional[int] = Field(default=None, ge=4)
    dt: Optional[float] = Field(default=None, gt=0)
    t_end: Optional[float] = Field(default=None, gt=0)
    convention: Optional[Convention] = None
    calibrate: bool = False
    calibration: Optional[Path] = None

    output_dir: Optional[Path] = None
    workers: Optional[int] = Field(default=None, ge=1)

    @field_validator("N", mode="before")
    @classmethod
    def split_modes(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [item.strip() for item in value.split(",") if item.strip()]
        if isinstance(value, int):
            return [value]
        return value

    @model_validator(mode="after")
    def resolve_command(self) -> "Config":
        if self.figure is not None and self.check is not None:
            raise ValueError("figure and check are mutually exclusive")
        implied = "figure" if self.figure else "check" if self.check else None
        if self.command is None and implied is None:
            raise ValueError("missing required key (command, figure or check)")
        if self.command is None:
            self.command = implied
        elif implied is not None and self.command != implied:
            raise ValueError(f"command {self.command!r} conflicts with a {implied} selector")
        if self.command == "figure" and self.figure is None:
            raise ValueError("figure command needs a figure name")
        if self.command == "check" and self.check is None:
            raise ValueError("check command needs a check name")
        return self


def _offending_key(error: ValidationError) -> str:
    first = error.errors()[0]
    location = first.get("loc") or ()
    return str(location[0]) if location else "command"


def parse_config(text: str, overrides: Optional[Mapping[str, Any]] = None) -> Config:
    """
    Build a Config from key = value text and overrides (None values are ignored).

    Raises:
        ConfigError: unknown key, malformed value or missing selector
    """
    values: dict[str, Any] = dict(parse_key_values(text))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})

    for key in values:
        if key not in Config.model_fields:
            raise ConfigError(key, "unknown key")
    try:
        return Config.model_validate(values)
    except ValidationError as exc:
        key = _offending_key(exc)
        raise ConfigError(key, exc.errors()[0]["msg"]) from exc


def load_config(path: Optional[Path], overrides: Optional[Mapping[str, Any]] = None) -> Config:
    """parse_config on the content of path (an absent path reads as empty text)."""
    text = Path(path).read_text(encoding="utf-8") if path is not None else ""
    return parse_config(text, overrides)
