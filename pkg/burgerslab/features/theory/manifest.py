"""
Line-oriented key = value text used for check reports, calibration
manifests and run manifests.
"""
from __future__ import annotations

from pathlib import Path
from typing import Dict, Mapping

from pydantic import BaseModel, ConfigDict, Field

from burgerslab.core.exceptions import ConfigError, OutputError
from burgerslab.core.logger import get_logger

logger = get_logger(__name__)


def format_value(value: object) -> str:
    """Floats keep 17 significant digits so that values survive a round trip."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def dump_key_values(pairs: Mapping[str, object]) -> str:
    return "".join(f"{key} = {format_value(value)}\n" for key, value in pairs.items())


def parse_key_values(text: str) -> Dict[str, str]:
    """
    Parse `key = value` lines. Blank lines and lines starting with '#' are skipped.

    Raises:
        ConfigError: a line has no '=' or an empty key
    """
    pairs: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(key or f"line {number}", f"expected 'key = value', got {raw!r}")
        pairs[key] = value.strip()
    return pairs


def write_text(path: Path, text: str) -> Path:
    """Write text, mapping filesystem failures to OutputError."""
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc
    return path


class CalibrationManifest(BaseModel):
    """Frozen constant of a calibrated check and the fits it was derived from."""

    model_config = ConfigDict(frozen=True)

    check: str
    s: int = Field(..., ge=0)
    c_check: float = Field(..., gt=0)
    safety: float = Field(default=2.0, ge=1.0)
    constants: Dict[str, float] = Field(default_factory=dict)

    def to_text(self) -> str:
        pairs: Dict[str, object] = {
            "check": self.check,
            "s": self.s,
            "c_check": self.c_check,
            "safety": self.safety,
        }
        for name, value in sorted(self.constants.items()):
            pairs[f"constant.{name}"] = value
        return dump_key_values(pairs)

    @classmethod
    def from_text(cls, text: str) -> "CalibrationManifest":
        pairs = parse_key_values(text)
        constants = {
            key.split(".", 1)[1]: float(value)
            for key, value in pairs.items()
            if key.startswith("constant.")
        }
        try:
            return cls(
                check=pairs["check"],
                s=int(pairs["s"]),
                c_check=float(pairs["c_check"]),
                safety=float(pairs.get("safety", 2.0)),
                constants=constants,
            )
        except KeyError as exc:
            raise ConfigError(str(exc.args[0]), "missing from calibration manifest") from exc

    def save(self, path: Path | str) -> Path:
        target = write_text(Path(path), self.to_text())
        logger.info("calibration.saved", path=str(target), check=self.check, c_check=self.c_check)
        return target

    @classmethod
    def load(cls, path: Path | str) -> "CalibrationManifest":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))
