"""Custom exceptions for the simulation laboratory"""
from typing import Any, Optional


class BurgersLabError(Exception):
    """Base exception for all laboratory errors"""
    pass


class GridError(BurgersLabError):
    """Grid size or spectral truncation is inconsistent"""
    pass


class SolverDivergedError(BurgersLabError):
    """Non-finite values appeared in a solver state"""

    def __init__(self, message: str, t: float, trace: Optional[Any] = None):
        super().__init__(message)
        self.t = t
        self.trace = trace


class SpectralOverflowError(BurgersLabError):
    """Propagator exponent left the floating point range"""

    def __init__(self, message: str, t: float, exponent: float):
        super().__init__(message)
        self.t = t
        self.exponent = exponent


class CheckPreconditionError(BurgersLabError):
    """Hypotheses of a verification check are not met"""
    pass


class ConfigError(BurgersLabError):
    """Invalid configuration entry"""

    def __init__(self, key: str, reason: str):
        super().__init__(f"{key}: {reason}")
        self.key = key
        self.reason = reason


class OutputError(BurgersLabError):
    """Output file could not be written"""
    pass
