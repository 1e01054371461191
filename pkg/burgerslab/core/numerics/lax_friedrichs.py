"""Explicit Lax-Friedrichs solver for du/dt + u du/dx = i on the unit torus.

The scheme is the conservative one,

    u'_j = (u_{j+1} + u_{j-1}) / 2 - (sigma / 2h) (F(u_{j+1}) - F(u_{j-1})) + i sigma,
    F(u) = u^2 / 2,

which is first-order consistent with the inviscid equation and second-order
consistent with the viscous one for eps = h^2 / (2 sigma). Runs stop when the
CFL condition sigma/h < cap / max(max|Re u|, max Im u) breaks; the last time at
which it held is the final computing time t_f.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np

from burgerslab.core.exceptions import GridError, SolverDivergedError
from burgerslab.core.logger import get_logger
from burgerslab.core.models.config import SchemeConfig
from burgerslab.core.numerics.torus_field import ComplexField

logger = get_logger(__name__)


class Termination(str, Enum):
    """Why a run stopped."""
    HORIZON_REACHED = "horizon_reached"
    CFL_BREAK = "cfl_break"


@dataclass
class RunTrace:
    """Time series recorded by run().

    max_im_shifted is max_j Im(u_j - i t), the imaginary excess over the trivial
    solution i t.
    """

    config: SchemeConfig
    times: List[float] = field(default_factory=list)
    max_im: List[float] = field(default_factory=list)
    max_re: List[float] = field(default_factory=list)
    max_im_shifted: List[float] = field(default_factory=list)
    t_f: Optional[float] = None
    termination: Optional[Termination] = None
    steps: int = 0
    final_field: Optional[ComplexField] = None

    def record(self, t: float, u: np.ndarray) -> None:
        if self.times and self.times[-1] == t:
            return
        top = float(np.max(u.imag))
        self.times.append(t)
        self.max_im.append(top)
        self.max_re.append(float(np.max(np.abs(u.real))))
        self.max_im_shifted.append(top - t)

    def as_arrays(self) -> dict[str, np.ndarray]:
        return {
            "t": np.asarray(self.times),
            "max_im": np.asarray(self.max_im),
            "max_re": np.asarray(self.max_re),
            "max_im_shifted": np.asarray(self.max_im_shifted),
        }


def effective_viscosity(cfg: SchemeConfig) -> float:
    """Numerical viscosity h^2 / (2 sigma) of the scheme."""
    return cfg.h**2 / (2.0 * cfg.sigma)


def trivial_solution(t: float) -> complex:
    """Exact solution u = i t issued from the zero datum."""
    return 1j * t


def _stencil_update(u: np.ndarray, ratio: float, source: complex) -> np.ndarray:
    right = np.roll(u, -1)
    left = np.roll(u, 1)
    return 0.5 * (right + left) - 0.25 * ratio * (right * right - left * left) + source


def _cfl_holds(u: np.ndarray, cfg: SchemeConfig) -> bool:
    peak = max(float(np.max(np.abs(u.real))), float(np.max(u.imag)))
    if peak <= 0.0:
        return True
    return cfg.cfl_ratio < cfg.cfl_cap / peak


def cfl_ok(u: ComplexField, cfg: SchemeConfig) -> bool:
    """CFL test of the run loop; a zero (or non-positive) peak always passes."""
    return _cfl_holds(u.samples, cfg)


def lf_step(u: ComplexField, cfg: SchemeConfig) -> ComplexField:
    """Advance one time step. The caller is responsible for the CFL check."""
    if u.J != cfg.J:
        raise GridError(f"field has {u.J} points, configuration expects {cfg.J}")
    source = 1j * cfg.sigma if cfg.forcing else 0.0
    return ComplexField(_stencil_update(u.samples, cfg.sigma * cfg.J, source))


def run(datum: ComplexField, cfg: SchemeConfig) -> RunTrace:
    """Step from datum until t_max or until the CFL condition breaks.

    Raises:
        GridError: datum length differs from cfg.J
        SolverDivergedError: the state became non-finite
    """
    if datum.J != cfg.J:
        raise GridError(f"datum has {datum.J} points, configuration expects {cfg.J}")

    ratio = cfg.sigma * cfg.J
    source = 1j * cfg.sigma if cfg.forcing else 0.0
    trace = RunTrace(config=cfg)
    u = np.array(datum.samples)
    trace.record(0.0, u)

    log = logger.bind(J=cfg.J, sigma=cfg.sigma, t_max=cfg.t_max)
    log.debug("lax_friedrichs.run_started", eps=effective_viscosity(cfg))

    if not _cfl_holds(u, cfg):
        log.warning("lax_friedrichs.datum_violates_cfl")
        trace.termination = Termination.CFL_BREAK
        trace.t_f = 0.0
        trace.final_field = ComplexField(u)
        return trace

    n = 0
    while n < cfg.n_steps:
        candidate = _stencil_update(u, ratio, source)
        t = (n + 1) * cfg.sigma
        if not np.all(np.isfinite(candidate)):
            trace.record(n * cfg.sigma, u)
            trace.steps = n
            log.error("lax_friedrichs.diverged", t=t, step=n + 1)
            raise SolverDivergedError(f"non-finite state at t={t:.6g}", t=t, trace=trace)
        u = candidate
        n += 1
        if not _cfl_holds(u, cfg):
            trace.termination = Termination.CFL_BREAK
            trace.t_f = (n - 1) * cfg.sigma
            trace.record(t, u)
            break
        if n % cfg.record_every == 0:
            trace.record(t, u)
    else:
        trace.termination = Termination.HORIZON_REACHED
        trace.record(n * cfg.sigma, u)

    trace.steps = n
    trace.final_field = ComplexField(u)
    log.info(
        "lax_friedrichs.run_finished",
        termination=trace.termination.value,
        t_f=trace.t_f,
        steps=n,
    )
    return trace
