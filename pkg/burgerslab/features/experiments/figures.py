"""
Reproduction of the Lax-Friedrichs experiments.

fig1: max Im u against time for single modes, with the linearized envelope
fig4: final computing time t_f against the mode N
fig5: t_f for eight multi-mode data sharing the smallest mode 4
fig6: t_f against the numerical viscosity eps = 5 / J at sigma = h / 10

Every figure returns an ExperimentReport whose tables are written as CSV by
the command line front end. No randomness is involved anywhere.
"""
from __future__ import annotations

import math
from datetime import datetime, timezone
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator
from scipy import stats

from burgerslab.core.logger import get_logger
from burgerslab.core.models.config import CaseSpec, CcParams, Convention, FigurePreset
from burgerslab.core.numerics.cc_propagator import (
    linearized_overlay,
    predicted_amplification_times,
)
from burgerslab.core.numerics.lax_friedrichs import Termination, run
from burgerslab.core.numerics.torus_field import ComplexField
from burgerslab.features.experiments.sweep import run_sweep

logger = get_logger(__name__)

Table = Dict[str, List[float]]

# Figure-5 data, as (modes, amplitudes) triples
FIG5_CASES: List[Tuple[Tuple[int, int, int], Tuple[float, float, float]]] = [
    ((4, 0, 0), (1.0, 0.0, 0.0)),
    ((4, 6, 0), (1.0, 1.0, 0.0)),
    ((4, 8, 0), (1.0, 1.0, 0.0)),
    ((4, 10, 0), (1.0, 1.0, 0.0)),
    ((4, 12, 0), (1.0, 1.0, 0.0)),
    ((4, 6, 8), (1.0, 1.0, 1.0)),
    ((4, 6, 8), (1.0, 2.0, 1.0)),
    ((4, 6, 8), (1.0, 2.0, -1.0)),
]
FIG6_MODE = 10


class CaseResult(BaseModel):
    """One Lax-Friedrichs run and the linear predictions for its smallest mode."""

    case: CaseSpec
    termination: Termination
    t_f: Optional[float] = None
    steps: int = 0
    t_transition: float = 0.0
    t_cc: float = 0.0
    t_cc_double: float = 0.0
    series: Table = Field(default_factory=dict)
    series_file: Optional[str] = None

    @model_validator(mode="after")
    def validate_t_f(self) -> "CaseResult":
        if (self.t_f is not None) != (self.termination is Termination.CFL_BREAK):
            raise ValueError("t_f is recorded exactly when the run ends on a CFL break")
        return self


class ExperimentReport(BaseModel):
    """Cases of one figure, its CSV tables and run metadata."""

    figure: str
    preset: str = "custom"
    cases: List[CaseResult] = Field(default_factory=list)
    tables: Dict[str, Table] = Field(default_factory=dict)
    metadata: Dict[str, float | int | str] = Field(default_factory=dict)

    def t_f_values(self) -> List[Optional[float]]:
        return [case.t_f for case in self.cases]


def case_datum(case: CaseSpec) -> ComplexField:
    """Samples of sum_j a_j sin(2 pi N_j x) on the case grid."""
    x = np.arange(case.J) / case.J
    values = np.zeros(case.J, dtype=np.complex128)
    for n, a in case.modes:
        if n > 0 and a != 0.0:
            values += a * np.sin(2.0 * math.pi * n * x)
    return ComplexField(values)


def horizon(eps: float, n: int, min_horizon: float) -> float:
    """Twice the larger amplification prediction, never below min_horizon."""
    if n <= 0:
        return min_horizon
    return max(2.0 * predicted_amplification_times(eps, n)[1], min_horizon)


def run_case(case: CaseSpec) -> CaseResult:
    """Run one case to its CFL break (or horizon); module level so that it pickles."""
    trace = run(case_datum(case), case.scheme())
    n = case.smallest_mode
    t_cc, t_cc_double = predicted_amplification_times(case.eps, n) if n else (0.0, 0.0)
    series = {key: values.tolist() for key, values in trace.as_arrays().items()}
    logger.info(
        "experiment.case_done",
        label=case.label,
        t_f=trace.t_f,
        t_cc=t_cc,
        termination=trace.termination.value,
    )
    return CaseResult(
        case=case,
        termination=trace.termination,
        t_f=trace.t_f,
        steps=trace.steps,
        t_transition=2.0 * math.pi * case.eps * n,
        t_cc=t_cc,
        t_cc_double=t_cc_double,
        series=series,
    )


def _single_mode_case(
    label: str, n: int, J: int, sigma: float, preset: FigurePreset
) -> CaseSpec:
    eps = 1.0 / (2.0 * sigma * J**2)
    return CaseSpec(
        label=label,
        modes=[(n, 1.0)],
        J=J,
        sigma=sigma,
        t_max=horizon(eps, n, preset.min_horizon),
        record_every=preset.record_every,
    )


def _run_all(cases: Sequence[CaseSpec], workers: int) -> List[CaseResult]:
    items = [((index,), case) for index, case in enumerate(cases)]
    return [result for _, result in run_sweep(run_case, items, workers)]


def _metadata(preset: FigurePreset, **extra: float | int | str) -> Dict[str, float | int | str]:
    sigma = preset.sigma_for(preset.J)
    meta: Dict[str, float | int | str] = {
        "J": preset.J,
        "sigma": sigma,
        "eps": 1.0 / (2.0 * sigma * preset.J**2),
        "cfl_cap": 0.4,
        "created": datetime.now(timezone.utc).isoformat(),
    }
    meta.update(extra)
    return meta


def _t_f(result: CaseResult) -> float:
    return result.t_f if result.t_f is not None else math.nan


def linear_fit(x: Sequence[float], y: Sequence[float]) -> Tuple[float, float, float]:
    """Least-squares line through (x, y): (slope, intercept, r^2)."""
    fit = stats.linregress(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return float(fit.slope), float(fit.intercept), float(fit.rvalue**2)


def max_relative_gap(
    numerical: Sequence[float], linearized: Sequence[float], cap: float
) -> float:
    """
    max |numerical - linearized| / |linearized| over the leading samples with
    numerical <= cap. Samples where both curves vanish count as a zero gap.
    """
    worst = 0.0
    for value, reference in zip(numerical, linearized):
        if value > cap:
            break
        if reference == 0.0:
            if value != 0.0:
                return math.inf
            continue
        worst = max(worst, abs(value - reference) / abs(reference))
    return worst


def fig1(
    preset: FigurePreset, preset_name: str = "custom", workers: int = 1
) -> ExperimentReport:
    """
    max Im u(t) for sin(2 pi N x), N in preset.N, against t + linearized max Im v.

    Both exponent conventions are emitted; the agreement gap uses the torus one.
    """
    sigma = preset.sigma_for(preset.J)
    cases = [_single_mode_case(f"N{n}", n, preset.J, sigma, preset) for n in preset.N]
    results = _run_all(cases, workers)

    tables: Dict[str, Table] = {}
    extras: Dict[str, float | int | str] = {}
    for result in results:
        n = result.case.smallest_mode
        t = np.asarray(result.series["t"])
        torus = linearized_overlay(n, CcParams(eps=result.case.eps), t)
        paper = linearized_overlay(
            n, CcParams(eps=result.case.eps, convention=Convention.PAPER_FIG1), t
        )
        numerical = result.series["max_im"]
        tables[f"fig1_N{n}"] = {
            "t": t.tolist(),
            "max_im": list(numerical),
            "linearized_torus": np.atleast_1d(torus).tolist(),
            "linearized_paper": np.atleast_1d(paper).tolist(),
        }
        extras[f"gap_torus.N{n}"] = max_relative_gap(numerical, torus, preset.gap_cap)
        extras[f"gap_paper.N{n}"] = max_relative_gap(numerical, paper, preset.gap_cap)
        extras[f"t_f.N{n}"] = _t_f(result)

    report = ExperimentReport(
        figure="fig1",
        preset=preset_name,
        cases=results,
        tables=tables,
        metadata=_metadata(preset, **extras),
    )
    logger.info("experiment.figure_done", figure="fig1", cases=len(results))
    return report


def fig4(
    preset: FigurePreset, preset_name: str = "custom", workers: int = 1
) -> ExperimentReport:
    """t_f per mode N with the transition time 2 pi eps N and both amplification times."""
    sigma = preset.sigma_for(preset.J)
    cases = [_single_mode_case(f"N{n}", n, preset.J, sigma, preset) for n in preset.N]
    results = _run_all(cases, workers)

    table: Table = {"N": [], "t_f": [], "t_transition": [], "t_cc": [], "t_cc_double": []}
    for result in results:
        table["N"].append(float(result.case.smallest_mode))
        table["t_f"].append(_t_f(result))
        table["t_transition"].append(result.t_transition)
        table["t_cc"].append(result.t_cc)
        table["t_cc_double"].append(result.t_cc_double)

    extras: Dict[str, float | int | str] = {}
    fit_points = [(n, t) for n, t in zip(table["N"], table["t_f"]) if n >= 6 and math.isfinite(t)]
    if len(fit_points) >= 3:
        slope, intercept, r2 = linear_fit(*zip(*fit_points))
        extras.update({"fit_slope": slope, "fit_intercept": intercept, "fit_r2": r2})

    report = ExperimentReport(
        figure="fig4",
        preset=preset_name,
        cases=results,
        tables={"fig4": table},
        metadata=_metadata(preset, **extras),
    )
    logger.info("experiment.figure_done", figure="fig4", cases=len(results))
    return report


def fig5_cases(preset: FigurePreset) -> List[CaseSpec]:
    sigma = preset.sigma_for(preset.J)
    eps = 1.0 / (2.0 * sigma * preset.J**2)
    cases = []
    for number, (modes, amplitudes) in enumerate(FIG5_CASES, start=1):
        cases.append(
            CaseSpec(
                label=f"case{number}",
                modes=list(zip(modes, amplitudes)),
                J=preset.J,
                sigma=sigma,
                t_max=horizon(eps, 4, preset.min_horizon),
                record_every=preset.record_every,
            )
        )
    return cases


def fig5(
    preset: FigurePreset, preset_name: str = "custom", workers: int = 1
) -> ExperimentReport:
    """t_f for the eight multi-mode data; all share the prediction of mode 4."""
    results = _run_all(fig5_cases(preset), workers)

    table: Table = {"case": [], "t_f": [], "t_cc": [], "t_cc_double": []}
    for number, result in enumerate(results, start=1):
        table["case"].append(float(number))
        table["t_f"].append(_t_f(result))
        table["t_cc"].append(result.t_cc)
        table["t_cc_double"].append(result.t_cc_double)

    values = np.asarray(table["t_f"])
    extras: Dict[str, float | int | str] = {}
    if np.all(np.isfinite(values)):
        mean = float(np.mean(values))
        extras.update({"t_f_mean": mean, "t_f_spread": float(np.ptp(values)) / mean})

    report = ExperimentReport(
        figure="fig5",
        preset=preset_name,
        cases=results,
        tables={"fig5": table},
        metadata=_metadata(preset, **extras),
    )
    logger.info("experiment.figure_done", figure="fig5", cases=len(results))
    return report


def fig6(
    preset: FigurePreset, preset_name: str = "custom", workers: int = 1
) -> ExperimentReport:
    """t_f for sin(20 pi x) on each grid of preset.J_list with sigma = cfl_ratio * h."""
    cases = [
        _single_mode_case(f"J{J}", FIG6_MODE, J, preset.cfl_ratio / J, preset)
        for J in preset.J_list
    ]
    results = _run_all(cases, workers)

    table: Table = {
        "J": [],
        "eps": [],
        "t_f": [],
        "t_transition": [],
        "t_cc": [],
        "t_cc_double": [],
    }
    for result in results:
        table["J"].append(float(result.case.J))
        table["eps"].append(result.case.eps)
        table["t_f"].append(_t_f(result))
        table["t_transition"].append(result.t_transition)
        table["t_cc"].append(result.t_cc)
        table["t_cc_double"].append(result.t_cc_double)

    extras: Dict[str, float | int | str] = {"N": FIG6_MODE}
    points = [(e, t) for e, t in zip(table["eps"], table["t_f"]) if math.isfinite(t)]
    if len(points) >= 3:
        slope, intercept, r2 = linear_fit(*zip(*points))
        extras.update({"fit_slope": slope, "fit_intercept": intercept, "fit_r2": r2})

    report = ExperimentReport(
        figure="fig6",
        preset=preset_name,
        cases=results,
        tables={"fig6": table},
        metadata=_metadata(preset, **extras),
    )
    logger.info("experiment.figure_done", figure="fig6", cases=len(results))
    return report


FIGURES = {"fig1": fig1, "fig4": fig4, "fig5": fig5, "fig6": fig6}
