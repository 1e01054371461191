"""
burgerslab command line.

    burgerslab simulate --N 16 [--J 2000 --sigma 5e-5 --t-max 1.0]
    burgerslab cc --N 16 --eps 2.5e-3 [--t-max 1.0 --convention torus]
    burgerslab spectral [--eps 1e-2 --alpha 0.4 --k0 1 --K 16 --dt 1e-2 --t-end 1300]
    burgerslab check {pw,theorem1,theorem2,errfn,energy} [--calibrate | --calibration FILE]
    burgerslab figure {fig1,fig4,fig5,fig6} [--preset ci|paper]

Exit codes: 0 success, 1 failed check, 2 usage or configuration error.
Logs go to standard error; data only to the run directory.
"""
from __future__ import annotations

import argparse
import math
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np

from burgerslab.cli.config_file import Config, load_config
from burgerslab.cli.series_io import emit_csv
from burgerslab.cli.svg import PlotSeries, emit_svg
from burgerslab.core.config import get_settings
from burgerslab.core.exceptions import BurgersLabError, CheckPreconditionError, ConfigError
from burgerslab.core.logger import get_logger
from burgerslab.core.models.config import (
    CaseSpec,
    CcParams,
    Convention,
    FigurePreset,
    RescaledParams,
    load_presets,
)
from burgerslab.core.numerics import cc_propagator
from burgerslab.core.numerics.spectral_burgers import run_rescaled
from burgerslab.core.numerics.torus_field import ModeSpectrum
from burgerslab.features.experiments.figures import FIGURES, ExperimentReport, horizon, run_case
from burgerslab.features.theory import checks, runs
from burgerslab.features.theory.checks import CheckReport
from burgerslab.features.theory.manifest import (
    CalibrationManifest,
    dump_key_values,
    write_text,
)

logger = get_logger(__name__)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2


class RunDirectory:
    """Fresh directory under the output root; every written file lands in manifest.txt."""

    def __init__(self, root: Path, name: str):
        stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S%f")
        self.path = root / f"{name}-{stamp}"
        self.path.mkdir(parents=True, exist_ok=False)
        self.files: List[str] = []
        self.entries: Dict[str, object] = {"created": datetime.now(timezone.utc).isoformat()}

    def csv(self, name: str, columns: Mapping[str, Sequence[float]]) -> Path:
        self.files.append(name)
        return emit_csv(columns, self.path / name)

    def svg(self, name: str, series: Sequence[PlotSeries], **labels: str) -> Path:
        self.files.append(name)
        return emit_svg(series, self.path / name, **labels)

    def text(self, name: str, content: str) -> Path:
        self.files.append(name)
        return write_text(self.path / name, content)

    def close(self) -> Path:
        entries = dict(self.entries)
        for index, name in enumerate(self.files):
            entries[f"file.{index}"] = name
        return write_text(self.path / "manifest.txt", dump_key_values(entries))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="key = value config file")
    common.add_argument("--output-dir", dest="output_dir", type=Path, default=None)
    common.add_argument("--workers", type=int, default=None, help="process pool size")

    parser = argparse.ArgumentParser(
        prog="burgerslab",
        description="Numerical laboratory for the complex-forced viscous Burgers equation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", parents=[common], help="single Lax-Friedrichs run")
    simulate.add_argument("--N", type=int, nargs="+", default=None)
    simulate.add_argument("--J", type=int, default=None)
    simulate.add_argument("--sigma", type=float, default=None)
    simulate.add_argument("--t-max", dest="t_max", type=float, default=None)

    cc = sub.add_parser("cc", parents=[common], help="closed-form linearized envelopes")
    cc.add_argument("--N", type=int, nargs="+", default=None)
    cc.add_argument("--eps", type=float, default=None)
    cc.add_argument("--t-max", dest="t_max", type=float, default=None)
    cc.add_argument("--convention", choices=[c.value for c in Convention], default=None)

    spectral = sub.add_parser("spectral", parents=[common], help="rescaled Galerkin run")
    spectral.add_argument("--eps", type=float, default=None)
    spectral.add_argument("--alpha", type=float, default=None)
    spectral.add_argument("--abar", type=float, default=None)
    spectral.add_argument("--k0", type=int, default=None)
    spectral.add_argument("--K", type=int, default=None)
    spectral.add_argument("--dt", type=float, default=None)
    spectral.add_argument("--t-end", dest="t_end", type=float, default=None)

    check = sub.add_parser("check", parents=[common], help="verify a quantitative statement")
    check.add_argument("check", choices=["pw", "theorem1", "theorem2", "errfn", "energy"])
    check.add_argument("--eps", type=float, default=None)
    check.add_argument("--k0", type=int, default=None)
    check.add_argument("--K", type=int, default=None)
    check.add_argument("--dt", type=float, default=None)
    check.add_argument("--alpha", type=float, default=None)
    check.add_argument("--N", type=int, nargs="+", default=None)
    check.add_argument("--calibrate", action="store_true", default=None)
    check.add_argument(
        "--calibration", type=Path, default=None, help="frozen theorem1 calibration.txt"
    )

    figure = sub.add_parser("figure", parents=[common], help="reproduce a figure")
    figure.add_argument("figure", choices=sorted(FIGURES))
    figure.add_argument("--preset", default=None)
    figure.add_argument("--J", type=int, default=None)
    figure.add_argument("--sigma", type=float, default=None)
    figure.add_argument("--N", type=int, nargs="+", default=None)
    return parser


# --- subcommands -----------------------------------------------------------------


def _simulate(config: Config, run_dir: RunDirectory) -> int:
    J = config.J or 1024
    sigma = config.sigma or 0.1 / J
    N = (config.N or [16])[0]
    eps = 1.0 / (2.0 * sigma * J**2)
    t_max = config.t_max or horizon(eps, N, 1.0)
    case = CaseSpec(label=f"N{N}", modes=[(N, 1.0)], J=J, sigma=sigma, t_max=t_max)
    result = run_case(case)

    run_dir.csv("series.csv", result.series)
    run_dir.svg(
        "series.svg",
        [
            PlotSeries("max Im u", result.series["t"], result.series["max_im"], "thick"),
            PlotSeries("max |Re u|", result.series["t"], result.series["max_re"], "thin"),
        ],
        title=f"Lax-Friedrichs, N={N}, J={J}",
        x_label="t",
    )
    run_dir.text(
        "report.txt",
        dump_key_values(
            {
                "N": N,
                "J": J,
                "sigma": sigma,
                "eps": eps,
                "termination": result.termination.value,
                "t_f": result.t_f if result.t_f is not None else math.nan,
                "t_transition": result.t_transition,
                "t_cc": result.t_cc,
                "t_cc_double": result.t_cc_double,
                "steps": result.steps,
            }
        ),
    )
    return EXIT_OK


def _cc(config: Config, run_dir: RunDirectory) -> int:
    eps = config.eps or 2.5e-3
    t_max = config.t_max or 1.0
    convention = config.convention or Convention.TORUS
    params = CcParams(eps=eps, convention=convention)
    t = np.linspace(0.0, t_max, 201)

    columns: Dict[str, List[float]] = {"t": t.tolist()}
    plots = []
    summary: Dict[str, object] = {"eps": eps, "convention": convention.value}
    for n in config.N or [16]:
        envelope = cc_propagator.linearized_max_im(n, params, t)
        columns[f"max_im_N{n}"] = np.atleast_1d(envelope).tolist()
        plots.append(PlotSeries(f"N={n}", t, np.atleast_1d(envelope), "thin"))
        t_cc, t_cc_double = cc_propagator.predicted_amplification_times(eps, n)
        summary[f"t_transition.N{n}"] = 2.0 * math.pi * eps * n
        summary[f"t_cc.N{n}"] = t_cc
        summary[f"t_cc_double.N{n}"] = t_cc_double

    run_dir.csv("envelopes.csv", columns)
    run_dir.svg("envelopes.svg", plots, title=f"linearized max Im v, eps={eps:g}", x_label="t")
    run_dir.text("report.txt", dump_key_values(summary))
    return EXIT_OK


def _spectral(config: Config, run_dir: RunDirectory) -> int:
    eps = config.eps or 1e-2
    k0 = config.k0 or 1
    params = RescaledParams(
        k0=k0,
        eps=eps,
        alpha=config.alpha if config.alpha is not None else 0.4,
        abar=config.abar or 0.0,
        K=config.K or 16,
        dt=config.dt or 1e-2,
        t_end=config.t_end or 4.0 * math.pi * k0 / eps + 1.0,
        record_every=50,
    )
    trajectory = run_rescaled(runs.sine_datum(1.0, params.K, k0), params)
    columns = {
        "t": trajectory.times,
        "log_abs_v1": trajectory.log_abs_v1,
        "log_w_l2": trajectory.log_w_l2,
        "re_lambda1": trajectory.re_lambda1,
    }
    run_dir.csv("trajectory.csv", columns)
    run_dir.svg(
        "trajectory.svg",
        [
            PlotSeries("log |v1|", trajectory.times, trajectory.log_abs_v1, "thick"),
            PlotSeries("Re lambda1", trajectory.times, trajectory.re_lambda1, "thin"),
        ],
        title=f"rescaled run, eps={eps:g}, alpha={params.alpha:g}",
        x_label="fast time",
    )
    run_dir.text(
        "report.txt",
        dump_key_values(
            {
                "eps": eps,
                "alpha": params.alpha,
                "K": params.K,
                "t_final": trajectory.final.t,
                "log_abs_v1_final": trajectory.log_abs_v1[-1],
                "stopped_on_overflow": trajectory.stopped_on_overflow,
            }
        ),
    )
    return EXIT_OK


def _run_check(config: Config, run_dir: RunDirectory, workers: int) -> List[CheckReport]:
    book = load_presets(get_settings().presets_path)
    name = config.check

    if name == "pw":
        terms = {n: 1.0 / n for n in (config.N or [1, 2, 3])}
        K = max(terms)
        return [checks.check_pw(ModeSpectrum.from_sines(terms, K, config.k0 or 1))]

    if name == "errfn":
        eps, k0 = config.eps or 1e-2, config.k0 or 1
        return [checks.check_errfn(eps, k0), checks.check_gaussian_tail()]

    if name == "theorem1":
        preset = book.checks.theorem1.model_copy(update=_preset_overrides(config, pair=True))
        c_check = preset.c_check
        if config.calibration is not None:
            if config.calibrate:
                raise ConfigError("calibration", "cannot be combined with calibrate")
            c_check = _frozen_c_check(config.calibration, preset.s)
            run_dir.entries["calibration"] = str(config.calibration)
        trajectories = runs.run_jobs(runs.theorem1_jobs(preset), workers)
        if config.calibrate:
            manifest = checks.calibrate_theorem1(trajectories, preset.s)
            run_dir.files.append("calibration.txt")
            manifest.save(run_dir.path / "calibration.txt")
            c_check = manifest.c_check
        return [checks.check_theorem1(trajectories, preset.s, c_check)]

    if name == "theorem2":
        update = _preset_overrides(config, pair=False)
        if config.alpha is not None:
            update["alpha"] = config.alpha
        preset = book.checks.theorem2.model_copy(update=update)
        trajectories = runs.run_jobs(runs.theorem2_jobs(preset), workers)
        for trajectory in trajectories:
            run_dir.csv(
                f"theorem2_eps_{trajectory.params.eps:g}.csv",
                {
                    "t": trajectory.times,
                    "log_abs_v1": trajectory.log_abs_v1,
                    "re_lambda1": trajectory.re_lambda1,
                },
            )
        return [checks.check_theorem2(trajectory) for trajectory in trajectories]

    preset = book.checks.energy.model_copy(update=_preset_overrides(config, pair=None))
    datum, params = runs.energy_job(preset)
    return [checks.check_energy_decay(run_rescaled(datum, params), preset.s)]


def _frozen_c_check(path: Path, s: int) -> float:
    """c_check of a theorem1 calibration manifest written by an earlier --calibrate run."""
    try:
        manifest = CalibrationManifest.load(path)
    except (OSError, ValueError) as exc:
        raise ConfigError("calibration", str(exc)) from exc
    if manifest.check != "theorem1" or manifest.s != s:
        raise ConfigError(
            "calibration",
            f"manifest is for {manifest.check} with s={manifest.s}, not theorem1 s={s}",
        )
    logger.info("cli.calibration_loaded", path=str(path), c_check=manifest.c_check)
    return manifest.c_check


def _preset_overrides(config: Config, pair: Optional[bool]) -> Dict[str, object]:
    """Shared k0/K/dt/eps overrides; pair=True maps eps to the list [eps, eps / 2]."""
    update: Dict[str, object] = {}
    for key in ("k0", "K", "dt"):
        value = getattr(config, key)
        if value is not None:
            update[key] = value
    if config.eps is not None:
        if pair is None:
            update["eps"] = config.eps
        else:
            update["eps_list"] = [config.eps, config.eps / 2.0] if pair else [config.eps]
    return update


def _check(config: Config, run_dir: RunDirectory, workers: int) -> int:
    reports = _run_check(config, run_dir, workers)
    for index, report in enumerate(reports):
        suffix = f"_{index}" if len(reports) > 1 else ""
        run_dir.text(f"{report.name}{suffix}.txt", report.to_text())
    passed = all(report.passed for report in reports)
    run_dir.entries["passed"] = passed
    logger.info(
        "cli.check_done",
        check=config.check,
        passed=passed,
        margins=[report.margin for report in reports],
    )
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def _figure_preset(config: Config) -> FigurePreset:
    book = load_presets(get_settings().presets_path)
    try:
        preset = book.figure(config.figure, config.preset)
    except KeyError as exc:
        raise ConfigError("preset", str(exc.args[0])) from exc
    update: Dict[str, object] = {}
    if config.J is not None:
        update["J"] = config.J
    if config.sigma is not None:
        update["sigma"] = config.sigma
    if config.N is not None:
        update["N"] = config.N
    return preset.model_copy(update=update)


def _figure_plots(report: ExperimentReport) -> List[PlotSeries]:
    if report.figure == "fig1":
        plots = []
        for name, table in report.tables.items():
            n = name.split("_N")[-1]
            plots.append(PlotSeries(f"numerical N={n}", table["t"], table["max_im"], "thick"))
            plots.append(
                PlotSeries(f"linearized N={n}", table["t"], table["linearized_torus"], "thin")
            )
        return plots
    table = report.tables[report.figure]
    x = {"fig4": "N", "fig5": "case", "fig6": "eps"}[report.figure]
    return [
        PlotSeries("t_cc = 4 pi eps N", table[x], table["t_cc"], "line"),
        PlotSeries("t_cc = 8 pi eps N", table[x], table["t_cc_double"], "thin"),
        PlotSeries("t_f", table[x], table["t_f"], "crosses"),
    ]


def _figure(config: Config, run_dir: RunDirectory, workers: int) -> int:
    preset = _figure_preset(config)
    report = FIGURES[config.figure](preset, config.preset, workers)

    for result in report.cases:
        name = f"{report.figure}_{result.case.label}_series.csv"
        run_dir.csv(name, result.series)
        result.series_file = name
    for name, table in report.tables.items():
        run_dir.csv(f"{name}.csv", table)
    x_label = {"fig1": "t", "fig4": "N", "fig5": "case", "fig6": "eps"}[report.figure]
    run_dir.svg(
        f"{report.figure}.svg",
        _figure_plots(report),
        title=f"{report.figure} ({report.preset})",
        x_label=x_label,
    )

    summary: Dict[str, object] = {"figure": report.figure, "preset": report.preset}
    summary.update(report.metadata)
    for result in report.cases:
        label = result.case.label
        summary[f"case.{label}.t_f"] = result.t_f if result.t_f is not None else math.nan
        summary[f"case.{label}.t_cc"] = result.t_cc
        summary[f"case.{label}.t_cc_double"] = result.t_cc_double
        summary[f"case.{label}.series"] = result.series_file
    run_dir.text("report.txt", dump_key_values(summary))
    return EXIT_OK


def _usage_error(parser: argparse.ArgumentParser, message: str) -> int:
    parser.print_usage(sys.stderr)
    print(f"burgerslab: error: {message}", file=sys.stderr)
    print("config keys: " + ", ".join(Config.model_fields), file=sys.stderr)
    return EXIT_USAGE


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE

    overrides = {key: value for key, value in vars(args).items() if key != "config"}
    try:
        config = load_config(args.config, overrides)
    except ConfigError as exc:
        logger.error("cli.config_error", key=exc.key, reason=exc.reason)
        return _usage_error(parser, str(exc))
    except OSError as exc:
        return _usage_error(parser, f"cannot read config file: {exc}")

    settings = get_settings()
    workers = config.workers or settings.workers
    selector = config.figure or config.check or config.command
    run_dir = RunDirectory(config.output_dir or settings.output_dir, selector)
    run_dir.entries.update({"command": config.command, "selector": selector})
    if config.command == "figure":
        run_dir.entries["preset"] = config.preset
    logger.info(
        "cli.run_started", command=config.command, selector=selector, path=str(run_dir.path)
    )

    handlers = {"simulate": _simulate, "cc": _cc, "spectral": _spectral}
    try:
        if config.command == "check":
            code = _check(config, run_dir, workers)
        elif config.command == "figure":
            code = _figure(config, run_dir, workers)
        else:
            code = handlers[config.command](config, run_dir)
    except ConfigError as exc:
        logger.error("cli.config_error", key=exc.key, reason=exc.reason)
        code = _usage_error(parser, str(exc))
    except CheckPreconditionError as exc:
        logger.error("cli.precondition_failed", error=str(exc))
        code = EXIT_USAGE
    except BurgersLabError as exc:
        logger.error("cli.run_failed", error=str(exc), error_type=type(exc).__name__)
        code = EXIT_USAGE

    run_dir.entries["exit_code"] = code
    run_dir.close()
    logger.info("cli.run_finished", exit_code=code, path=str(run_dir.path))
    return code


def entrypoint() -> None:
    sys.exit(main())
