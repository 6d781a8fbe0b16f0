# coding: utf-8

"""``aniso-emit``: single-point rates, angular distributions, sweeps and the invariant suite."""

import logging
import sys
from typing import Annotated, Any, Dict, List, NoReturn, Optional

import numpy as np
import typer

from anisoemit import serialization
from anisoemit.biaxial import rate_numeric
from anisoemit.config import RunConfig, load_run_config
from anisoemit.enums import Command, MediumKind, Method, OutputFormat
from anisoemit.errors import (
    AnisoEmitError,
    DegenerateAdjustedDipoleError,
    InvalidInputError,
    PeakVerificationError,
    ToleranceNotReachedError,
)
from anisoemit.greens import imag_greens_trace, max_completeness_defect, cube_directions
from anisoemit.interp import ModelErrorRow, model_error_report, rate_model, sweep_grid
from anisoemit.localfield import (
    adjust_dipole,
    rate_biaxial_local,
    rate_uniaxial_local,
)
from anisoemit.records import Record, RecordList
from anisoemit.results import RateResult
from anisoemit.uniaxial import (
    DipoleSplit,
    UniaxialMedium,
    angular_distribution,
    extraordinary_index,
    peak_emission_angles,
    rate_uniaxial_total,
    to_absolute_rate,
)
from anisoemit.validation import run_suite

logger = logging.getLogger(__name__)

EXIT_VALIDATION_FAILED = 1
# a built-in numeric verification outside ``validate`` failed
EXIT_CHECK_FAILED = EXIT_VALIDATION_FAILED
EXIT_INVALID_INPUT = 2
EXIT_TOLERANCE = 3
EXIT_ROUTES_DISAGREE = 4

ROUTE_AGREEMENT_TOL = 1e-8

RATE_FIELDS = [
    "gamma_normalized",
    "method_tag",
    "branch_1",
    "gamma_1",
    "branch_2",
    "gamma_2",
    "quad_order",
    "quad_err",
]
ANGULAR_FIELDS = ["theta_rad", "f_theta"]
SWEEP_FIELDS = [
    "eps_sweep",
    "gamma_numeric",
    "gamma_model",
    "gamma_closed",
    "rel_error",
    "quad_order",
    "quad_err",
]
GREENS_FIELDS = ["gamma_fermi", "gamma_greens", "abs_diff", "rel_diff", "completeness_defect"]
CHECK_FIELDS = ["name", "samples", "worst_defect", "threshold", "passed"]

app = typer.Typer(
    add_completion=False,
    no_args_is_help=True,
    help="Spontaneous emission rates of a dipole in anisotropic dielectrics.",
)


class SweepRow(Record):
    eps_sweep: float
    gamma_numeric: float
    gamma_model: float
    gamma_closed: Optional[float]
    rel_error: float
    quad_order: int
    quad_err: float
    # JSON only, the CSV header is SWEEP_FIELDS
    gamma_lin_x: float
    gamma_lin_y: float

    @classmethod
    def from_model_error(cls, row: ModelErrorRow, axis_index: int) -> "SweepRow":
        return cls(
            eps_sweep=row.eps.to_value()[axis_index],
            gamma_numeric=row.gamma_numeric,
            gamma_model=row.gamma_model,
            gamma_closed=row.gamma_closed,
            rel_error=row.rel_error,
            quad_order=row.quad_order,
            quad_err=row.quad_err,
            gamma_lin_x=row.gamma_lin_x,
            gamma_lin_y=row.gamma_lin_y,
        )


# Options shared by several commands
Eps = Annotated[Optional[str], typer.Option("--eps", help="Permittivities X,Y,Z.")]
EpsX = Annotated[Optional[float], typer.Option("--eps-x", help="Override eps_x.")]
EpsY = Annotated[Optional[float], typer.Option("--eps-y", help="Override eps_y.")]
EpsZ = Annotated[Optional[float], typer.Option("--eps-z", help="Override eps_z.")]
Dipole = Annotated[
    Optional[str], typer.Option("--dipole", help="Dipole X,Y,Z (normalised), default 0,0,1.")
]
Frame = Annotated[
    Optional[str], typer.Option("--frame", help="Lab-to-crystal rotation, 9 numbers row-major.")
]
MethodOpt = Annotated[
    Optional[str], typer.Option("--method", help="auto, closed, numeric or model.")
]
Tol = Annotated[
    Optional[float], typer.Option("--tol", help="Quadrature relative tolerance.")
]
LocalField = Annotated[
    Optional[str], typer.Option("--local-field", help="Local-field factors L1,L2,L3.")
]
Output = Annotated[Optional[str], typer.Option("--output", help="csv or json.")]
Out = Annotated[Optional[str], typer.Option("--out", help="Write to this path, not stdout.")]
Config = Annotated[
    Optional[str], typer.Option("--config", help="JSON or YAML config; flags override it.")
]
Verbose = Annotated[bool, typer.Option("--verbose", help="Debug logging on stderr.")]


def _setup_logging(verbose: bool) -> None:
    if verbose:
        logging.basicConfig(
            stream=sys.stderr,
            level=logging.DEBUG,
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        )


def _load(command: Command, config: Optional[str], flags: Dict[str, Any]) -> RunConfig:
    try:
        return load_run_config(command, flags, config)
    except InvalidInputError as e:
        _fail(e, EXIT_INVALID_INPUT)


def _fail(e: AnisoEmitError, code: int) -> NoReturn:
    typer.echo(str(e), err=True)
    raise typer.Exit(code=code)


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output_path:
        serialization.write_text(text, cfg.output_path)
        logger.debug("Wrote %s", cfg.output_path)
    else:
        typer.echo(text, nl=False)


def _dump(cfg: RunConfig, rows: List[Dict[str, Any]], fields: List[str], extra=None) -> str:
    if cfg.output is OutputFormat.CSV:
        return RecordList(rows).to_csv(fields)
    if extra is None and len(rows) == 1:
        return serialization.dump_json(rows[0]) + "\n"
    return serialization.dump_json({**(extra or {}), "rows": rows}) + "\n"


def rate_row(rate: RateResult) -> Dict[str, Any]:
    """Flat record of a rate with the column names of the ``rate`` command"""
    row: Dict[str, Any] = {
        "gamma_normalized": rate.gamma_normalized,
        "method_tag": rate.method_tag.value,
    }
    for i in (1, 2):
        branch = rate.branch_breakdown[i - 1] if rate.branch_breakdown else None
        row[f"branch_{i}"] = branch.label.value if branch else None
        row[f"gamma_{i}"] = branch.gamma if branch else None
    row["quad_order"] = rate.quadrature.final_order[0] if rate.quadrature else None
    row["quad_err"] = rate.quadrature.est_rel_error if rate.quadrature else None
    return row


def _closed_or_numeric(cfg: RunConfig, method: Method) -> Method:
    if method is not Method.AUTO:
        return method
    if cfg.eps.kind is MediumKind.BIAXIAL:
        return Method.NUMERIC
    if cfg.local_field is not None:
        axis = cfg.eps.distinguished_axis
        transverse = [v for i, v in enumerate(cfg.local_field.to_value()) if i != axis]
        if transverse[0] != transverse[1]:
            return Method.NUMERIC
    return Method.CLOSED


def compute_rate(cfg: RunConfig) -> RateResult:
    """The rate requested by ``cfg``; ``auto`` is closed form unless the medium is biaxial"""
    dipole = cfg.crystal_dipole
    method = _closed_or_numeric(cfg, cfg.method)
    if method is Method.CLOSED:
        medium = UniaxialMedium.from_permittivity(cfg.eps)
        split = DipoleSplit.from_direction(medium, dipole)
        if cfg.local_field is not None:
            return rate_uniaxial_local(medium, split, cfg.local_field)
        return rate_uniaxial_total(medium, split)
    if method is Method.NUMERIC:
        if cfg.local_field is not None:
            return rate_biaxial_local(cfg.eps, dipole, cfg.local_field, cfg.quadrature)
        return rate_numeric(cfg.eps, dipole, cfg.quadrature)
    if cfg.local_field is not None:
        adjusted, norm = adjust_dipole(cfg.local_field, dipole)
        return rate_model(cfg.eps, adjusted).scaled(norm * norm)
    return rate_model(cfg.eps, dipole)


def _emit_rate(cfg: RunConfig, rate: RateResult) -> None:
    row = rate_row(rate)
    fields = list(RATE_FIELDS)
    if cfg.physical_context is not None:
        row["gamma_absolute"] = to_absolute_rate(cfg.physical_context, rate.gamma_normalized)
        fields.append("gamma_absolute")
    _emit(cfg, _dump(cfg, [row], fields))


@app.command()
def rate(
    eps: Eps = None,
    eps_x: EpsX = None,
    eps_y: EpsY = None,
    eps_z: EpsZ = None,
    dipole: Dipole = None,
    frame: Frame = None,
    method: MethodOpt = None,
    tol: Tol = None,
    local_field: LocalField = None,
    si: Annotated[bool, typer.Option("--si", help="Add the rate in 1/s.")] = False,
    omega: Annotated[
        Optional[float], typer.Option("--omega", help="Transition frequency in rad/s.")
    ] = None,
    dipole_si: Annotated[
        Optional[float], typer.Option("--dipole-si", help="Dipole moment in C m.")
    ] = None,
    output: Output = None,
    out: Out = None,
    config: Config = None,
    verbose: Verbose = False,
):
    """Emission rate at one point, normalised to vacuum."""
    _setup_logging(verbose)
    cfg = _load(
        Command.RATE,
        config,
        dict(
            eps=eps,
            eps_x=eps_x,
            eps_y=eps_y,
            eps_z=eps_z,
            dipole=dipole,
            frame=frame,
            method=method,
            tol=tol,
            local_field=local_field,
            si=si or None,
            omega=omega,
            dipole_si=dipole_si,
            output=output,
            output_path=out,
        ),
    )
    try:
        result = compute_rate(cfg)
    except (InvalidInputError, DegenerateAdjustedDipoleError) as e:
        _fail(e, EXIT_INVALID_INPUT)
    except ToleranceNotReachedError as e:
        logger.warning("Tolerance not reached, emitting the best value")
        if e.rate is not None:
            _emit_rate(cfg, e.rate)
        _fail(e, EXIT_TOLERANCE)
    _emit_rate(cfg, result)


@app.command()
def angular(
    eps: Eps = None,
    eps_x: EpsX = None,
    eps_y: EpsY = None,
    eps_z: EpsZ = None,
    samples: Annotated[
        Optional[int], typer.Option("--samples", help="Number of angles, default 181.")
    ] = None,
    theta_range: Annotated[
        Optional[str],
        typer.Option("--theta-range", help="START:STOP in radians, or with a deg suffix."),
    ] = None,
    output: Output = None,
    out: Out = None,
    config: Config = None,
    verbose: Verbose = False,
):
    """Angular distribution f(theta) of a dipole along the distinguished axis."""
    _setup_logging(verbose)
    cfg = _load(
        Command.ANGULAR,
        config,
        dict(
            eps=eps,
            eps_x=eps_x,
            eps_y=eps_y,
            eps_z=eps_z,
            samples=samples,
            theta_range=theta_range,
            output=output,
            output_path=out,
        ),
    )
    try:
        medium = UniaxialMedium.from_permittivity(cfg.eps)
        peaks = list(peak_emission_angles(medium))
    except InvalidInputError as e:
        _fail(e, EXIT_INVALID_INPUT)
    except PeakVerificationError as e:
        _fail(e, EXIT_CHECK_FAILED)
    theta = np.linspace(cfg.theta_range.start, cfg.theta_range.stop, cfg.samples)
    f_theta = angular_distribution(medium, theta)
    n_e = extraordinary_index(medium, theta)
    # n_e is a JSON-only column; the CSV header stays theta_rad,f_theta
    rows = [
        {"theta_rad": float(t), "f_theta": float(f), "n_e": float(n)}
        for t, f, n in zip(theta, f_theta, n_e)
    ]
    if cfg.output is OutputFormat.CSV:
        typer.echo("peaks_rad: " + ",".join(serialization.format_float(p) for p in peaks), err=True)
    _emit(cfg, _dump(cfg, rows, ANGULAR_FIELDS, extra={"peaks": peaks}))


@app.command()
def sweep(
    eps: Eps = None,
    eps_x: EpsX = None,
    eps_y: EpsY = None,
    eps_z: EpsZ = None,
    sweep_axis: Annotated[
        Optional[str], typer.Option("--sweep", help="eps_x, eps_y or eps_z.")
    ] = None,
    sweep_range: Annotated[
        Optional[str], typer.Option("--range", help="START:STOP:COUNT.")
    ] = None,
    dipole: Dipole = None,
    frame: Frame = None,
    tol: Tol = None,
    output: Output = None,
    out: Out = None,
    config: Config = None,
    verbose: Verbose = False,
):
    """Quadrature against the interpolation model along one permittivity component."""
    _setup_logging(verbose)
    cfg = _load(
        Command.SWEEP,
        config,
        dict(
            eps=eps,
            eps_x=eps_x,
            eps_y=eps_y,
            eps_z=eps_z,
            sweep_axis=sweep_axis,
            sweep_range=sweep_range,
            dipole=dipole,
            frame=frame,
            tol=tol,
            output=output,
            output_path=out,
        ),
    )
    r = cfg.sweep_range
    grid = sweep_grid(cfg.eps, cfg.sweep_axis, r.start, r.stop, r.count)
    try:
        report = model_error_report(grid, cfg.crystal_dipole, cfg.quadrature)
    except InvalidInputError as e:
        _fail(e, EXIT_INVALID_INPUT)
    except ToleranceNotReachedError as e:
        _fail(e, EXIT_TOLERANCE)
    rows = [
        SweepRow.from_model_error(row, cfg.sweep_axis.index).to_dict(ignore_none=False)
        for row in report.rows
    ]
    summary = {"max_rel_error": report.max_rel_error, "mean_rel_error": report.mean_rel_error}
    _emit(cfg, _dump(cfg, rows, SWEEP_FIELDS, extra=summary))


@app.command()
def greens(
    eps: Eps = None,
    eps_x: EpsX = None,
    eps_y: EpsY = None,
    eps_z: EpsZ = None,
    dipole: Dipole = None,
    frame: Frame = None,
    tol: Tol = None,
    output: Output = None,
    out: Out = None,
    config: Config = None,
    verbose: Verbose = False,
):
    """Compare the golden-rule and Green's-function routes to the rate."""
    _setup_logging(verbose)
    cfg = _load(
        Command.GREENS,
        config,
        dict(
            eps=eps,
            eps_x=eps_x,
            eps_y=eps_y,
            eps_z=eps_z,
            dipole=dipole,
            frame=frame,
            tol=tol,
            output=output,
            output_path=out,
        ),
    )
    dipole_vector = cfg.crystal_dipole
    try:
        fermi = rate_numeric(cfg.eps, dipole_vector, cfg.quadrature).gamma_normalized
        green = imag_greens_trace(cfg.eps, dipole_vector, cfg.quadrature)
    except ToleranceNotReachedError as e:
        _fail(e, EXIT_TOLERANCE)
    abs_diff = abs(green - fermi)
    row = {
        "gamma_fermi": fermi,
        "gamma_greens": green,
        "abs_diff": abs_diff,
        "rel_diff": abs_diff / fermi,
        "completeness_defect": max_completeness_defect(cfg.eps, cube_directions()),
    }
    _emit(cfg, _dump(cfg, [row], GREENS_FIELDS))
    if row["rel_diff"] > ROUTE_AGREEMENT_TOL:
        typer.echo(f"Routes disagree: relative difference {row['rel_diff']:.3e}", err=True)
        raise typer.Exit(code=EXIT_ROUTES_DISAGREE)


@app.command()
def validate(
    seed: Annotated[Optional[int], typer.Option("--seed", help="Base seed, default 0.")] = None,
    quick: Annotated[bool, typer.Option("--quick", help="Reduced sample counts.")] = False,
    check: Annotated[
        Optional[List[str]], typer.Option("--check", help="Run only this check (repeatable).")
    ] = None,
    inject_fault: Annotated[bool, typer.Option("--inject-fault", hidden=True)] = False,
    tol: Tol = None,
    output: Annotated[Optional[str], typer.Option("--output", help="json or csv.")] = None,
    out: Out = None,
    config: Config = None,
    verbose: Verbose = False,
):
    """Run the invariant suite with fixed seeds; exit 1 on any failure."""
    _setup_logging(verbose)
    cfg = _load(
        Command.VALIDATE,
        config,
        dict(
            seed=seed,
            quick=quick or None,
            tol=tol,
            output=output,
            output_path=out,
        ),
    )
    try:
        report = run_suite(
            cfg.seed,
            quick=cfg.quick,
            inject_fault=inject_fault,
            spec=cfg.quadrature,
            only=tuple(check or ()),
        )
    except InvalidInputError as e:
        _fail(e, EXIT_INVALID_INPUT)
    if cfg.output is OutputFormat.CSV:
        text = RecordList(report.checks).to_csv(CHECK_FIELDS)
    else:
        text = report.to_json() + "\n"
    _emit(cfg, text)
    if not report.passed:
        failed = [c.name for c in report.checks if not c.passed]
        typer.echo(f"Failed checks: {', '.join(failed)}", err=True)
        raise typer.Exit(code=EXIT_VALIDATION_FAILED)


def main():
    app()
