# coding: utf-8

"""Closed-form interpolation model for biaxial media and its comparison with quadrature.

For a dipole along z the rate is known exactly at eps_y = eps_x and at eps_y = eps_z. Two
straight lines through these endpoints (one in eps_y, one in eps_x) are averaged.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from anisoemit.biaxial import rate_numeric
from anisoemit.enums import MediumKind, MethodTag, SweepAxis
from anisoemit.errors import InvalidValueError, ModelConsistencyError
from anisoemit.media import Direction, PermittivityTensor
from anisoemit.quadrature import QuadratureSpec
from anisoemit.records import Record
from anisoemit.results import InterpBreakdown, RateResult
from anisoemit.uniaxial import DipoleSplit, UniaxialMedium, rate_uniaxial_total

logger = logging.getLogger(__name__)

FORM_AGREEMENT_TOL = 1e-12

# The dipole axis takes the z role, the remaining two keep their order as (x, y).
_AXIS_ROLES = {0: (1, 2, 0), 1: (0, 2, 1), 2: (0, 1, 2)}


def endpoint_rates(eps: PermittivityTensor) -> Tuple[float, float]:
    """Exact rates of a z dipole at eps_y = eps_x (gamma_a) and at eps_y = eps_z (gamma_b)

    Usage:

        >>> endpoint_rates(PermittivityTensor(1, 2, 4))
        (1.0, 1.625)
    """
    root_z = math.sqrt(eps.eps_z)
    return math.sqrt(eps.eps_x), (eps.eps_x + 3.0 * eps.eps_z) / (4.0 * root_z)


def interp_linear_in_y(eps: PermittivityTensor) -> float:
    """Straight line in eps_y through both endpoints

    Usage:

        >>> round(interp_linear_in_y(PermittivityTensor(1.5, 3, 5)), 4)
        1.4905
    """
    rx, rz = math.sqrt(eps.eps_x), math.sqrt(eps.eps_z)
    dy = eps.eps_y - eps.eps_x
    return rx - dy / (4.0 * rz) + dy / (rx + rz)


def interp_linear_in_x(eps: PermittivityTensor) -> float:
    """Straight line in eps_x, the x <-> y partner of ``interp_linear_in_y``

    Usage:

        >>> round(interp_linear_in_x(PermittivityTensor(1.5, 3, 5)), 4)
        1.5217
    """
    ry, rz = math.sqrt(eps.eps_y), math.sqrt(eps.eps_z)
    dy = eps.eps_y - eps.eps_x
    return ry + dy / (4.0 * rz) - dy / (ry + rz)


def _index_form(eps: PermittivityTensor) -> Tuple[float, float, float, float]:
    rx, ry = math.sqrt(eps.eps_x), math.sqrt(eps.eps_y)
    n_plus, n_minus, n_par = 0.5 * (ry + rx), 0.5 * (ry - rx), math.sqrt(eps.eps_z)
    s = (n_plus + n_par) ** 2
    return n_plus * (s + 3.0 * n_minus**2) / (s - n_minus**2), n_plus, n_minus, n_par


def model_breakdown(
    eps: PermittivityTensor, dipole_axis: int = 2, weight: float = 1.0
) -> InterpBreakdown:
    """Every intermediate of the model for a dipole along ``dipole_axis``

    :raises ModelConsistencyError: mean form and index form disagree beyond 1e-12
    """
    relabeled = eps.permuted(_AXIS_ROLES[dipole_axis])
    gamma_a, gamma_b = endpoint_rates(relabeled)
    lin_y, lin_x = interp_linear_in_y(relabeled), interp_linear_in_x(relabeled)
    mean_form = 0.5 * (lin_x + lin_y)
    index_form, n_plus, n_minus, n_par = _index_form(relabeled)
    if abs(mean_form - index_form) > FORM_AGREEMENT_TOL * max(1.0, abs(mean_form)):
        raise ModelConsistencyError(mean_form=mean_form, index_form=index_form)
    return InterpBreakdown(
        gamma_a=gamma_a,
        gamma_b=gamma_b,
        gamma_lin_x=lin_x,
        gamma_lin_y=lin_y,
        gamma_model=mean_form,
        gamma_index_form=index_form,
        n_plus=n_plus,
        n_minus=n_minus,
        n_par=n_par,
        dipole_axis=dipole_axis,
        weight=weight,
    )


def rate_model(eps: PermittivityTensor, dipole: Direction) -> RateResult:
    """Interpolation model for any dipole, summed over axes with weights d_i^2

    Usage:

        >>> rate = rate_model(PermittivityTensor(1.5, 3, 5), Direction(0, 0, 1))
        >>> round(rate.gamma_normalized, 4), rate.method_tag.value
        (1.5061, 'interpolation-model')
    """
    weights = dipole.vector**2
    models = [model_breakdown(eps, axis, float(w)) for axis, w in enumerate(weights) if w > 0]
    return RateResult(
        gamma_normalized=math.fsum(m.weight * m.gamma_model for m in models),
        method_tag=MethodTag.INTERPOLATION_MODEL,
        models=models,
    )


class ModelErrorRow(Record):
    eps: PermittivityTensor
    gamma_numeric: float
    gamma_model: float
    gamma_lin_x: float
    gamma_lin_y: float
    gamma_closed: Optional[float]
    rel_error: float
    extrapolated: bool
    quad_order: int
    quad_err: float


class ModelErrorReport(Record):
    rows: List[ModelErrorRow]
    max_rel_error: float
    mean_rel_error: float


def is_extrapolated(eps: PermittivityTensor) -> bool:
    low, high = sorted((eps.eps_x, eps.eps_z))
    return not low <= eps.eps_y <= high


def sweep_grid(
    base: PermittivityTensor, axis: SweepAxis, start: float, stop: float, count: int
) -> List[PermittivityTensor]:
    """``count`` tensors equal to ``base`` except along ``axis``, evenly spaced over [start, stop]

    Usage:

        >>> grid = sweep_grid(PermittivityTensor(1.5, 1.5, 5), SweepAxis.EPS_Y, 1.5, 5, 3)
        >>> [e.eps_y for e in grid]
        [1.5, 3.25, 5.0]
    """
    return [base.with_component(axis.index, float(v)) for v in np.linspace(start, stop, count)]


def _closed_rate(eps: PermittivityTensor, dipole: Direction) -> Optional[float]:
    if eps.kind is MediumKind.BIAXIAL:
        return None
    medium = UniaxialMedium.from_permittivity(eps)
    return rate_uniaxial_total(medium, DipoleSplit.from_direction(medium, dipole)).gamma_normalized


def model_error_report(
    eps_grid: Sequence[PermittivityTensor], dipole: Direction, spec: QuadratureSpec
) -> ModelErrorReport:
    """Model against quadrature on every tensor of ``eps_grid``, in grid order

    :param eps_grid: Tensors to compare on, at least one
    :param dipole: Unit dipole orientation in crystal axes
    :param spec: Quadrature settings of the numeric reference
    :return: Rows with relative errors and their max/mean
    """
    if not eps_grid:
        raise InvalidValueError(
            owner="model_error_report", prop="eps_grid", value=[], reason="must not be empty"
        )
    rows = []
    for eps in eps_grid:
        numeric = rate_numeric(eps, dipole, spec)
        model_rate = rate_model(eps, dipole)
        model = model_rate.gamma_normalized
        rows.append(
            ModelErrorRow(
                eps=eps,
                gamma_numeric=numeric.gamma_normalized,
                gamma_model=model,
                gamma_lin_x=math.fsum(m.weight * m.gamma_lin_x for m in model_rate.models),
                gamma_lin_y=math.fsum(m.weight * m.gamma_lin_y for m in model_rate.models),
                gamma_closed=_closed_rate(eps, dipole),
                rel_error=abs(model - numeric.gamma_normalized) / numeric.gamma_normalized,
                extrapolated=is_extrapolated(eps),
                quad_order=numeric.quadrature.final_order[0],
                quad_err=numeric.quadrature.est_rel_error,
            )
        )
    errors = [r.rel_error for r in rows]
    report = ModelErrorReport(
        rows=rows, max_rel_error=max(errors), mean_rel_error=math.fsum(errors) / len(errors)
    )
    logger.debug(
        "Model error over %d tensors: max=%.3e, mean=%.3e",
        len(rows),
        report.max_rel_error,
        report.mean_rel_error,
    )
    return report
