# coding: utf-8

"""Emission rate of an arbitrary (biaxial) medium by quadrature of the Fermi-rule integrand.

gamma / gamma_vac = 3 / (8 pi) * integral over all wave directions of
sum over both branches of eps_eff^(3/2) |d . e|^2 / (e . eps e).
"""

import logging
import math
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from anisoemit.enums import MethodTag
from anisoemit.errors import ToleranceNotReachedError
from anisoemit.media import (
    Direction,
    ModeBatch,
    PermittivityTensor,
    branch_labels,
    solve_modes_batch,
    spherical_directions,
)
from anisoemit.quadrature import (
    QuadratureResult,
    QuadratureSpec,
    integrate_fixed,
    integrate_sphere,
)
from anisoemit.results import BranchContribution, RateResult

logger = logging.getLogger(__name__)

RATE_PREFACTOR = 3.0 / (8.0 * math.pi)


def branch_densities(eps: PermittivityTensor, batch: ModeBatch, dipole: Direction) -> np.ndarray:
    """(N, 2) per-branch terms eps_eff^(3/2) |d . e|^2 / (e . eps e)"""
    pol = batch.polarizations
    projections = pol @ dipole.vector
    normalization = np.einsum("nbi,nbi->nb", pol, pol * eps.diagonal)
    return batch.eps_eff**1.5 * projections**2 / normalization


def _densities(eps: PermittivityTensor, dipole: Direction, theta, phi) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    kappas = spherical_directions(theta, phi)
    batch = solve_modes_batch(eps, kappas.reshape(-1, 3))
    return branch_densities(eps, batch, dipole).reshape(theta.shape + (2,))


def rate_integrand(eps: PermittivityTensor, dipole: Direction, theta, phi):
    """Summed branch density at the wave direction (theta, phi); accepts arrays

    Usage:

        >>> eps, dipole = PermittivityTensor(7, 1, 1), Direction(1, 0, 0)
        >>> round(rate_integrand(eps, dipole, math.pi / 2, 0.0), 12)
        2.645751311065
    """
    total = _densities(eps, dipole, theta, phi).sum(axis=-1)
    return float(total) if total.ndim == 0 else total


def rate_numeric(eps: PermittivityTensor, dipole: Direction, spec: QuadratureSpec) -> RateResult:
    """Rate by adaptive sphere quadrature

    :param eps: Medium
    :param dipole: Unit dipole orientation in crystal axes
    :param spec: Quadrature settings
    :return: Rate with the per-branch breakdown evaluated on the final grid
    :raises ToleranceNotReachedError: ``rate`` carries the best rate reached
    """
    try:
        total = integrate_sphere(lambda t, p: rate_integrand(eps, dipole, t, p), spec)
    except ToleranceNotReachedError as e:
        e.rate = _rate_from_quadrature(eps, dipole, e.best)
        raise
    result = _rate_from_quadrature(eps, dipole, total)
    logger.debug(
        "Numeric rate %r for eps=%s, dipole=%s",
        result.gamma_normalized,
        eps.to_value(),
        dipole.to_value(),
    )
    return result


def _rate_from_quadrature(
    eps: PermittivityTensor, dipole: Direction, quadrature: QuadratureResult
) -> RateResult:
    theta_rule, phi_points = quadrature.final_order
    gamma = RATE_PREFACTOR * quadrature.value
    first = RATE_PREFACTOR * integrate_fixed(
        lambda t, p: _densities(eps, dipole, t, p)[..., 0], theta_rule, phi_points
    )
    labels = branch_labels(eps)
    return RateResult(
        gamma_normalized=gamma,
        method_tag=MethodTag.QUADRATURE,
        branch_breakdown=[
            BranchContribution(label=labels[0], gamma=first),
            BranchContribution(label=labels[1], gamma=gamma - first),
        ],
        quadrature=quadrature,
    )


@lru_cache(maxsize=1024)
def axis_rate(eps: PermittivityTensor, axis: int, spec: QuadratureSpec) -> RateResult:
    """``rate_numeric`` for a dipole along crystal axis ``axis``, memoised"""
    return rate_numeric(eps, Direction.axis(axis), spec)


def axis_rates(eps: PermittivityTensor, spec: QuadratureSpec) -> Tuple[RateResult, ...]:
    return tuple(axis_rate(eps, i, spec) for i in range(3))


def combine_axis_rates(weights: Sequence[float], rates: Sequence[RateResult]) -> RateResult:
    """Weighted sum of axis rates; diagnostics of the least converged contributing axis"""
    used = [(w, r) for w, r in zip(weights, rates) if w > 0]
    labels = [b.label for b in used[0][1].branch_breakdown]
    branches = [math.fsum(w * r.branch_breakdown[j].gamma for w, r in used) for j in range(2)]
    worst = max(used, key=lambda wr: wr[1].quadrature.est_rel_error)[1]
    return RateResult(
        gamma_normalized=math.fsum(w * r.gamma_normalized for w, r in used),
        method_tag=MethodTag.QUADRATURE,
        branch_breakdown=[
            BranchContribution(label=label, gamma=g) for label, g in zip(labels, branches)
        ],
        quadrature=worst.quadrature,
    )


def rate_arbitrary_dipole(
    eps: PermittivityTensor, dipole: Direction, spec: QuadratureSpec
) -> RateResult:
    """dx^2 G_x + dy^2 G_y + dz^2 G_z with G_i the rate of a dipole along axis i

    Cross terms vanish on integration, so this equals ``rate_numeric`` at the tilted dipole.
    Only axes with a non-zero component are integrated.
    """
    weights = list(dipole.vector**2)
    rates: List[RateResult] = [
        axis_rate(eps, i, spec) if w > 0 else None for i, w in enumerate(weights)  # type: ignore
    ]
    return combine_axis_rates(weights, rates)
