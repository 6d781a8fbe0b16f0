# coding: utf-8

"""Local-field corrections through the adjusted dipole d~ = L^T d.

A linear local-field correction L acts on the rate like a change of the dipole: the corrected
rate is |d~|^2 times the uncorrected rate at the unit direction of d~.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Any, Tuple, Union

import numpy as np

from anisoemit.biaxial import axis_rate, combine_axis_rates
from anisoemit.errors import DegenerateAdjustedDipoleError, InvalidLocalFieldError
from anisoemit.media import Direction, PermittivityTensor, _parse_numbers
from anisoemit.quadrature import QuadratureSpec
from anisoemit.records import ValueTransformer
from anisoemit.results import RateResult
from anisoemit.uniaxial import DipoleSplit, UniaxialMedium, rate_uniaxial_total

SUPPRESSED_DIPOLE_NORM = 1e-14


class LocalFieldWarning(UserWarning):
    pass


@dataclass(frozen=True)
class LocalFieldTensor(ValueTransformer):
    """Diagonal local-field correction in crystal axes

    Entries must be finite. Zero or negative entries are accepted with a ``LocalFieldWarning``;
    rates only depend on their squares.

    Usage:

        >>> LocalFieldTensor.from_value("1.2,1,1").to_value()
        [1.2, 1.0, 1.0]
    """

    l1: float
    l2: float
    l3: float

    def __post_init__(self):
        for name in ("l1", "l2", "l3"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise InvalidLocalFieldError(
                    owner="LocalFieldTensor", prop=name, value=v, reason="must be finite"
                )
            if v <= 0:
                warnings.warn(
                    f"LocalFieldTensor#{name} = {v} is not positive",
                    LocalFieldWarning,
                    stacklevel=3,
                )
            object.__setattr__(self, name, v)

    @classmethod
    def identity(cls) -> "LocalFieldTensor":
        return cls(1.0, 1.0, 1.0)

    @classmethod
    def scalar(cls, c: float) -> "LocalFieldTensor":
        return cls(c, c, c)

    @classmethod
    def from_value(cls, value: Any) -> "LocalFieldTensor":
        if isinstance(value, cls):
            return value
        if isinstance(value, dict):
            return cls(value.get("l1", 1.0), value.get("l2", 1.0), value.get("l3", 1.0))
        return cls(*_parse_numbers(value, 3, "LocalFieldTensor", InvalidLocalFieldError))

    def to_value(self):
        return [self.l1, self.l2, self.l3]

    @property
    def diagonal(self) -> np.ndarray:
        return np.array([self.l1, self.l2, self.l3])

    def matrix(self) -> np.ndarray:
        return np.diag(self.diagonal)


def adjust_dipole(
    local_field: Union[LocalFieldTensor, np.ndarray], dipole: Direction
) -> Tuple[Direction, float]:
    """Unit direction and norm of d~ = L^T d

    :param local_field: Diagonal tensor, or any 3x3 matrix
    :param dipole: Unit dipole orientation in crystal axes
    :return: (unit adjusted dipole, |d~|)
    :raises DegenerateAdjustedDipoleError: |d~| below 1e-14

    Usage:

        >>> direction, norm = adjust_dipole(LocalFieldTensor(1.2, 1, 1), Direction(1, 0, 0))
        >>> direction.to_value(), norm
        ([1.0, 0.0, 0.0], 1.2)
    """
    if isinstance(local_field, LocalFieldTensor):
        adjusted = local_field.diagonal * dipole.vector
    else:
        matrix = np.asarray(local_field, dtype=float)
        if matrix.shape != (3, 3) or not np.all(np.isfinite(matrix)):
            raise InvalidLocalFieldError(
                owner="adjust_dipole",
                prop="local_field",
                value=matrix.tolist(),
                reason="must be a finite 3x3 matrix",
            )
        adjusted = matrix.T @ dipole.vector
    norm = float(np.linalg.norm(adjusted))
    if norm < SUPPRESSED_DIPOLE_NORM:
        raise DegenerateAdjustedDipoleError(norm=norm)
    return Direction.of(*adjusted), norm


def rate_uniaxial_local(
    m: UniaxialMedium, d: DipoleSplit, local_field: LocalFieldTensor
) -> RateResult:
    """Closed-form rate with L_1 along the distinguished axis and L_2 in the transverse plane

    :raises InvalidLocalFieldError: The two transverse entries differ

    Usage:

        >>> m, d = UniaxialMedium(7.0, 1.0), DipoleSplit.parallel()
        >>> round(rate_uniaxial_local(m, d, LocalFieldTensor(1.2, 1, 1)).gamma_normalized, 12)
        1.44
    """
    axis = int(np.argmax(np.abs(m.axis.vector)))
    entries = local_field.to_value()
    l_par = entries[axis]
    l_perp, other = (entries[i] for i in range(3) if i != axis)
    if l_perp != other:
        raise InvalidLocalFieldError(
            owner="rate_uniaxial_local",
            prop="local_field",
            value=entries,
            reason="transverse entries differ; use rate_biaxial_local",
        )
    d_par, d_perp = abs(l_par) * d.d_par, abs(l_perp) * d.d_perp
    norm = math.hypot(d_par, d_perp)
    if norm < SUPPRESSED_DIPOLE_NORM:
        raise DegenerateAdjustedDipoleError(norm=norm)
    return rate_uniaxial_total(m, DipoleSplit(d_par / norm, d_perp / norm)).scaled(norm * norm)


def rate_biaxial_local(
    eps: PermittivityTensor,
    dipole: Direction,
    local_field: LocalFieldTensor,
    spec: QuadratureSpec,
) -> RateResult:
    """dx^2 L1^2 G_x + dy^2 L2^2 G_y + dz^2 L3^2 G_z with G_i the rate along crystal axis i

    :raises DegenerateAdjustedDipoleError: Every weight vanishes
    :raises ToleranceNotReachedError: As ``rate_numeric``
    """
    weights = list((local_field.diagonal * dipole.vector) ** 2)
    norm = math.sqrt(math.fsum(weights))
    if norm < SUPPRESSED_DIPOLE_NORM:
        raise DegenerateAdjustedDipoleError(norm=norm)
    rates = [axis_rate(eps, i, spec) if w > 0 else None for i, w in enumerate(weights)]
    return combine_axis_rates(weights, rates)  # type: ignore
