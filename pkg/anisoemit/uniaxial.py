# coding: utf-8

"""Closed-form emission rates of a dipole in a uniaxial medium.

The distinguished axis carries ``eps1`` and the transverse plane ``eps2``. Rates are normalised
to the vacuum rate; conversion to 1/s happens only in ``to_absolute_rate``.
"""

import math
from dataclasses import dataclass
from typing import Any, Tuple, Union

import numpy as np
from scipy import constants
from scipy.optimize import minimize_scalar

from anisoemit.enums import BranchLabel, MediumKind, MethodTag
from anisoemit.errors import (
    InvalidDirectionError,
    InvalidValueError,
    NotUniaxialError,
    PeakVerificationError,
)
from anisoemit.media import Direction, PermittivityTensor
from anisoemit.records import ValueTransformer
from anisoemit.results import BranchContribution, RateResult

PEAK_TOL = 1e-3
_PEAK_WINDOW = 0.05

FloatOrArray = Union[float, np.ndarray]


def _output(value) -> FloatOrArray:
    return float(value) if np.ndim(value) == 0 else value


def _coordinate_axis(axis: Direction) -> int:
    v = np.abs(axis.vector)
    index = int(np.argmax(v))
    if v[index] != 1.0:
        raise InvalidDirectionError(
            owner="UniaxialMedium",
            prop="axis",
            value=axis.to_value(),
            reason="must be a crystal axis here; rotate with a MaterialFrame first",
        )
    return index


@dataclass(frozen=True)
class UniaxialMedium(ValueTransformer):
    """
    Usage:

        >>> m = UniaxialMedium.from_permittivity(PermittivityTensor(1, 7, 7))
        >>> m.eps1, m.eps2, m.axis.to_value()
        (1.0, 7.0, [1.0, 0.0, 0.0])
    """

    eps1: float
    eps2: float
    axis: Direction = Direction(1.0, 0.0, 0.0)

    def __post_init__(self):
        for name in ("eps1", "eps2"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v <= 0:
                raise InvalidValueError(
                    owner="UniaxialMedium", prop=name, value=v, reason="must be positive and finite"
                )
            object.__setattr__(self, name, v)

    @classmethod
    def from_permittivity(cls, eps: PermittivityTensor) -> "UniaxialMedium":
        if eps.kind is MediumKind.BIAXIAL:
            raise NotUniaxialError(eps=eps.to_value())
        index = eps.distinguished_axis
        d = eps.to_value()
        return cls(d[index], d[(index + 1) % 3], Direction.axis(index))

    def to_permittivity(self) -> PermittivityTensor:
        d = [self.eps2] * 3
        d[_coordinate_axis(self.axis)] = self.eps1
        return PermittivityTensor(*d)

    @classmethod
    def from_value(cls, value: Any) -> "UniaxialMedium":
        if isinstance(value, cls):
            return value
        if isinstance(value, dict):
            axis = Direction.from_value(value.get("axis", [1, 0, 0]))
            return cls(value["eps1"], value["eps2"], axis)
        return cls.from_permittivity(PermittivityTensor.from_value(value))

    def to_value(self):
        return {"eps1": self.eps1, "eps2": self.eps2, "axis": self.axis.to_value()}

    @property
    def ratio(self) -> float:
        return self.eps2 / self.eps1


@dataclass(frozen=True)
class DipoleSplit:
    """Dipole magnitudes along the distinguished axis and in the transverse plane

    Usage:

        >>> DipoleSplit.at_angle(0.0)
        DipoleSplit(d_par=1.0, d_perp=0.0)
    """

    d_par: float
    d_perp: float

    def __post_init__(self):
        d_par, d_perp = float(self.d_par), float(self.d_perp)
        if d_par < 0 or d_perp < 0 or abs(d_par * d_par + d_perp * d_perp - 1.0) > 1e-12:
            raise InvalidValueError(
                owner="DipoleSplit",
                prop="d_par,d_perp",
                value=(d_par, d_perp),
                reason="must be non-negative with squares summing to 1",
            )
        object.__setattr__(self, "d_par", d_par)
        object.__setattr__(self, "d_perp", d_perp)

    @classmethod
    def parallel(cls) -> "DipoleSplit":
        return cls(1.0, 0.0)

    @classmethod
    def perpendicular(cls) -> "DipoleSplit":
        return cls(0.0, 1.0)

    @classmethod
    def at_angle(cls, angle: float) -> "DipoleSplit":
        """Dipole tilted by ``angle`` (radians, within [0, pi/2]) from the distinguished axis"""
        return cls(abs(math.cos(angle)), abs(math.sin(angle)))

    @classmethod
    def from_direction(cls, medium: UniaxialMedium, dipole: Direction) -> "DipoleSplit":
        d, a = dipole.vector, medium.axis.vector
        d_par = abs(float(d @ a))
        d_perp = float(np.linalg.norm(np.cross(d, a)))
        norm = math.hypot(d_par, d_perp)
        return cls(d_par / norm, d_perp / norm)


@dataclass(frozen=True)
class PhysicalContext:
    """Transition angular frequency (rad/s) and dipole moment (C m)"""

    omega_a: float
    dipole_si: float

    def __post_init__(self):
        for name in ("omega_a", "dipole_si"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v <= 0:
                raise InvalidValueError(
                    owner="PhysicalContext", prop=name, value=v, reason="must be positive"
                )
            object.__setattr__(self, name, v)


# gamma_vac carries 1/(3 pi) while both branch integrals carry 1/(4 pi), hence the 3/4 factors.
def rate_ordinary(m: UniaxialMedium, d: DipoleSplit) -> float:
    """
    Usage:

        >>> rate_ordinary(UniaxialMedium(1.0, 4.0), DipoleSplit.perpendicular())
        1.5
    """
    return 0.75 * math.sqrt(m.eps2) * d.d_perp**2


def rate_extraordinary(m: UniaxialMedium, d: DipoleSplit) -> float:
    """
    Usage:

        >>> rate_extraordinary(UniaxialMedium(2.0, 4.0), DipoleSplit.perpendicular())
        0.25
        >>> rate_extraordinary(UniaxialMedium(7.0, 1.0), DipoleSplit.parallel())
        1.0
    """
    root = math.sqrt(m.eps2)
    # (3/4) * (eps1 / (3 sqrt(eps2))) for the in-plane part
    return m.eps1 * d.d_perp**2 / (4.0 * root) + root * d.d_par**2


def rate_uniaxial_total(m: UniaxialMedium, d: DipoleSplit) -> RateResult:
    """(eps1 + 3 eps2) / (4 sqrt(eps2)) d_perp^2 + sqrt(eps2) d_par^2

    :param m: Medium
    :param d: Dipole split against the distinguished axis
    :return: Closed-form rate with the ordinary/extraordinary breakdown

    Usage:

        >>> m, d = UniaxialMedium(7.0, 1.0), DipoleSplit.perpendicular()
        >>> rate_uniaxial_total(m, d).gamma_normalized
        2.5
    """
    ordinary = rate_ordinary(m, d)
    extraordinary = rate_extraordinary(m, d)
    return RateResult(
        gamma_normalized=ordinary + extraordinary,
        method_tag=MethodTag.CLOSED_FORM,
        branch_breakdown=[
            BranchContribution(label=BranchLabel.ORDINARY, gamma=ordinary),
            BranchContribution(label=BranchLabel.EXTRAORDINARY, gamma=extraordinary),
        ],
    )


def extraordinary_index(m: UniaxialMedium, theta: FloatOrArray) -> FloatOrArray:
    """n_e for a wave at ``theta`` from the distinguished axis; accepts arrays

    Usage:

        >>> round(extraordinary_index(UniaxialMedium(7.0, 1.0), math.pi / 2), 12)
        2.645751311065
    """
    theta = np.asarray(theta, dtype=float)
    return _output((np.cos(theta) ** 2 / m.eps2 + np.sin(theta) ** 2 / m.eps1) ** -0.5)


def angular_distribution(m: UniaxialMedium, theta: FloatOrArray) -> FloatOrArray:
    """f(theta) = n_e^5 sin^2(theta) / eps1^2 for a dipole along the distinguished axis

    The parallel rate is (3/4) * integral of f(theta) sin(theta) over [0, pi]. f does not depend
    on the azimuth.
    """
    theta = np.asarray(theta, dtype=float)
    n_e = np.asarray(extraordinary_index(m, theta))
    return _output(n_e**5 * np.sin(theta) ** 2 / m.eps1**2)


def locate_peak(m: UniaxialMedium, angle: float) -> float:
    """Numeric argmax of the angular distribution within 0.05 rad of ``angle``

    The window is kept on the side of pi/2 that holds ``angle``, since f is symmetric about
    pi/2 and a split peak has its mirror image there.
    """
    half = math.pi / 2
    lower, upper = max(0.0, angle - _PEAK_WINDOW), min(math.pi, angle + _PEAK_WINDOW)
    if angle < half:
        upper = min(upper, half)
    elif angle > half:
        lower = max(lower, half)
    found = minimize_scalar(
        lambda t: -float(angular_distribution(m, t)),
        bounds=(lower, upper),
        method="bounded",
        options={"xatol": 1e-10},
    ).x
    return float(found)


def peak_emission_angles(m: UniaxialMedium) -> Tuple[float, ...]:
    """Angles of maximal emission for a dipole along the distinguished axis

    Two peaks at pi/2 -+ arccos(sqrt(2 / (3 (r - 1)))) when r = eps2 / eps1 exceeds 5/3,
    otherwise one at pi/2. Each angle is confirmed by a bounded numeric maximisation.

    :raises PeakVerificationError: The numeric maximum is farther than 1e-3 rad

    Usage:

        >>> [round(a, 6) for a in peak_emission_angles(UniaxialMedium(1.0, 7.0))]
        [0.339837, 2.801756]
        >>> peak_emission_angles(UniaxialMedium(4.0, 4.0)) == (math.pi / 2,)
        True
    """
    r = m.ratio
    if r > 5.0 / 3.0:
        delta = math.acos(math.sqrt(2.0 / (3.0 * (r - 1.0))))
        angles: Tuple[float, ...] = (math.pi / 2 - delta, math.pi / 2 + delta)
    else:
        angles = (math.pi / 2,)
    for angle in angles:
        found = locate_peak(m, angle)
        if abs(found - angle) > PEAK_TOL:
            raise PeakVerificationError(predicted=angle, found=found)
    return angles


def rate_random_orientation(m: UniaxialMedium) -> float:
    """Average over isotropically distributed dipoles, <d_par^2> = 1/3 and <d_perp^2> = 2/3

    Usage:

        >>> rate_random_orientation(UniaxialMedium(1.0, 4.0))
        1.75
    """
    root = math.sqrt(m.eps2)
    return m.eps1 / (6.0 * root) + 5.0 * root / 6.0


def orientation_average_monte_carlo(
    m: UniaxialMedium, samples: int = 1_000_000, seed: int = 0
) -> Tuple[float, float]:
    """Monte-Carlo average of the total rate over uniformly random dipole orientations

    :return: (mean, standard error)
    """
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(samples, 3))
    cos_sq = (v @ m.axis.vector) ** 2 / np.einsum("ij,ij->i", v, v)
    root = math.sqrt(m.eps2)
    rates = (m.eps1 + 3.0 * m.eps2) / (4.0 * root) * (1.0 - cos_sq) + root * cos_sq
    return float(rates.mean()), float(rates.std(ddof=1) / math.sqrt(samples))


def vacuum_rate(ctx: PhysicalContext) -> float:
    """gamma_vac = omega^3 d^2 / (3 pi eps0 hbar c^3) in 1/s"""
    return ctx.omega_a**3 * ctx.dipole_si**2 / (
        3.0 * math.pi * constants.epsilon_0 * constants.hbar * constants.c**3
    )


def to_absolute_rate(ctx: PhysicalContext, gamma_normalized: float) -> float:
    return gamma_normalized * vacuum_rate(ctx)
