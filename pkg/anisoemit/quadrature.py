# coding: utf-8

"""Product Gauss-Legendre (in cos(theta)) x uniform (in phi) quadrature on the unit sphere.

Integrands are vectorised: ``f(theta, phi)`` receives two arrays of the same shape and returns
an array of that shape. Every reduction is an exactly rounded ``math.fsum`` over a fixed node
order, so a value depends only on the integrand and the grid.
"""

import logging
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Any, Callable, List, Tuple

import numpy as np

from anisoemit import serialization
from anisoemit.errors import (
    InvalidQuadratureSpecError,
    NonFiniteIntegrandError,
    ToleranceNotReachedError,
)
from anisoemit.records import Record, ValueTransformer

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
# integrand calls see at most this many nodes; rows of the grid are never split
MAX_NODES_PER_CALL = 1 << 18

Integrand = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadratureSpec(ValueTransformer):
    """Starting grid, target tolerance and refinement cap

    :ivar theta_rule: Gauss-Legendre order in cos(theta), at least 4
    :ivar phi_points: Uniform phi count, even and at least 8
    :ivar target_rel_tol: Stop once two successive grids agree to this relative error
    :ivar max_order: Largest theta rule refinement may reach
    """

    theta_rule: int = 64
    phi_points: int = 128
    target_rel_tol: float = DEFAULT_TOL
    max_order: int = 2048

    def __post_init__(self):
        def fail(prop: str, reason: str):
            raise InvalidQuadratureSpecError(
                owner="QuadratureSpec", prop=prop, value=getattr(self, prop), reason=reason
            )

        for name in ("theta_rule", "phi_points", "max_order"):
            v = getattr(self, name)
            if isinstance(v, bool) or not float(v).is_integer():
                fail(name, "must be an integer")
            object.__setattr__(self, name, int(v))
        object.__setattr__(self, "target_rel_tol", float(self.target_rel_tol))

        if self.theta_rule < 4:
            fail("theta_rule", "must be at least 4")
        if self.phi_points < 8 or self.phi_points % 2:
            fail("phi_points", "must be even and at least 8")
        if not (self.target_rel_tol > 0 and math.isfinite(self.target_rel_tol)):
            fail("target_rel_tol", "must be positive")
        if self.max_order < self.theta_rule:
            fail("max_order", "must not be below theta_rule")

    @classmethod
    def from_value(cls, value: Any) -> "QuadratureSpec":
        if isinstance(value, cls):
            return value
        if not isinstance(value, dict):
            raise TypeError(f"QuadratureSpec needs a mapping, not {type(value).__name__}")
        value = serialization.replace_keys(value, True)
        unknown = set(value) - {"theta_rule", "phi_points", "target_rel_tol", "max_order"}
        if unknown:
            raise InvalidQuadratureSpecError(
                owner="QuadratureSpec",
                prop=",".join(sorted(unknown)),
                value=value,
                reason="unknown properties",
            )
        return cls(**value)

    def to_value(self):
        return {
            "theta_rule": self.theta_rule,
            "phi_points": self.phi_points,
            "target_rel_tol": self.target_rel_tol,
            "max_order": self.max_order,
        }

    def with_tol(self, target_rel_tol: float) -> "QuadratureSpec":
        return replace(self, target_rel_tol=target_rel_tol)


class QuadratureResult(Record):
    value: float
    est_rel_error: float
    final_order: List[int]
    error_history: List[float] = []

    def _validate(self) -> None:
        if not self.est_rel_error >= 0:
            raise InvalidQuadratureSpecError(
                owner="QuadratureResult",
                prop="est_rel_error",
                value=self.est_rel_error,
                reason="must be non-negative",
            )


@lru_cache(maxsize=32)
def sphere_grid(theta_rule: int, phi_points: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nodes and weights of the product rule, each of shape (theta_rule, phi_points)

    The arrays are cached and read-only.

    Usage:

        >>> theta, phi, weights = sphere_grid(4, 8)
        >>> theta.shape
        (4, 8)
        >>> abs(float(weights.sum()) - 4 * math.pi) < 1e-12
        True
    """
    x, w = np.polynomial.legendre.leggauss(theta_rule)
    phi = 2.0 * math.pi * np.arange(phi_points) / phi_points
    theta_grid, phi_grid = np.meshgrid(np.arccos(x), phi, indexing="ij")
    weights = np.outer(w, np.full(phi_points, 2.0 * math.pi / phi_points))
    for a in (theta_grid, phi_grid, weights):
        a.setflags(write=False)
    return theta_grid, phi_grid, weights


def integrate_fixed(f: Integrand, theta_rule: int, phi_points: int) -> float:
    """One product rule, without refinement

    f is called on blocks of whole theta rows holding at most ``MAX_NODES_PER_CALL`` nodes, so
    the per-node work arrays of an integrand stay bounded on fine grids.

    :param f: Vectorised integrand of (theta, phi)
    :param theta_rule: Gauss-Legendre order in cos(theta)
    :param phi_points: Uniform phi count
    :return: Integral over the sphere
    """
    theta, phi, weights = sphere_grid(theta_rule, phi_points)
    rows = max(1, MAX_NODES_PER_CALL // phi_points)
    values = np.empty_like(weights)
    for start in range(0, theta_rule, rows):
        block = slice(start, start + rows)
        values[block] = np.asarray(f(theta[block], phi[block]), dtype=float)
    finite = np.isfinite(values)
    if not finite.all():
        raise NonFiniteIntegrandError(
            theta_rule=theta_rule, phi_points=phi_points, count=int((~finite).sum())
        )
    return math.fsum((weights * values).ravel())


def integrate_sphere(f: Integrand, spec: QuadratureSpec) -> QuadratureResult:
    """Integral of f over the unit sphere, doubling both orders until two grids agree

    The first doubling always takes place, even when ``spec.theta_rule`` already equals
    ``spec.max_order``; further ones stop before the theta rule exceeds ``spec.max_order``.
    The default cap of 2048 allows a 2048 x 4096 grid, evaluated in bounded blocks.

    :param f: Vectorised integrand of (theta, phi)
    :param spec: Starting grid and tolerance
    :return: Value of the finest grid with the relative difference to the previous one
    :raises ToleranceNotReachedError: max_order was reached first; ``best`` holds the finest grid

    Usage:

        >>> r = integrate_sphere(lambda theta, phi: np.ones_like(theta), QuadratureSpec())
        >>> abs(r.value - 4 * math.pi) < 1e-13, r.final_order
        (True, [128, 256])
    """
    theta_rule, phi_points = spec.theta_rule, spec.phi_points
    coarse = integrate_fixed(f, theta_rule, phi_points)
    history: List[float] = []
    while True:
        theta_rule, phi_points = 2 * theta_rule, 2 * phi_points
        fine = integrate_fixed(f, theta_rule, phi_points)
        diff = abs(fine - coarse)
        err = diff / abs(fine) if fine != 0 else diff
        history.append(err)
        logger.debug(
            "Sphere rule %dx%d: value=%r, rel. error=%.3e", theta_rule, phi_points, fine, err
        )

        result = QuadratureResult(
            value=fine,
            est_rel_error=err,
            final_order=[theta_rule, phi_points],
            error_history=list(history),
        )
        if err < spec.target_rel_tol:
            return result
        if 2 * theta_rule > spec.max_order:
            logger.warning(
                "Tolerance %.1e not reached at max order %d (rel. error %.3e)",
                spec.target_rel_tol,
                spec.max_order,
                err,
            )
            raise ToleranceNotReachedError(best=result, target_rel_tol=spec.target_rel_tol)
        coarse = fine
