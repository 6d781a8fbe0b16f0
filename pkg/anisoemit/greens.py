# coding: utf-8

"""Decay rate through the imaginary part of the dyadic Green's function at the emitter.

The transverse sum over polarisations of n^3 e (x) e / (e . eps e) is a spectral function of
the symmetric wave operator A = eps^-1/2 (I - k k^T) eps^-1/2. A has one null eigenvalue and
two positive ones mu = 1 / eps_eff, so any function g with g(0) = 0 is the polynomial
alpha A + beta A^2 on its spectrum. Only the invariants of A are needed, never an eigenvector.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np

from anisoemit.media import Direction, PermittivityTensor, solve_modes, solve_modes_batch
from anisoemit.quadrature import QuadratureResult, QuadratureSpec, integrate_sphere

logger = logging.getLogger(__name__)

# Im G_dd of vacuum in relative units; the rate is Im G_dd / VACUUM_IMAG_GREENS.
VACUUM_IMAG_GREENS = 1.0 / (6.0 * math.pi)

# Reducing the frequency delta function leaves 1 / (16 pi^2) in front of the angular integral.
_ANGULAR_PREFACTOR = 1.0 / (16.0 * math.pi**2)


def _wave_directions(theta, phi) -> np.ndarray:
    # kappa = (cos(theta), sin(theta) cos(phi), sin(theta) sin(phi)), as in media
    st = np.sin(theta)
    return np.stack([np.cos(theta), st * np.cos(phi), st * np.sin(phi)], axis=-1)


@dataclass(frozen=True)
class GreensModeSum:
    """Mode expansion of G at coincident points for a real diagonal permittivity

    The longitudinal mode has e = kappa and zero frequency. ``includes_longitudinal`` adds it
    to ``projector_sum``; it never contributes to the imaginary part.

    Usage:

        >>> g = GreensModeSum(PermittivityTensor(7, 1, 1))
        >>> round(g.imag_greens(Direction(1, 0, 0), QuadratureSpec()) / VACUUM_IMAG_GREENS, 8)
        1.0
    """

    eps: PermittivityTensor
    includes_longitudinal: bool = False

    def _operator(self, kappas: np.ndarray) -> np.ndarray:
        s = 1.0 / np.sqrt(self.eps.diagonal)
        projector = np.eye(3) - kappas[..., :, None] * kappas[..., None, :]
        return s[:, None] * projector * s[None, :]

    def _invariants(self, kappas: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        diag = self.eps.diagonal
        k_sq = kappas**2
        # trace = mu_1 + mu_2; product = mu_1 mu_2 = (k . eps k) / det(eps), free of cancellation
        trace = (1.0 - k_sq) @ (1.0 / diag)
        product = (k_sq @ diag) / float(np.prod(diag))
        return trace, product

    def spectral_coefficients(self, kappas) -> Tuple[np.ndarray, np.ndarray]:
        """alpha, beta with alpha mu + beta mu^2 = mu^(-3/2) on both non-null eigenvalues

        With a = sqrt(mu_1), b = sqrt(mu_2): p = ab and sigma = a + b = sqrt(trace + 2p).
        """
        trace, product = self._invariants(np.asarray(kappas, dtype=float))
        p = np.sqrt(product)
        sigma = np.sqrt(trace + 2.0 * p)
        p5 = p**5
        upper = trace**2 + p * trace - p**2
        lower = trace**2 - p * trace - p**2
        beta = -upper / (p5 * sigma)
        alpha = 0.5 * (sigma * lower / p5 + trace * upper / (p5 * sigma))
        return alpha, beta

    def transverse_dyadic(self, kappas) -> np.ndarray:
        """(N, 3, 3) sum over transverse branches of n^3 e (x) e / (e . eps e)"""
        kappas = np.asarray(kappas, dtype=float).reshape(-1, 3)
        a = self._operator(kappas)
        alpha, beta = self.spectral_coefficients(kappas)
        g = alpha[:, None, None] * a + beta[:, None, None] * (a @ a)
        s = 1.0 / np.sqrt(self.eps.diagonal)
        return s[:, None] * g * s[None, :]

    def projector_sum(self, kappas) -> np.ndarray:
        """(N, 3, 3) sum of e (x) e / (e . eps e), over the longitudinal mode too when included

        With the longitudinal mode every row equals eps^-1.
        """
        kappas = np.asarray(kappas, dtype=float).reshape(-1, 3)
        a = self._operator(kappas)
        trace, product = self._invariants(kappas)
        # g(mu) = 1 on both eigenvalues: alpha = trace / product, beta = -1 / product
        g = (trace / product)[:, None, None] * a - (a @ a) / product[:, None, None]
        s = 1.0 / np.sqrt(self.eps.diagonal)
        total = s[:, None] * g * s[None, :]
        if self.includes_longitudinal:
            norm = kappas**2 @ self.eps.diagonal
            total = total + kappas[:, :, None] * kappas[:, None, :] / norm[:, None, None]
        return total

    def density(self, dipole: Direction, theta, phi) -> np.ndarray:
        """d . (sum n^3 e (x) e / (e . eps e)) . d at the wave directions (theta, phi)"""
        theta = np.asarray(theta, dtype=float)
        kappas = _wave_directions(theta, np.asarray(phi, dtype=float)).reshape(-1, 3)
        alpha, beta = self.spectral_coefficients(kappas)
        scaled = dipole.vector / np.sqrt(self.eps.diagonal)
        applied = self._operator(kappas) @ scaled
        values = alpha * (applied @ scaled) + beta * np.einsum("ni,ni->n", applied, applied)
        return values.reshape(theta.shape)

    def imag_greens_integral(self, dipole: Direction, spec: QuadratureSpec) -> QuadratureResult:
        return integrate_sphere(lambda t, p: self.density(dipole, t, p), spec)

    def imag_greens(self, dipole: Direction, spec: QuadratureSpec) -> float:
        """d . Im G(r, r) . d in relative units"""
        return _ANGULAR_PREFACTOR * self.imag_greens_integral(dipole, spec).value


def imag_greens_trace(eps: PermittivityTensor, dipole: Direction, spec: QuadratureSpec) -> float:
    """Normalised rate from the Green's-function route, Im G_dd / Im G_vac

    :param eps: Medium
    :param dipole: Unit dipole orientation in crystal axes
    :param spec: Quadrature settings
    :return: gamma / gamma_vac
    :raises ToleranceNotReachedError: Quadrature did not converge

    Usage:

        >>> eps, dipole = PermittivityTensor(4, 4, 4), Direction(0, 0, 1)
        >>> round(imag_greens_trace(eps, dipole, QuadratureSpec()), 10)
        2.0
    """
    value = GreensModeSum(eps).imag_greens(dipole, spec) / VACUUM_IMAG_GREENS
    logger.debug("Green's-function rate %r for eps=%s", value, eps.to_value())
    return value


def completeness_defect(eps: PermittivityTensor, kappa: Direction) -> np.ndarray:
    """sum over kappa and both transverse modes of e (x) e / (e . eps e), minus eps^-1

    Usage:

        >>> defect = completeness_defect(PermittivityTensor(2, 3, 4), Direction(0, 0, 1))
        >>> bool(np.max(np.abs(defect)) <= 1e-12)
        True
    """
    vectors = [kappa.vector] + [m.polarization.vector for m in solve_modes(eps, kappa)]
    total = sum(np.outer(e, e) / float(e @ (eps.diagonal * e)) for e in vectors)
    return total - eps.inverse_diagonal()


def max_completeness_defect(eps: PermittivityTensor, kappas) -> float:
    """Largest entry of ``completeness_defect`` over an (N, 3) array of unit directions"""
    kappas = np.asarray(kappas, dtype=float).reshape(-1, 3)
    batch = solve_modes_batch(eps, kappas)
    vectors = np.concatenate([kappas[:, None, :], batch.polarizations], axis=1)
    norms = np.einsum("nbi,nbi->nb", vectors, vectors * eps.diagonal)
    total = np.einsum("nbi,nbj,nb->nij", vectors, vectors, 1.0 / norms)
    return float(np.max(np.abs(total - eps.inverse_diagonal())))


def longitudinal_contribution(eps: PermittivityTensor) -> float:
    """Imaginary part of the longitudinal channel at the transition frequency

    The longitudinal mode sits at frequency zero. For a real permittivity its Lorentzian has
    zero width, so nothing reaches the transition frequency and the channel adds exactly 0.

    Usage:

        >>> longitudinal_contribution(PermittivityTensor(7, 1, 1))
        0.0
    """
    kappas = cube_directions()
    weights = 1.0 / (kappas**2 @ eps.diagonal)
    transition_sq, mode_sq, width = 1.0, 0.0, 0.0
    lineshape = width / ((mode_sq - transition_sq) ** 2 + width**2)
    value = math.fsum(weights * lineshape)
    assert value == 0.0, "a real permittivity has no longitudinal decay channel"
    return value


@lru_cache(maxsize=1)
def cube_directions() -> np.ndarray:
    """The 26 normalised directions from the centre of a cube to its neighbours, read-only

    Usage:

        >>> cube_directions().shape
        (26, 3)
    """
    offsets = np.array(
        [v for v in itertools.product((-1.0, 0.0, 1.0), repeat=3) if any(v)], dtype=float
    )
    directions = offsets / np.linalg.norm(offsets, axis=1, keepdims=True)
    directions.setflags(write=False)
    return directions
