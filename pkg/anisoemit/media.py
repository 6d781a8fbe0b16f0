# coding: utf-8

"""Permittivity tensors, directions and the plane-wave eigenproblem.

All permittivities are relative (divided by the vacuum permittivity). A wave direction
``kappa`` is parametrised with the polar angle measured from the x-axis:
``kappa = (cos(theta), sin(theta) cos(phi), sin(theta) sin(phi))``.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Any, Optional, Sequence, Tuple

import numpy as np

from anisoemit.enums import BranchLabel, MediumKind
from anisoemit.errors import InvalidDirectionError, InvalidFrameError, InvalidPermittivityError
from anisoemit.records import ValueTransformer

logger = logging.getLogger(__name__)

EQUAL_PERMITTIVITY_REL_TOL = 1e-12
DEGENERATE_REL_TOL = 1e-9
UNIT_NORM_TOL = 1e-12
SIGN_ZERO_TOL = 1e-12
# Closed-form eigenvectors divide by (eps_i - eps_eff); below this share of eps_i, or below
# NEAR_DEGENERATE_REL_TOL of eps_eff gap, a row is solved by the symmetric eigen-solve.
SINGULAR_DENOMINATOR_REL_TOL = 1e-1
NEAR_DEGENERATE_REL_TOL = 1e-2


def _parse_numbers(value: Any, count: int, owner: str, error) -> Tuple[float, ...]:
    try:
        if isinstance(value, str):
            parts = [p for p in value.replace(";", ",").replace(" ", ",").split(",") if p]
        else:
            parts = list(np.asarray(value, dtype=float).ravel())
        numbers = tuple(float(p) for p in parts)
    except (TypeError, ValueError) as e:
        raise error(owner=owner, prop="value", value=value, reason=str(e)) from e
    if len(numbers) != count:
        raise error(
            owner=owner, prop="value", value=value, reason=f"{count} numbers are required"
        )
    return numbers


def _relatively_equal(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(abs(a), abs(b))


@dataclass(frozen=True)
class PermittivityTensor(ValueTransformer):
    """Diagonal relative permittivity in crystal axes

    Usage:

        >>> eps = PermittivityTensor(7, 1, 1)
        >>> eps.kind.value, eps.distinguished_axis
        ('uniaxial', 0)
        >>> PermittivityTensor.from_value("1.5,3,5").to_value()
        [1.5, 3.0, 5.0]
    """

    eps_x: float
    eps_y: float
    eps_z: float

    def __post_init__(self):
        for name in ("eps_x", "eps_y", "eps_z"):
            v = getattr(self, name)
            try:
                v = float(v)
            except (TypeError, ValueError) as e:
                raise InvalidPermittivityError(
                    owner="PermittivityTensor", prop=name, value=v, reason=str(e)
                ) from e
            if not math.isfinite(v) or v <= 0:
                raise InvalidPermittivityError(
                    owner="PermittivityTensor",
                    prop=name,
                    value=v,
                    reason="must be strictly positive and finite",
                )
            object.__setattr__(self, name, v)

    @classmethod
    def from_value(cls, value: Any) -> "PermittivityTensor":
        if isinstance(value, cls):
            return value
        if isinstance(value, dict):
            missing = {"eps_x", "eps_y", "eps_z"} - set(value)
            if missing:
                raise InvalidPermittivityError(
                    owner="PermittivityTensor",
                    prop=",".join(sorted(missing)),
                    value=value,
                    reason="is required",
                )
            return cls(value["eps_x"], value["eps_y"], value["eps_z"])
        return cls(*_parse_numbers(value, 3, "PermittivityTensor", InvalidPermittivityError))

    def to_value(self):
        return [self.eps_x, self.eps_y, self.eps_z]

    @property
    def diagonal(self) -> np.ndarray:
        return np.array([self.eps_x, self.eps_y, self.eps_z])

    def matrix(self) -> np.ndarray:
        return np.diag(self.diagonal)

    def inverse_diagonal(self) -> np.ndarray:
        return np.diag(1.0 / self.diagonal)

    @property
    def kind(self) -> MediumKind:
        x, y, z = self.eps_x, self.eps_y, self.eps_z
        pairs = [
            _relatively_equal(a, b, EQUAL_PERMITTIVITY_REL_TOL) for a, b in ((x, y), (y, z), (x, z))
        ]
        if all(pairs):
            return MediumKind.ISOTROPIC
        if any(pairs):
            return MediumKind.UNIAXIAL
        return MediumKind.BIAXIAL

    @property
    def distinguished_axis(self) -> Optional[int]:
        """Index of the odd entry of a uniaxial tensor, 0 when isotropic, None when biaxial"""
        kind = self.kind
        if kind is MediumKind.ISOTROPIC:
            return 0
        if kind is MediumKind.BIAXIAL:
            return None
        x, y, z = self.eps_x, self.eps_y, self.eps_z
        if _relatively_equal(y, z, EQUAL_PERMITTIVITY_REL_TOL):
            return 0
        if _relatively_equal(x, z, EQUAL_PERMITTIVITY_REL_TOL):
            return 1
        return 2

    def permuted(self, order: Sequence[int]) -> "PermittivityTensor":
        d = self.to_value()
        return PermittivityTensor(*(d[i] for i in order))

    def scaled(self, c: float) -> "PermittivityTensor":
        return PermittivityTensor(c * self.eps_x, c * self.eps_y, c * self.eps_z)

    def with_component(self, index: int, value: float) -> "PermittivityTensor":
        return replace(self, **{("eps_x", "eps_y", "eps_z")[index]: value})


@dataclass(frozen=True)
class Direction(ValueTransformer):
    """Unit 3-vector, either a wave direction or a dipole orientation

    Usage:

        >>> Direction.of(0, 3, 4).to_value()
        [0.0, 0.6, 0.8]
        >>> Direction.axis(2).to_value()
        [0.0, 0.0, 1.0]
    """

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, float(getattr(self, name)))
        norm = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if not math.isfinite(norm) or abs(norm - 1.0) > UNIT_NORM_TOL:
            raise InvalidDirectionError(
                owner="Direction",
                prop="norm",
                value=norm,
                reason="a direction must have unit norm (use Direction.of to normalise)",
            )

    @classmethod
    def of(cls, x: float, y: float, z: float) -> "Direction":
        v = np.array([x, y, z], dtype=float)
        norm = float(np.linalg.norm(v))
        if not math.isfinite(norm) or norm < 1e-300:
            raise InvalidDirectionError(
                owner="Direction", prop="norm", value=norm, reason="cannot normalise this vector"
            )
        v = v / norm
        return cls(float(v[0]), float(v[1]), float(v[2]))

    @classmethod
    def axis(cls, index: int) -> "Direction":
        v = [0.0, 0.0, 0.0]
        v[index] = 1.0
        return cls(*v)

    @classmethod
    def from_value(cls, value: Any) -> "Direction":
        if isinstance(value, cls):
            return value
        if isinstance(value, dict):
            return cls.of(value.get("x", 0.0), value.get("y", 0.0), value.get("z", 0.0))
        return cls.of(*_parse_numbers(value, 3, "Direction", InvalidDirectionError))

    def to_value(self):
        return [self.x, self.y, self.z]

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __neg__(self) -> "Direction":
        return Direction(-self.x, -self.y, -self.z)


@dataclass(frozen=True)
class MaterialFrame(ValueTransformer):
    """Rotation (row-major, 9 entries) mapping lab axes to crystal principal axes"""

    rotation: Tuple[float, ...]

    def __post_init__(self):
        rotation = tuple(float(v) for v in np.asarray(self.rotation, dtype=float).ravel())
        if len(rotation) != 9:
            raise InvalidFrameError(
                owner="MaterialFrame",
                prop="rotation",
                value=self.rotation,
                reason="needs 9 entries",
            )
        object.__setattr__(self, "rotation", rotation)
        r = self.matrix
        defect = float(np.max(np.abs(r @ r.T - np.eye(3))))
        if not math.isfinite(defect) or defect > UNIT_NORM_TOL:
            raise InvalidFrameError(
                owner="MaterialFrame",
                prop="rotation",
                value=self.rotation,
                reason=f"not orthogonal (max |R R^T - I| = {defect:.3e})",
            )
        if abs(float(np.linalg.det(r)) - 1.0) > UNIT_NORM_TOL:
            raise InvalidFrameError(
                owner="MaterialFrame",
                prop="rotation",
                value=self.rotation,
                reason="determinant must be +1 (proper rotation)",
            )

    @classmethod
    def identity(cls) -> "MaterialFrame":
        return cls(tuple(np.eye(3).ravel()))

    @classmethod
    def about_z(cls, angle: float) -> "MaterialFrame":
        c, s = math.cos(angle), math.sin(angle)
        return cls((c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0))

    @classmethod
    def from_value(cls, value: Any) -> "MaterialFrame":
        if isinstance(value, cls):
            return value
        return cls(_parse_numbers(value, 9, "MaterialFrame", InvalidFrameError))

    def to_value(self):
        return self.matrix.tolist()

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.rotation).reshape(3, 3)


@dataclass(frozen=True)
class ModeSolution:
    """One transverse polarisation branch for a wave direction

    ``degenerate`` is set when both branches share eps_eff (optic axis or isotropic medium);
    the polarisation is then one vector of an eps-orthogonal pair spanning the eigenspace.
    """

    polarization: Direction
    eps_eff: float
    branch_label: BranchLabel
    degenerate: bool = False

    @property
    def n_eff(self) -> float:
        return math.sqrt(self.eps_eff)


@dataclass(frozen=True)
class ModeBatch:
    """Both branches for N wave directions, sorted by eps_eff descending

    :ivar polarizations: (N, 2, 3) unit vectors
    :ivar eps_eff: (N, 2)
    :ivar degenerate: (N,) rows whose branches coincide
    :ivar fallback: (N,) rows solved by the direct eigen-solve
    :ivar labels: branch labels of non-degenerate rows
    """

    polarizations: np.ndarray
    eps_eff: np.ndarray
    degenerate: np.ndarray
    fallback: np.ndarray
    labels: Tuple[BranchLabel, BranchLabel]

    def __len__(self) -> int:
        return len(self.eps_eff)

    def branch_labels(self, row: int) -> Tuple[BranchLabel, BranchLabel]:
        if self.degenerate[row]:
            return BranchLabel.DEGENERATE_1, BranchLabel.DEGENERATE_2
        return self.labels


def spherical_direction(theta: float, phi: float) -> Direction:
    """
    Usage:

        >>> spherical_direction(0.0, 1.0).to_value()
        [1.0, 0.0, 0.0]
    """
    st = math.sin(theta)
    return Direction(math.cos(theta), st * math.cos(phi), st * math.sin(phi))


def spherical_directions(theta, phi) -> np.ndarray:
    """Vectorised ``spherical_direction``; the result has shape ``theta.shape + (3,)``"""
    theta, phi = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))
    st = np.sin(theta)
    return np.stack([np.cos(theta), st * np.cos(phi), st * np.sin(phi)], axis=-1)


def build_wave_matrix(eps: PermittivityTensor, kappa: Direction) -> np.ndarray:
    """M_ij = (delta_ij - kappa_i kappa_j) / eps_i; its non-null eigenvalues are 1/eps_eff

    Usage:

        >>> build_wave_matrix(PermittivityTensor(2, 3, 4), Direction(0, 0, 1)).tolist()
        [[0.5, 0.0, 0.0], [0.0, 0.3333333333333333, 0.0], [0.0, 0.0, 0.0]]
    """
    k = kappa.vector
    return (np.eye(3) - np.outer(k, k)) / eps.diagonal[:, None]


def mode_normalization(eps: PermittivityTensor, mode: ModeSolution) -> float:
    """e . (eps e), the denominator of every rate integrand

    Usage:

        >>> mode = ModeSolution(Direction(0, 1, 0), 4.0, BranchLabel.DEGENERATE_1, degenerate=True)
        >>> mode_normalization(PermittivityTensor(4, 4, 4), mode)
        4.0
    """
    e = mode.polarization.vector
    return float(e @ (eps.diagonal * e))


def _canonical_sign(vectors: np.ndarray) -> np.ndarray:
    """Normalise (..., 3) vectors and make the first significant component positive"""
    vectors = vectors / np.linalg.norm(vectors, axis=-1, keepdims=True)
    significant = np.abs(vectors) > SIGN_ZERO_TOL
    first = np.argmax(significant, axis=-1)
    lead = np.take_along_axis(vectors, first[..., None], axis=-1)
    # "+ 0.0" drops negative zeros
    return vectors * np.where(lead < 0, -1.0, 1.0) + 0.0


def _eigen_solve(diag: np.ndarray, kappas: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Direct solve of M e = e / eps_eff via the symmetric A = eps^-1/2 (I - k k^T) eps^-1/2"""
    s = 1.0 / np.sqrt(diag)
    projector = np.eye(3)[None, :, :] - kappas[:, :, None] * kappas[:, None, :]
    a = s[None, :, None] * projector * s[None, None, :]
    mu, u = np.linalg.eigh(a)
    # ascending mu: column 0 is the null (longitudinal) direction
    polarizations = np.swapaxes(u[:, :, 1:] * s[None, :, None], 1, 2)
    return polarizations, 1.0 / mu[:, 1:]


def _solve_isotropic(diag: np.ndarray, kappas: np.ndarray):
    helper = np.zeros_like(kappas)
    helper[np.arange(len(kappas)), np.argmin(np.abs(kappas), axis=1)] = 1.0
    first = np.cross(kappas, helper)
    first = first / np.linalg.norm(first, axis=1, keepdims=True)
    second = np.cross(kappas, first)
    polarizations = np.stack([first, second], axis=1)
    eps_eff = np.full((len(kappas), 2), diag[0])
    return polarizations, eps_eff, np.zeros(len(kappas), dtype=bool)


def _solve_uniaxial(diag: np.ndarray, kappas: np.ndarray, axis: int):
    others = [i for i in range(3) if i != axis]
    eps1, eps2 = diag[axis], diag[others[0]]
    k_axis = kappas[:, axis]
    k_perp_sq = kappas[:, others[0]] ** 2 + kappas[:, others[1]] ** 2

    unit_axis = np.zeros(3)
    unit_axis[axis] = 1.0
    ordinary = np.cross(np.broadcast_to(unit_axis, kappas.shape), kappas)

    extraordinary = eps1 * k_axis[:, None] * kappas
    extraordinary[:, axis] = -eps2 * k_perp_sq
    eps_e = eps1 * eps2 / (eps1 * k_axis**2 + eps2 * k_perp_sq)
    eps_o = np.full(len(kappas), eps2)

    if eps1 > eps2:
        polarizations = np.stack([extraordinary, ordinary], axis=1)
        eps_eff = np.stack([eps_e, eps_o], axis=1)
    else:
        polarizations = np.stack([ordinary, extraordinary], axis=1)
        eps_eff = np.stack([eps_o, eps_e], axis=1)
    # along the distinguished axis both vectors vanish
    return polarizations, eps_eff, k_perp_sq < 1e-24


def _solve_biaxial(diag: np.ndarray, kappas: np.ndarray):
    k_sq = kappas**2
    trace = diag.sum()
    t = k_sq @ (diag * (trace - diag))
    q = k_sq @ diag
    p = float(np.prod(diag))
    s = np.sqrt(np.maximum(t * t - 4.0 * p * q, 0.0))
    # stable pair: eps_minus (larger) = (t + s) / 2q, eps_plus (smaller) = 2P / (t + s)
    eps_eff = np.stack([(t + s) / (2.0 * q), 2.0 * p / (t + s)], axis=1)

    denominators = diag[None, None, :] - eps_eff[:, :, None]
    singular = np.any(np.abs(denominators) < SINGULAR_DENOMINATOR_REL_TOL * diag, axis=(1, 2))
    with np.errstate(divide="ignore", invalid="ignore"):
        polarizations = kappas[:, None, :] / denominators
    return polarizations, eps_eff, singular


def branch_labels(eps: PermittivityTensor) -> Tuple[BranchLabel, BranchLabel]:
    """Labels of the two branches (eps_eff descending) away from degenerate directions

    Usage:

        >>> [x.value for x in branch_labels(PermittivityTensor(1, 7, 7))]
        ['ordinary', 'extraordinary']
    """
    kind = eps.kind
    if kind is MediumKind.ISOTROPIC:
        return BranchLabel.DEGENERATE_1, BranchLabel.DEGENERATE_2
    if kind is MediumKind.BIAXIAL:
        return BranchLabel.MINUS, BranchLabel.PLUS
    d = eps.to_value()
    axis = eps.distinguished_axis
    if d[axis] > d[(axis + 1) % 3]:
        return BranchLabel.EXTRAORDINARY, BranchLabel.ORDINARY
    return BranchLabel.ORDINARY, BranchLabel.EXTRAORDINARY


def solve_modes_batch(eps: PermittivityTensor, kappas) -> ModeBatch:
    """Vectorised ``solve_modes`` for an (N, 3) array of unit wave directions"""
    kappas = np.asarray(kappas, dtype=float).reshape(-1, 3)
    diag = eps.diagonal
    kind = eps.kind

    if kind is MediumKind.ISOTROPIC:
        polarizations, eps_eff, fallback = _solve_isotropic(diag, kappas)
    elif kind is MediumKind.UNIAXIAL:
        polarizations, eps_eff, fallback = _solve_uniaxial(diag, kappas, eps.distinguished_axis)
    else:
        polarizations, eps_eff, fallback = _solve_biaxial(diag, kappas)

    gap = np.abs(eps_eff[:, 0] - eps_eff[:, 1]) / eps_eff.max(axis=1)
    degenerate = gap < DEGENERATE_REL_TOL
    if kind is MediumKind.ISOTROPIC:
        degenerate[:] = True
    elif kind is MediumKind.BIAXIAL:
        fallback = fallback | (gap < NEAR_DEGENERATE_REL_TOL)

    if np.any(fallback):
        logger.debug(
            "Eigen-solve fallback for %d of %d directions", int(fallback.sum()), len(kappas)
        )
        polarizations[fallback], eps_eff[fallback] = _eigen_solve(diag, kappas[fallback])

    return ModeBatch(
        polarizations=_canonical_sign(polarizations),
        eps_eff=eps_eff,
        degenerate=degenerate,
        fallback=fallback,
        labels=branch_labels(eps),
    )


def solve_modes(eps: PermittivityTensor, kappa: Direction) -> Tuple[ModeSolution, ModeSolution]:
    """Both transverse branches for one wave direction, sorted by eps_eff descending

    :param eps: Medium
    :param kappa: Unit wave direction
    :return: Two mode solutions

    Usage:

        >>> first, second = solve_modes(PermittivityTensor(7, 1, 1), Direction(0, 0, 1))
        >>> first.branch_label.value, first.eps_eff, first.polarization.to_value()
        ('extraordinary', 7.0, [1.0, 0.0, 0.0])
        >>> second.branch_label.value, second.eps_eff, second.polarization.to_value()
        ('ordinary', 1.0, [0.0, 1.0, 0.0])
    """
    batch = solve_modes_batch(eps, kappa.vector[None, :])
    labels = batch.branch_labels(0)
    return tuple(  # type: ignore
        ModeSolution(
            polarization=Direction.of(*batch.polarizations[0, i]),
            eps_eff=float(batch.eps_eff[0, i]),
            branch_label=labels[i],
            degenerate=bool(batch.degenerate[0]),
        )
        for i in range(2)
    )


def to_crystal_frame(frame: MaterialFrame, v: Direction) -> Direction:
    """Rotate a lab-frame vector into the crystal frame

    Usage:

        >>> to_crystal_frame(MaterialFrame.about_z(math.pi / 2), Direction(1, 0, 0)).to_value()
        [6.123233995736766e-17, 1.0, 0.0]
    """
    return Direction.of(*(frame.matrix @ v.vector))
