# coding: utf-8

"""Spontaneous emission rates of a dipole embedded in anisotropic (uniaxial or biaxial) media."""

from anisoemit.biaxial import rate_arbitrary_dipole, rate_integrand, rate_numeric
from anisoemit.greens import completeness_defect, imag_greens_trace, longitudinal_contribution
from anisoemit.interp import model_error_report, rate_model
from anisoemit.localfield import (
    LocalFieldTensor,
    adjust_dipole,
    rate_biaxial_local,
    rate_uniaxial_local,
)
from anisoemit.media import (
    Direction,
    MaterialFrame,
    PermittivityTensor,
    build_wave_matrix,
    solve_modes,
    spherical_direction,
)
from anisoemit.quadrature import QuadratureResult, QuadratureSpec, integrate_sphere
from anisoemit.results import RateResult
from anisoemit.uniaxial import (
    DipoleSplit,
    PhysicalContext,
    UniaxialMedium,
    angular_distribution,
    extraordinary_index,
    peak_emission_angles,
    rate_extraordinary,
    rate_ordinary,
    rate_random_orientation,
    rate_uniaxial_total,
    to_absolute_rate,
)

__version__ = "1.0.0"
