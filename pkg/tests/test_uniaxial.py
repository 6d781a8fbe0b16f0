# coding: utf-8
# pylint: disable=no-self-use

import math

import numpy as np
import pytest
from mock import patch
from scipy.integrate import quad

from anisoemit.enums import BranchLabel, MethodTag
from anisoemit.errors import (
    InvalidDirectionError,
    InvalidValueError,
    NotUniaxialError,
    PeakVerificationError,
)
from anisoemit.media import Direction, PermittivityTensor, solve_modes
from anisoemit.uniaxial import (
    DipoleSplit,
    PhysicalContext,
    UniaxialMedium,
    angular_distribution,
    extraordinary_index,
    locate_peak,
    orientation_average_monte_carlo,
    peak_emission_angles,
    rate_extraordinary,
    rate_ordinary,
    rate_random_orientation,
    rate_uniaxial_total,
    to_absolute_rate,
    vacuum_rate,
)

PARALLEL = DipoleSplit.parallel()
PERPENDICULAR = DipoleSplit.perpendicular()


class TestUniaxialMedium:
    def test_from_permittivity(self):
        m = UniaxialMedium.from_permittivity(PermittivityTensor(1.5, 1.5, 5))
        assert (m.eps1, m.eps2) == (5.0, 1.5)
        assert m.axis == Direction.axis(2)
        assert m.to_permittivity() == PermittivityTensor(1.5, 1.5, 5)

    def test_biaxial(self):
        with pytest.raises(NotUniaxialError) as e:
            UniaxialMedium.from_permittivity(PermittivityTensor(2, 3, 4))
        assert e.value.eps == [2.0, 3.0, 4.0]

    def test_from_value(self):
        m = UniaxialMedium.from_value({"eps1": 7, "eps2": 1})
        assert m == UniaxialMedium(7.0, 1.0)
        assert m.to_value() == {"eps1": 7.0, "eps2": 1.0, "axis": [1.0, 0.0, 0.0]}

    def test_invalid(self):
        with pytest.raises(InvalidValueError):
            UniaxialMedium(0.0, 1.0)

    def test_tilted_axis(self):
        with pytest.raises(InvalidDirectionError):
            UniaxialMedium(7.0, 1.0, Direction.of(1, 1, 0)).to_permittivity()


class TestDipoleSplit:
    def test_from_direction(self):
        m = UniaxialMedium(5.0, 1.5, Direction.axis(2))
        d = DipoleSplit.from_direction(m, Direction.of(1, 0, 1))
        assert d.d_par == pytest.approx(math.sqrt(0.5))
        assert d.d_perp == pytest.approx(math.sqrt(0.5))

    def test_at_angle(self):
        d = DipoleSplit.at_angle(math.pi / 2)
        assert d.d_par == pytest.approx(0.0, abs=1e-16)
        assert d.d_perp == 1.0

    @pytest.mark.parametrize("d_par,d_perp", [(1.0, 1.0), (-1.0, 0.0), (0.5, 0.5)])
    def test_invalid(self, d_par, d_perp):
        with pytest.raises(InvalidValueError):
            DipoleSplit(d_par, d_perp)


class TestRateOrdinary:
    def test_normal(self):
        assert rate_ordinary(UniaxialMedium(1.0, 1.0), PERPENDICULAR) == 0.75
        assert rate_ordinary(UniaxialMedium(1.0, 4.0), PERPENDICULAR) == 1.5

    def test_parallel_does_not_contribute(self):
        assert rate_ordinary(UniaxialMedium(7.0, 3.0), PARALLEL) == 0.0


class TestRateExtraordinary:
    def test_normal(self):
        assert rate_extraordinary(UniaxialMedium(2.0, 4.0), PERPENDICULAR) == 0.25

    def test_isotropic(self):
        assert rate_extraordinary(UniaxialMedium(2.25, 2.25), PARALLEL) == 1.5

    def test_parallel_sees_transverse_permittivity(self):
        assert rate_extraordinary(UniaxialMedium(7.0, 1.0), PARALLEL) == 1.0


class TestRateUniaxialTotal:
    def test_normal(self):
        r = rate_uniaxial_total(UniaxialMedium(7.0, 1.0), PERPENDICULAR)

        assert r.gamma_normalized == 2.5
        assert r.method_tag is MethodTag.CLOSED_FORM
        assert r.branch(BranchLabel.ORDINARY) == 0.75
        assert r.branch(BranchLabel.EXTRAORDINARY) == 1.75

    def test_isotropic(self):
        m = UniaxialMedium(4.0, 4.0)
        for angle in (0.0, 0.3, math.pi / 4, math.pi / 2):
            rate = rate_uniaxial_total(m, DipoleSplit.at_angle(angle)).gamma_normalized
            assert rate == pytest.approx(2.0, abs=1e-12)

    def test_parallel(self):
        r = rate_uniaxial_total(UniaxialMedium(1.5, 5.0), PARALLEL)
        assert r.gamma_normalized == pytest.approx(math.sqrt(5.0), rel=1e-15)

    def test_decomposition(self):
        rng = np.random.default_rng(11)
        for eps1, eps2, angle in rng.uniform(0.5, 8.0, size=(100, 3)):
            m, d = UniaxialMedium(eps1, eps2), DipoleSplit.at_angle(angle % (math.pi / 2))
            total = rate_uniaxial_total(m, d).gamma_normalized
            parts = rate_ordinary(m, d) + rate_extraordinary(m, d)
            assert abs(total - parts) <= 1e-14 * total


class TestExtraordinaryIndex:
    def test_along_and_across_axis(self):
        m = UniaxialMedium(7.0, 2.0)
        assert extraordinary_index(m, 0.0) == pytest.approx(math.sqrt(2.0))
        assert extraordinary_index(m, math.pi / 2) == pytest.approx(math.sqrt(7.0))

    def test_matches_mode_solver(self):
        m = UniaxialMedium(7.0, 1.0)
        kappa = Direction(math.cos(math.pi / 4), math.sin(math.pi / 4), 0.0)
        extraordinary, _ = solve_modes(PermittivityTensor(7, 1, 1), kappa)

        n_e = extraordinary_index(m, math.pi / 4)

        assert n_e == pytest.approx(math.sqrt(7 / 4), rel=1e-12)
        assert n_e == pytest.approx(1.32288, abs=1e-5)
        assert extraordinary.n_eff == pytest.approx(n_e, rel=1e-12)

    def test_array(self):
        values = extraordinary_index(UniaxialMedium(4.0, 4.0), np.linspace(0, math.pi, 5))
        assert values.shape == (5,)
        assert values == pytest.approx(np.full(5, 2.0))


class TestAngularDistribution:
    def test_isotropic(self):
        theta = np.linspace(0, math.pi, 7)
        f = angular_distribution(UniaxialMedium(2.25, 2.25), theta)
        assert f == pytest.approx(1.5 * np.sin(theta) ** 2)

    def test_normal(self):
        m = UniaxialMedium(7.0, 1.0)
        assert angular_distribution(m, math.pi / 2) == pytest.approx(math.sqrt(7.0), rel=1e-12)
        assert angular_distribution(m, 0.0) == 0.0
        assert angular_distribution(m, math.pi) == pytest.approx(0.0, abs=1e-30)

    def test_across_axis_depends_on_eps1_only(self):
        for eps2 in (0.5, 1.0, 3.0, 9.0):
            value = angular_distribution(UniaxialMedium(2.0, eps2), math.pi / 2)
            assert value == pytest.approx(math.sqrt(2.0), rel=1e-12)

    def test_integrates_to_parallel_rate(self):
        for eps1, eps2 in ((7.0, 1.0), (1.0, 7.0), (2.25, 2.25)):
            m = UniaxialMedium(eps1, eps2)
            integral, _ = quad(
                lambda t: angular_distribution(m, t) * math.sin(t),
                0,
                math.pi,
                epsabs=0,
                epsrel=1e-12,
            )
            expected = rate_uniaxial_total(m, PARALLEL).gamma_normalized
            assert 0.75 * integral == pytest.approx(expected, rel=1e-9)

    def test_shape_depends_on_ratio_only(self):
        theta = np.linspace(0, math.pi, 181)
        base = angular_distribution(UniaxialMedium(1.0, 3.0), theta)
        for c in (0.5, 2.0, 3.0):
            scaled = angular_distribution(UniaxialMedium(c, 3.0 * c), theta)
            assert scaled / math.sqrt(c) == pytest.approx(base, rel=1e-12, abs=1e-300)


class TestPeakEmissionAngles:
    def test_two_peaks(self):
        lower, upper = peak_emission_angles(UniaxialMedium(1.0, 7.0))
        delta = math.acos(1.0 / 3.0)
        assert delta == pytest.approx(1.23096, abs=1e-5)
        assert (lower, upper) == pytest.approx((math.pi / 2 - delta, math.pi / 2 + delta))

    @pytest.mark.parametrize("r", [2.0, 3.0, 5.0, 7.0])
    def test_matches_argmax(self, r):
        m = UniaxialMedium(1.0, r)
        theta = np.linspace(0, math.pi / 2, 100001)
        found = theta[np.argmax(angular_distribution(m, theta))]
        assert abs(found - peak_emission_angles(m)[0]) <= 1e-3

    @pytest.mark.parametrize("eps1,eps2", [(4.0, 4.0), (3.0, 5.0), (7.0, 1.0), (1.0, 1.5)])
    def test_single_peak(self, eps1, eps2):
        assert peak_emission_angles(UniaxialMedium(eps1, eps2)) == (math.pi / 2,)

    @pytest.mark.parametrize("excess", [1e-6, 1e-4])
    def test_split_just_above_five_thirds(self, excess):
        r = 5.0 / 3.0 * (1 + excess)
        m = UniaxialMedium(1.0, r)

        lower, upper = peak_emission_angles(m)

        delta = math.acos(math.sqrt(2.0 / (3.0 * (r - 1.0))))
        assert lower == pytest.approx(math.pi / 2 - delta, abs=1e-15)
        assert lower < math.pi / 2 < upper
        assert lower + upper == pytest.approx(math.pi, abs=1e-12)

    @pytest.mark.parametrize("excess", [1e-6, 1e-4])
    def test_locate_peak_keeps_its_side(self, excess):
        m = UniaxialMedium(1.0, 5.0 / 3.0 * (1 + excess))
        lower, upper = peak_emission_angles(m)

        found_lower, found_upper = locate_peak(m, lower), locate_peak(m, upper)

        assert found_lower <= math.pi / 2 <= found_upper
        assert abs(found_lower - lower) <= 1e-3
        assert abs(found_upper - upper) <= 1e-3

    def test_verification(self):
        with patch("anisoemit.uniaxial.locate_peak", return_value=1.0):
            with pytest.raises(PeakVerificationError) as e:
                peak_emission_angles(UniaxialMedium(4.0, 4.0))
        assert e.value.predicted == math.pi / 2
        assert e.value.found == 1.0


class TestRateRandomOrientation:
    @pytest.mark.parametrize(
        "eps1,eps2,expected", [(4.0, 4.0, 2.0), (7.0, 1.0, 2.0), (1.0, 4.0, 1.75)]
    )
    def test_normal(self, eps1, eps2, expected):
        assert rate_random_orientation(UniaxialMedium(eps1, eps2)) == pytest.approx(expected)

    def test_matches_average_of_squares(self):
        m = UniaxialMedium(2.5, 6.0)
        parallel = rate_uniaxial_total(m, PARALLEL).gamma_normalized
        perpendicular = rate_uniaxial_total(m, PERPENDICULAR).gamma_normalized
        expected = parallel / 3 + 2 * perpendicular / 3
        assert rate_random_orientation(m) == pytest.approx(expected, rel=1e-14)

    def test_monte_carlo(self):
        m = UniaxialMedium(7.0, 1.0)
        mean, stderr = orientation_average_monte_carlo(m, samples=200_000, seed=5)
        assert abs(mean - rate_random_orientation(m)) <= 3 * stderr

    def test_monte_carlo_is_seeded(self):
        m = UniaxialMedium(1.0, 4.0)
        first = orientation_average_monte_carlo(m, samples=1000, seed=2)
        assert orientation_average_monte_carlo(m, samples=1000, seed=2) == first


class TestAbsoluteRate:
    CTX = PhysicalContext(omega_a=2.4e15, dipole_si=3.33564e-30)

    def test_vacuum_rate(self):
        epsilon_0, hbar, c = 8.8541878128e-12, 1.054571817e-34, 299792458.0
        expected = 2.4e15**3 * 3.33564e-30**2 / (3 * math.pi * epsilon_0 * hbar * c**3)
        assert vacuum_rate(self.CTX) == pytest.approx(expected, rel=1e-8)

    def test_linear(self):
        assert to_absolute_rate(self.CTX, 1.0) == vacuum_rate(self.CTX)
        assert to_absolute_rate(self.CTX, 2.0) == pytest.approx(2 * vacuum_rate(self.CTX))

    def test_invalid(self):
        with pytest.raises(InvalidValueError):
            PhysicalContext(omega_a=-1.0, dipole_si=1e-30)
