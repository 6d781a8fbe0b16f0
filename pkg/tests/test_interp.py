# coding: utf-8
# pylint: disable=no-self-use

import math

import numpy as np
import pytest
from mock import patch

from anisoemit.enums import MethodTag, SweepAxis
from anisoemit.errors import InvalidValueError, ModelConsistencyError
from anisoemit.interp import (
    endpoint_rates,
    interp_linear_in_x,
    interp_linear_in_y,
    is_extrapolated,
    model_breakdown,
    model_error_report,
    rate_model,
    sweep_grid,
)
from anisoemit.media import Direction, PermittivityTensor
from anisoemit.quadrature import QuadratureSpec

Z = Direction.axis(2)
FIG_EPS = PermittivityTensor(1.5, 3, 5)


class TestEndpointRates:
    def test_normal(self):
        gamma_a, gamma_b = endpoint_rates(FIG_EPS)
        assert gamma_a == pytest.approx(1.22474, abs=1e-5)
        assert gamma_b == pytest.approx(1.84476, abs=1e-5)

    def test_isotropic(self):
        assert endpoint_rates(PermittivityTensor(2.25, 1.0, 2.25)) == (1.5, 1.5)

    def test_exact(self):
        assert endpoint_rates(PermittivityTensor(1, 9, 4)) == (1.0, 1.625)


class TestLinearInterpolants:
    def test_linear_in_y(self):
        assert interp_linear_in_y(PermittivityTensor(1.5, 1.5, 5)) == pytest.approx(math.sqrt(1.5))
        _, gamma_b = endpoint_rates(FIG_EPS)
        at_b = interp_linear_in_y(PermittivityTensor(1.5, 5, 5))
        assert at_b == pytest.approx(gamma_b, rel=1e-12)
        assert interp_linear_in_y(FIG_EPS) == pytest.approx(1.49046, abs=1e-5)

    def test_linear_in_x(self):
        assert interp_linear_in_x(PermittivityTensor(3, 3, 5)) == pytest.approx(math.sqrt(3))
        assert interp_linear_in_x(FIG_EPS) == pytest.approx(1.52174, abs=1e-5)

    def test_swap_partner(self):
        eps = PermittivityTensor(2.0, 6.5, 4.0)
        swapped = PermittivityTensor(6.5, 2.0, 4.0)
        assert interp_linear_in_x(eps) == pytest.approx(interp_linear_in_y(swapped), rel=1e-14)


class TestModelBreakdown:
    def test_normal(self):
        b = model_breakdown(FIG_EPS)

        assert b.gamma_model == pytest.approx(1.50610, abs=1e-5)
        assert b.gamma_model == 0.5 * (b.gamma_lin_x + b.gamma_lin_y)
        assert b.gamma_index_form == pytest.approx(b.gamma_model, rel=1e-12)
        assert b.n_plus == pytest.approx(0.5 * (math.sqrt(3) + math.sqrt(1.5)))
        assert b.n_minus == pytest.approx(0.5 * (math.sqrt(3) - math.sqrt(1.5)))
        assert b.n_par == pytest.approx(math.sqrt(5))
        assert (b.dipole_axis, b.weight) == (2, 1.0)

    def test_relabeled_axis(self):
        b = model_breakdown(PermittivityTensor(2, 3, 4), dipole_axis=0)
        relabeled = model_breakdown(PermittivityTensor(3, 4, 2))
        assert b.gamma_model == relabeled.gamma_model
        assert b.n_par == pytest.approx(math.sqrt(2))

    def test_forms_agree(self):
        rng = np.random.default_rng(23)
        for diag in rng.uniform(0.5, 8.0, size=(200, 3)):
            b = model_breakdown(PermittivityTensor(*diag))
            assert b.gamma_index_form == pytest.approx(b.gamma_model, rel=1e-12)

    def test_inconsistent_forms(self):
        with patch("anisoemit.interp._index_form", return_value=(2.0, 1.0, 0.0, 1.0)):
            with pytest.raises(ModelConsistencyError) as e:
                model_breakdown(FIG_EPS)
        assert e.value.index_form == 2.0


class TestRateModel:
    def test_normal(self):
        r = rate_model(FIG_EPS, Z)

        assert r.gamma_normalized == pytest.approx(1.50610, abs=1e-5)
        assert r.method_tag is MethodTag.INTERPOLATION_MODEL
        assert r.branch_breakdown == []
        assert len(r.models) == 1

    def test_symmetric_in_x_and_y(self):
        rng = np.random.default_rng(29)
        for x, y, z in rng.uniform(0.5, 8.0, size=(100, 3)):
            first = rate_model(PermittivityTensor(x, y, z), Z).gamma_normalized
            second = rate_model(PermittivityTensor(y, x, z), Z).gamma_normalized
            assert first == pytest.approx(second, rel=1e-14)

    def test_exact_at_endpoints(self):
        for x, z in ((1.5, 5.0), (6.0, 1.2), (1.0, 4.0)):
            gamma_a, gamma_b = endpoint_rates(PermittivityTensor(x, x, z))
            at_a = rate_model(PermittivityTensor(x, x, z), Z).gamma_normalized
            at_b = rate_model(PermittivityTensor(x, z, z), Z).gamma_normalized
            assert at_a == pytest.approx(gamma_a, rel=1e-12)
            assert at_b == pytest.approx(gamma_b, rel=1e-12)

    def test_isotropic(self):
        r = rate_model(PermittivityTensor(4, 4, 4), Direction.of(1, 2, 3))
        assert r.gamma_normalized == pytest.approx(2.0, rel=1e-14)

    def test_arbitrary_dipole(self):
        eps = PermittivityTensor(2, 3, 4)
        per_axis = [model_breakdown(eps, axis).gamma_model for axis in range(3)]

        r = rate_model(eps, Direction.of(1, 1, 1))

        assert r.gamma_normalized == pytest.approx(sum(per_axis) / 3, rel=1e-14)
        assert [m.dipole_axis for m in r.models] == [0, 1, 2]


class TestSweepGrid:
    def test_normal(self):
        grid = sweep_grid(PermittivityTensor(6, 1, 4), SweepAxis.EPS_Y, 1.0, 7.0, 4)
        assert [e.to_value() for e in grid] == [
            [6.0, 1.0, 4.0],
            [6.0, 3.0, 4.0],
            [6.0, 5.0, 4.0],
            [6.0, 7.0, 4.0],
        ]

    def test_extrapolated(self):
        assert not is_extrapolated(PermittivityTensor(6, 5, 4))
        assert is_extrapolated(PermittivityTensor(6, 7, 4))
        assert is_extrapolated(PermittivityTensor(1, 0.5, 4))


class TestModelErrorReport:
    def test_normal(self):
        grid = sweep_grid(PermittivityTensor(1.5, 1.5, 5), SweepAxis.EPS_Y, 1.5, 5.0, 3)

        report = model_error_report(grid, Z, QuadratureSpec())

        first, middle, last = report.rows
        assert first.rel_error <= 1e-8
        assert last.rel_error <= 1e-8
        assert middle.rel_error <= 0.02
        assert first.gamma_closed == pytest.approx(math.sqrt(1.5))
        assert middle.gamma_closed is None
        assert last.gamma_closed == pytest.approx(16.5 / (4 * math.sqrt(5)))
        assert not any(r.extrapolated for r in report.rows)
        assert report.max_rel_error == max(r.rel_error for r in report.rows)
        assert report.mean_rel_error == pytest.approx(sum(r.rel_error for r in report.rows) / 3)
        assert middle.quad_order >= 128
        assert middle.gamma_lin_y == interp_linear_in_y(middle.eps)
        assert middle.gamma_lin_x == interp_linear_in_x(middle.eps)
        assert middle.gamma_model == pytest.approx(
            (middle.gamma_lin_x + middle.gamma_lin_y) / 2, rel=1e-14
        )

    def test_empty(self):
        with pytest.raises(InvalidValueError):
            model_error_report([], Z, QuadratureSpec())
