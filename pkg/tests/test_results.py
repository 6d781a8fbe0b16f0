# coding: utf-8
# pylint: disable=no-self-use

import pytest

from anisoemit.enums import BranchLabel, MethodTag
from anisoemit.errors import InvalidValueError
from anisoemit.results import BranchContribution, InterpBreakdown, RateResult


def _rate(gamma, first, second) -> RateResult:
    return RateResult(
        gamma_normalized=gamma,
        method_tag=MethodTag.CLOSED_FORM,
        branch_breakdown=[
            BranchContribution(label=BranchLabel.ORDINARY, gamma=first),
            BranchContribution(label=BranchLabel.EXTRAORDINARY, gamma=second),
        ],
    )


class TestRateResult:
    def test_normal(self):
        r = _rate(2.5, 0.75, 1.75)
        assert r.branch(BranchLabel.ORDINARY) == 0.75
        assert r.branch(BranchLabel.PLUS) is None
        assert r.quadrature is None
        assert r.models == []

    def test_scaled(self):
        r = _rate(2.5, 0.75, 1.75).scaled(2.0)
        assert r.gamma_normalized == 5.0
        assert [b.gamma for b in r.branch_breakdown] == [1.5, 3.5]
        assert r.method_tag is MethodTag.CLOSED_FORM

    def test_not_positive(self):
        with pytest.raises(InvalidValueError) as e:
            RateResult(gamma_normalized=0.0, method_tag=MethodTag.QUADRATURE)
        assert e.value.prop == "gamma_normalized"

    def test_branches_must_sum(self):
        with pytest.raises(InvalidValueError) as e:
            _rate(2.5, 0.75, 1.5)
        assert e.value.prop == "branch_breakdown"

    def test_from_dict(self):
        r: RateResult = RateResult.from_dict(
            {
                "gammaNormalized": 2.0,
                "methodTag": "quadrature",
                "quadrature": {"value": 16.75, "estRelError": 0.0, "finalOrder": [128, 256]},
            }
        )
        assert r.method_tag is MethodTag.QUADRATURE
        assert r.quadrature.final_order == [128, 256]


class TestInterpBreakdown:
    def test_mean_required(self):
        with pytest.raises(InvalidValueError):
            InterpBreakdown(
                gamma_a=1.0,
                gamma_b=2.0,
                gamma_lin_x=1.2,
                gamma_lin_y=1.4,
                gamma_model=1.35,
                gamma_index_form=1.35,
                n_plus=1.0,
                n_minus=0.0,
                n_par=1.0,
            )
