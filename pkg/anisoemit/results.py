# coding: utf-8

from typing import List, Optional

from anisoemit.enums import BranchLabel, MethodTag
from anisoemit.errors import InvalidValueError
from anisoemit.quadrature import QuadratureResult
from anisoemit.records import Record

BRANCH_SUM_TOL = 1e-12


class BranchContribution(Record):
    label: BranchLabel
    gamma: float


class InterpBreakdown(Record):
    """Interpolation model for a dipole along ``dipole_axis``

    That axis plays the role of z; the other two keep their order as x and y.
    ``weight`` is the squared dipole component along the axis.
    """

    gamma_a: float
    gamma_b: float
    gamma_lin_x: float
    gamma_lin_y: float
    gamma_model: float
    gamma_index_form: float
    n_plus: float
    n_minus: float
    n_par: float
    dipole_axis: int = 2
    weight: float = 1.0

    def _validate(self) -> None:
        mean = 0.5 * (self.gamma_lin_x + self.gamma_lin_y)
        if abs(self.gamma_model - mean) > 1e-14 * max(1.0, abs(mean)):
            raise InvalidValueError(
                owner="InterpBreakdown",
                prop="gamma_model",
                value=self.gamma_model,
                reason=f"must be the mean {mean!r} of both interpolants",
            )


class RateResult(Record):
    """Normalised emission rate (gamma / gamma_vac) with its diagnostics

    ``branch_breakdown`` is empty for the interpolation model, whose per-axis breakdowns are in
    ``models``; ``quadrature`` is set only when a sphere integral was evaluated.
    """

    gamma_normalized: float
    method_tag: MethodTag
    branch_breakdown: List[BranchContribution] = []
    quadrature: Optional[QuadratureResult]
    models: List[InterpBreakdown] = []

    def _validate(self) -> None:
        if not self.gamma_normalized > 0:
            raise InvalidValueError(
                owner="RateResult",
                prop="gamma_normalized",
                value=self.gamma_normalized,
                reason="must be positive",
            )
        if self.branch_breakdown:
            total = sum(b.gamma for b in self.branch_breakdown)
            if abs(total - self.gamma_normalized) > BRANCH_SUM_TOL * self.gamma_normalized:
                raise InvalidValueError(
                    owner="RateResult",
                    prop="branch_breakdown",
                    value=total,
                    reason=f"branches must sum to {self.gamma_normalized!r}",
                )

    def scaled(self, factor: float) -> "RateResult":
        return RateResult(
            gamma_normalized=factor * self.gamma_normalized,
            method_tag=self.method_tag,
            branch_breakdown=[
                BranchContribution(label=b.label, gamma=factor * b.gamma)
                for b in self.branch_breakdown
            ],
            quadrature=self.quadrature,
            models=self.models,
        )

    def branch(self, label: BranchLabel) -> Optional[float]:
        return next((b.gamma for b in self.branch_breakdown if b.label is label), None)
