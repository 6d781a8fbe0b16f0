# coding: utf-8
from typing import Any, List, Optional, Sequence


class AnisoEmitError(Exception):
    title: str

    def __str__(self) -> str:
        return f"""
[{self.title}]

{self.description}
        """

    @property
    def description(self) -> str:
        raise NotImplementedError


class InvalidInputError(AnisoEmitError):
    """Base of every error caused by a value the caller can fix."""


class InvalidTypeError(InvalidInputError):
    """
    :ivar str title: Error title
    :ivar str description: Error description
    :ivar str cls: Class name
    :ivar str prop: Property name
    :ivar Any value: Property value
    :ivar List[str] expected: Expected types
    :ivar str actual: Actual type
    """

    title: str = "Invalid type error"
    cls: str
    prop: str
    value: Any
    expected: Sequence[str]
    actual: str

    def __init__(self, *, cls, prop: str, value: Any, expected: Sequence[Any], actual, reason=None):
        super().__init__()
        self.cls = f"{cls.__module__}.{cls.__name__}"
        self.prop = prop
        self.value = value
        self.expected = [str(t) for t in expected]
        self.actual = str(actual)
        self.reason = reason

    @property
    def description(self) -> str:
        detail = f"\n    * {self.reason}" if self.reason else ""
        return f"""`{self.cls}#{self.prop} = {self.value}` doesn't match expected types.
Expected type is one of {self.expected}, but actual type is `{self.actual}`{detail}"""


class UnknownPropertiesError(InvalidInputError):
    """
    :ivar str title: Error title
    :ivar str cls: Class name
    :ivar List[str] props: Unknown property names
    """

    title: str = "Unknown properties error"
    cls: str
    props: List[str]

    def __init__(self, *, cls, props: List[str]):
        super().__init__()
        self.cls = f"{cls.__module__}.{cls.__name__}"
        self.props = props

    @property
    def description(self) -> str:
        return f"""`{self.cls}` has unknown properties {self.props}!!

    * Check the spelling of {' and '.join(['`' + x + '`' for x in self.props])}"""


class RequiredError(InvalidInputError):
    """
    :ivar str title: Error title
    :ivar str cls: Class name
    :ivar str prop: Property name
    :ivar str type_: Property type
    """

    title: str = "Required error"
    cls: str
    prop: str
    type_: str

    def __init__(self, *, cls, prop: str, type_):
        super().__init__()
        self.cls = f"{cls.__module__}.{cls.__name__}"
        self.prop = prop
        self.type_ = str(type_)

    @property
    def description(self) -> str:
        return f"""`{self.cls}#{self.prop}: {self.type_}` is empty!!

    * `{self.prop}` is required, specify it."""


class InvalidValueError(InvalidInputError):
    """A value has the right type but breaks an invariant of its owner.

    :ivar str owner: Type that rejected the value
    :ivar str prop: Offending property
    :ivar Any value: Offending value
    :ivar str reason: Broken invariant
    """

    title: str = "Invalid value error"

    def __init__(self, *, owner: str, prop: str, value: Any, reason: str):
        super().__init__()
        self.owner = owner
        self.prop = prop
        self.value = value
        self.reason = reason

    @property
    def description(self) -> str:
        return f"`{self.owner}#{self.prop} = {self.value}` is invalid: {self.reason}"


class InvalidPermittivityError(InvalidValueError):
    title: str = "Invalid permittivity error"


class InvalidDirectionError(InvalidValueError):
    title: str = "Invalid direction error"


class InvalidFrameError(InvalidValueError):
    title: str = "Invalid material frame error"


class InvalidQuadratureSpecError(InvalidValueError):
    title: str = "Invalid quadrature spec error"


class InvalidLocalFieldError(InvalidValueError):
    title: str = "Invalid local field error"


class NotUniaxialError(InvalidInputError):
    """
    :ivar Sequence[float] eps: Principal permittivities which were given
    """

    title: str = "Not uniaxial error"

    def __init__(self, *, eps: Sequence[float]):
        super().__init__()
        self.eps = list(eps)

    @property
    def description(self) -> str:
        return f"""Permittivity {self.eps} is biaxial, but this operation needs two equal entries.

    * Use the numeric or model method for biaxial media"""


class ToleranceNotReachedError(AnisoEmitError):
    """Refinement hit ``max_order`` before the target tolerance.

    :ivar QuadratureResult best: Finest quadrature evaluated
    :ivar float target_rel_tol: Requested tolerance
    :ivar RateResult rate: Best rate, set when raised through a rate operation
    """

    title: str = "Tolerance not reached error"

    def __init__(self, *, best, target_rel_tol: float):
        super().__init__()
        self.best = best
        self.target_rel_tol = target_rel_tol
        self.rate: Optional[Any] = None

    @property
    def description(self) -> str:
        return f"""Best value {self.best.value!r} reached rel. error {self.best.est_rel_error:.3e} \
at order {self.best.final_order}, target was {self.target_rel_tol:.3e}.

    * Raise `max_order` or loosen `target_rel_tol`"""


class NonFiniteIntegrandError(AnisoEmitError):
    title: str = "Non-finite integrand error"

    def __init__(self, *, theta_rule: int, phi_points: int, count: int):
        super().__init__()
        self.theta_rule = theta_rule
        self.phi_points = phi_points
        self.count = count

    @property
    def description(self) -> str:
        return (
            f"{self.count} nodes of the {self.theta_rule}x{self.phi_points} grid "
            "returned NaN or infinity."
        )


class DegenerateAdjustedDipoleError(AnisoEmitError):
    title: str = "Degenerate adjusted dipole error"

    def __init__(self, *, norm: float):
        super().__init__()
        self.norm = norm

    @property
    def description(self) -> str:
        return f"""Adjusted dipole norm is {self.norm:.3e}, the emitter is fully suppressed.

    * Check the local-field entries along the dipole components"""


class PeakVerificationError(AnisoEmitError):
    title: str = "Peak verification error"

    def __init__(self, *, predicted: float, found: float):
        super().__init__()
        self.predicted = predicted
        self.found = found

    @property
    def description(self) -> str:
        return f"Closed-form peak {self.predicted!r} rad but numeric argmax is {self.found!r} rad."


class ModelConsistencyError(AnisoEmitError):
    title: str = "Model consistency error"

    def __init__(self, *, mean_form: float, index_form: float):
        super().__init__()
        self.mean_form = mean_form
        self.index_form = index_form

    @property
    def description(self) -> str:
        return f"Mean form {self.mean_form!r} and index form {self.index_form!r} disagree."
