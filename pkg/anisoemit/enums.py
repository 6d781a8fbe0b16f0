# coding: utf-8

from enum import Enum
from typing import TypeVar

from anisoemit.records import ValueTransformer

T = TypeVar("T", bound="ObjectEnum")  # pylint: disable=invalid-name


class ValueEnum(ValueTransformer, Enum):
    """Enum which can be loaded from, and dumped as, its plain value"""

    @classmethod
    def from_value(cls, value: str):
        return cls(value)

    def to_value(self):
        return self.value


class ObjectEnum(ValueTransformer, Enum):
    """Similar to ValueEnum except that each member carries an additional object.

    Use case example:
        class SweepAxis(ObjectEnum):
            EPS_X = ("eps_x", 0)

        @property
        def index(self):
            return self.object
    """

    def __init__(self, symbol, obj):
        self.symbol = symbol
        self.object = obj

    @classmethod
    def from_value(cls, value: str) -> T:
        """Create instance from symbol

        :param value: unique symbol
        :return: This instance

        Usage:

            >>> SweepAxis.from_value('eps_y').index
            1
        """
        matched = [x for x in cls.__members__.values() if x.value[0] == value]
        if not matched:
            raise ValueError(f"{value!r} is not a valid {cls.__name__}")
        return matched[0]  # type: ignore

    def to_value(self):
        return self.symbol


class MediumKind(ValueEnum):
    ISOTROPIC = "isotropic"
    UNIAXIAL = "uniaxial"
    BIAXIAL = "biaxial"


class BranchLabel(ValueEnum):
    ORDINARY = "ordinary"
    EXTRAORDINARY = "extraordinary"
    PLUS = "plus"
    MINUS = "minus"
    DEGENERATE_1 = "degenerate-1"
    DEGENERATE_2 = "degenerate-2"


class MethodTag(ValueEnum):
    CLOSED_FORM = "closed-form"
    QUADRATURE = "quadrature"
    INTERPOLATION_MODEL = "interpolation-model"


class Method(ValueEnum):
    AUTO = "auto"
    CLOSED = "closed"
    NUMERIC = "numeric"
    MODEL = "model"


class OutputFormat(ValueEnum):
    CSV = "csv"
    JSON = "json"


class Command(ValueEnum):
    RATE = "rate"
    ANGULAR = "angular"
    SWEEP = "sweep"
    GREENS = "greens"
    VALIDATE = "validate"


class SweepAxis(ObjectEnum):
    EPS_X = ("eps_x", 0)
    EPS_Y = ("eps_y", 1)
    EPS_Z = ("eps_z", 2)

    @property
    def index(self) -> int:
        return self.object
