# coding: utf-8
import typing
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, TypeVar, Union

from anisoemit import serialization
from anisoemit.errors import (
    InvalidInputError,
    InvalidTypeError,
    RequiredError,
    UnknownPropertiesError,
)

T = TypeVar("T", bound="Record")

_NONE_TYPE = type(None)


class ValueTransformer:
    """Protocol of types which are stored as a plain value (str, number, list, dict).

    Subclasses implement ``from_value`` (classmethod) and ``to_value``.
    """

    @classmethod
    def from_value(cls, value: Any):
        raise NotImplementedError

    def to_value(self) -> Any:
        return str(self)


def assert_extra(cls_properties, arg_dict, cls):
    extra_keys: set = set(arg_dict.keys()) - {n for n, _ in cls_properties}
    if extra_keys:
        raise UnknownPropertiesError(cls=cls, props=sorted(extra_keys))


def assert_none(value, type_, cls, name):
    if value is None:
        raise RequiredError(cls=cls, prop=name, type_=type_)


def assert_types(value, types: tuple, cls, name):
    if not isinstance(value, types):
        raise InvalidTypeError(cls=cls, prop=name, value=value, expected=types, actual=type(value))


def traverse(type_, name: str, value: Any, cls, restrict: bool) -> Any:
    # pylint: disable=too-many-return-statements,too-many-branches
    origin = typing.get_origin(type_)
    args = typing.get_args(type_)

    if origin is None:
        assert_none(value, type_, cls, name)
        if type_ is Any:
            return value
        if isinstance(value, type_) and not (type_ is int and isinstance(value, bool)):
            return value
        if issubclass(type_, Record):
            assert_types(value, (type_, dict), cls, name)
            return type_.from_dict(value, restrict=restrict)
        if issubclass(type_, ValueTransformer):
            try:
                return type_.from_value(value)
            except InvalidInputError:
                raise
            except (TypeError, ValueError, KeyError) as e:
                raise InvalidTypeError(
                    cls=cls, prop=name, value=value, expected=(type_,), actual=type(value), reason=e
                ) from e
        if type_ is float and isinstance(value, int) and not isinstance(value, bool):
            return float(value)

        assert_types(value, (type_,), cls, name)
        return value

    if origin is Union:
        inner = [a for a in args if a is not _NONE_TYPE]
        if value is None and len(inner) < len(args):
            return None
        if len(inner) != 1:
            raise RuntimeError(f"This union is not supported `{type_}`")
        return traverse(inner[0], name, value, cls, restrict)
    if origin in (list, List, Sequence):
        assert_none(value, type_, cls, name)
        assert_types(value, (list, tuple), cls, name)
        return [traverse(args[0], f"{name}.{i}", v, cls, restrict) for i, v in enumerate(value)]
    if origin in (dict, Dict):
        assert_none(value, type_, cls, name)
        assert_types(value, (dict,), cls, name)
        return {k: traverse(args[1], f"{name}.{k}", v, cls, restrict) for k, v in value.items()}

    raise RuntimeError(f"This generics is not supported `{origin}`")


def to_plain(value: Any, ignore_none: bool = True) -> Any:
    # pylint: disable=too-many-return-statements
    if isinstance(value, Record):
        return value.to_dict(ignore_none=ignore_none)
    if isinstance(value, ValueTransformer):
        return value.to_value()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {
            k: to_plain(v, ignore_none)
            for k, v in value.items()
            if not (ignore_none and v is None)
        }
    if isinstance(value, (list, tuple)):
        return [to_plain(v, ignore_none) for v in value if not (ignore_none and v is None)]
    if isinstance(value, float):
        return float(value)
    if isinstance(value, int) and not isinstance(value, bool):
        return int(value)
    return value


class Record:
    """Annotated attributes define the schema; values are converted on construction.

    Usage:

        >>> from anisoemit.quadrature import QuadratureResult
        >>> d = {"value": 2.0, "estRelError": 0.0, "finalOrder": [128, 256]}
        >>> r = QuadratureResult.from_dict(d)
        >>> r.final_order
        [128, 256]
        >>> r.to_json()
        '{"error_history": [],"est_rel_error": 0.0,"final_order": [128,256],"value": 2.0}'
    """

    def __init__(self, **fields):
        self._assign(fields, restrict=True)

    @classmethod
    def properties(cls) -> Dict[str, Any]:
        return typing.get_type_hints(cls)

    def _assign(self, d: dict, restrict: bool) -> None:
        cls = type(self)
        properties = cls.properties().items()
        if restrict:
            assert_extra(properties, d, cls)

        for n, t in properties:
            arg_v = d.get(n)
            def_v = getattr(cls, n, None)
            if isinstance(def_v, list):
                def_v = list(def_v)
            setattr(
                self,
                n,
                traverse(
                    type_=t,
                    name=n,
                    value=def_v if arg_v is None else arg_v,
                    cls=cls,
                    restrict=restrict,
                ),
            )
        self._validate()

    def _validate(self) -> None:
        """Override to check invariants spanning several properties"""

    @classmethod
    def from_dict(cls, d: dict, *, force_snake_case: bool = True, restrict: bool = True) -> T:
        """From dict to instance

        :param d: Dict
        :param force_snake_case: Keys are transformed to snake case if True
        :param restrict: Prohibit extra parameters if True
        :return: Instance
        """
        if isinstance(d, cls):
            return d  # type: ignore
        instance = cls.__new__(cls)
        instance._assign(serialization.replace_keys(d, force_snake_case), restrict)
        return instance  # type: ignore

    def to_dict(self, *, ignore_none: bool = True) -> dict:
        d = {}
        for n in type(self).properties():
            v = getattr(self, n, None)
            if ignore_none and v is None:
                continue
            d[n] = to_plain(v, ignore_none)
        return d

    def to_json(self, *, indent: Optional[int] = None, ignore_none: bool = True) -> str:
        return serialization.dump_json(self.to_dict(ignore_none=ignore_none), indent)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_json()})"

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.to_dict(ignore_none=False) == other.to_dict(
            ignore_none=False
        )


class RecordList(list):
    """List of records (or plain dicts) which dumps as CSV

    Usage:

        >>> rows = RecordList(
        ...     [{"theta_rad": 0.0, "f_theta": 0.0}, {"theta_rad": 1.5, "f_theta": 1.0}]
        ... )
        >>> print(rows.to_csv(["theta_rad", "f_theta"]), end="")
        theta_rad,f_theta
        0,0
        1.5,1
    """

    def to_dicts(self, *, ignore_none: bool = True) -> List[dict]:
        return [to_plain(x, ignore_none) for x in self]

    def to_csv(self, fieldnames: Sequence[str], *, with_header: bool = True) -> str:
        return serialization.dump_csv(
            self.to_dicts(ignore_none=False), fieldnames, with_header=with_header
        )
