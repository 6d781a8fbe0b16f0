# coding: utf-8

"""Run configuration of the command-line surface.

A ``RunConfig`` is built from an optional JSON or YAML file, overlaid by explicit flags. The
quadrature tolerance falls back to the ``ANISO_EMIT_TOL`` environment variable, then to the
library default.
"""

import logging
import math
import os
import re
from dataclasses import dataclass
from typing import Any, Dict, Optional

from anisoemit import serialization
from anisoemit.enums import Command, Method, OutputFormat, SweepAxis
from anisoemit.errors import InvalidValueError
from anisoemit.localfield import LocalFieldTensor
from anisoemit.media import Direction, MaterialFrame, PermittivityTensor, to_crystal_frame
from anisoemit.quadrature import QuadratureSpec
from anisoemit.records import Record, ValueTransformer
from anisoemit.uniaxial import PhysicalContext

logger = logging.getLogger(__name__)

TOL_ENV = "ANISO_EMIT_TOL"

_ANGLE = re.compile(r"^\s*([-+0-9.eE]+)\s*(deg)?\s*$")


def parse_angle(value: Any) -> float:
    """Radians, or degrees with an explicit ``deg`` suffix

    Usage:

        >>> parse_angle("0.5")
        0.5
        >>> parse_angle("180deg") == math.pi
        True
    """
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    matched = _ANGLE.match(str(value))
    if not matched:
        raise ValueError(f"{value!r} is not an angle (radians, or degrees with a deg suffix)")
    number = float(matched.group(1))
    return math.radians(number) if matched.group(2) else number


def _split_range(value: Any, parts: int):
    if isinstance(value, str):
        items = value.split(":")
    elif isinstance(value, dict):
        items = [value.get(k) for k in ("start", "stop", "count")[:parts]]
    else:
        items = list(value)
    if len(items) != parts:
        raise ValueError(f"{value!r} needs {parts} ':'-separated parts")
    return items


@dataclass(frozen=True)
class SweepRange(ValueTransformer):
    """``start:stop:count`` of a permittivity sweep

    Usage:

        >>> SweepRange.from_value("1.5:5:100")
        SweepRange(start=1.5, stop=5.0, count=100)
    """

    start: float
    stop: float
    count: int

    def __post_init__(self):
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "stop", float(self.stop))
        if not float(self.count).is_integer() or int(self.count) < 2:
            raise InvalidValueError(
                owner="SweepRange", prop="count", value=self.count, reason="must be an integer >= 2"
            )
        object.__setattr__(self, "count", int(self.count))
        for name in ("start", "stop"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidValueError(
                    owner="SweepRange", prop=name, value=v, reason="must be positive"
                )

    @classmethod
    def from_value(cls, value: Any) -> "SweepRange":
        if isinstance(value, cls):
            return value
        start, stop, count = _split_range(value, 3)
        return cls(float(start), float(stop), float(count))

    def to_value(self):
        return f"{self.start!r}:{self.stop!r}:{self.count}"


@dataclass(frozen=True)
class ThetaRange(ValueTransformer):
    """``start:stop`` polar angles of the angular distribution, each in radians or ``deg``

    Usage:

        >>> ThetaRange.from_value("0:90deg").stop == math.pi / 2
        True
    """

    start: float = 0.0
    stop: float = math.pi

    def __post_init__(self):
        if not (0.0 <= self.start < self.stop <= math.pi + 1e-12):
            raise InvalidValueError(
                owner="ThetaRange",
                prop="start,stop",
                value=(self.start, self.stop),
                reason="must satisfy 0 <= start < stop <= pi",
            )

    @classmethod
    def from_value(cls, value: Any) -> "ThetaRange":
        if isinstance(value, cls):
            return value
        start, stop = _split_range(value, 2)
        return cls(parse_angle(start), parse_angle(stop))

    def to_value(self):
        return f"{self.start!r}:{self.stop!r}"


class RunConfig(Record):
    """Everything one CLI invocation needs

    ``eps`` is required by every command except ``validate``; ``sweep`` also needs
    ``sweep_axis`` and ``sweep_range``; ``si`` needs ``omega`` and ``dipole_si``.
    """

    command: Command
    eps: Optional[PermittivityTensor]
    dipole: Direction = Direction(0.0, 0.0, 1.0)
    frame: Optional[MaterialFrame]
    method: Method = Method.AUTO
    quadrature: QuadratureSpec = QuadratureSpec()
    sweep_axis: Optional[SweepAxis]
    sweep_range: Optional[SweepRange]
    samples: int = 181
    theta_range: ThetaRange = ThetaRange()
    local_field: Optional[LocalFieldTensor]
    output: OutputFormat = OutputFormat.CSV
    output_path: Optional[str]
    seed: int = 0
    quick: bool = False
    si: bool = False
    omega: Optional[float]
    dipole_si: Optional[float]

    def _validate(self) -> None:
        def fail(prop: str, reason: str):
            raise InvalidValueError(
                owner="RunConfig", prop=prop, value=getattr(self, prop), reason=reason
            )

        if self.command is not Command.VALIDATE and self.eps is None:
            fail("eps", f"is required by `{self.command.value}`")
        if self.command is Command.SWEEP:
            if self.sweep_axis is None:
                fail("sweep_axis", "is required by `sweep`")
            if self.sweep_range is None:
                fail("sweep_range", "is required by `sweep`")
        if self.samples < 2:
            fail("samples", "must be at least 2")
        if self.si and (self.omega is None or self.dipole_si is None):
            fail("si", "needs both `omega` and `dipole_si`")

    @property
    def crystal_dipole(self) -> Direction:
        """Dipole in crystal axes, rotated through ``frame`` when one is given"""
        if self.frame is None:
            return self.dipole
        return to_crystal_frame(self.frame, self.dipole)

    @property
    def physical_context(self) -> Optional[PhysicalContext]:
        if not self.si:
            return None
        return PhysicalContext(self.omega, self.dipole_si)


def _env_tol() -> Optional[float]:
    raw = os.environ.get(TOL_ENV)
    if raw is None or not raw.strip():
        return None
    try:
        return float(raw)
    except ValueError as e:
        raise InvalidValueError(owner="environment", prop=TOL_ENV, value=raw, reason=str(e)) from e


def _merge_eps(file_eps: Any, flags: Dict[str, Any]) -> Any:
    """Apply ``--eps`` then the single-component flags over the file value"""
    base = flags.pop("eps", None) or file_eps
    components = {k: flags.pop(k) for k in ("eps_x", "eps_y", "eps_z") if k in flags}
    if not components:
        return base
    values = PermittivityTensor.from_value(base).to_value() if base is not None else [None] * 3
    for k, v in components.items():
        values[SweepAxis.from_value(k).index] = v
    return values


def load_run_config(
    command: Command, flags: Dict[str, Any], config_path: Optional[str] = None
) -> RunConfig:
    """Merge the config file, the explicit flags and the environment into a ``RunConfig``

    :param command: Subcommand being run
    :param flags: Flag values; ``None`` means not given
    :param config_path: JSON or YAML file, optional
    :return: Validated configuration
    :raises InvalidInputError: Any value is invalid

    Usage:

        >>> cfg = load_run_config(Command.RATE, {"eps": "1.5,3,5", "tol": 1e-9})
        >>> cfg.eps.to_value(), cfg.quadrature.target_rel_tol
        ([1.5, 3.0, 5.0], 1e-09)
    """
    d: Dict[str, Any] = {}
    if config_path:
        d = serialization.replace_keys(serialization.load_configf(config_path), True)
        logger.debug("Loaded %s with keys %s", config_path, sorted(d))

    flags = {k: v for k, v in serialization.replace_keys(flags, True).items() if v is not None}
    file_quadrature = serialization.replace_keys(d.pop("quadrature", None) or {}, True)
    tol = flags.pop("tol", None)
    for fallback in (d.pop("tol", None), file_quadrature.get("target_rel_tol")):
        if tol is None:
            tol = fallback
    if tol is None:
        tol = _env_tol()
    d["eps"] = _merge_eps(d.get("eps"), flags)
    d.update(flags)
    d["command"] = command.value
    if command is Command.VALIDATE:
        d.setdefault("output", OutputFormat.JSON.value)

    quadrature = QuadratureSpec.from_value(file_quadrature)
    d["quadrature"] = quadrature if tol is None else quadrature.with_tol(float(tol))

    # a swept component missing everywhere starts at the range start
    if d.get("sweep_range") is not None and d.get("sweep_axis") is not None:
        try:
            start = SweepRange.from_value(d["sweep_range"]).start
            index = SweepAxis.from_value(d["sweep_axis"]).index
        except (TypeError, ValueError):
            start, index = None, None
        values = d["eps"] if isinstance(d["eps"], list) else None
        if values is not None and index is not None and values[index] is None:
            values[index] = start

    cfg = RunConfig.from_dict({k: v for k, v in d.items() if v is not None})
    logger.debug("Run config: %s", cfg.to_json())
    return cfg

