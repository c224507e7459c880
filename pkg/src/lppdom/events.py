"""The conditioning events: a on both low-optimal paths to a+(1,0) and a+(0,1);
the path to (m, 1) running along the x-axis and then up."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import _kernels as K
from .errors import ConfigurationError, DomainError
from .lpp import PassageTimeGrid, passage_times
from .weights import WeightField


@dataclass(frozen=True)
class EventSpec:
    kind: str
    a: tuple = (0, 0)
    m: int = 1

    def __post_init__(self):
        if self.kind not in ("omega_upper", "omega_lower"):
            raise ConfigurationError(f"unknown event kind {self.kind!r}")
        if self.kind == "omega_lower" and self.m < 1:
            raise ConfigurationError("omega_lower needs m >= 1")
        if self.kind == "omega_upper" and min(self.a) < 0:
            raise ConfigurationError("omega_upper needs a site in Z_+^2")

    @classmethod
    def upper(cls, a: Sequence[int]) -> "EventSpec":
        return cls("omega_upper", a=tuple(int(v) for v in a))

    @classmethod
    def lower(cls, m: int) -> "EventSpec":
        return cls("omega_lower", m=int(m))


def in_omega_upper(field: WeightField, a: Sequence[int], grid: Optional[PassageTimeGrid] = None) -> bool:
    ax, ay = a
    if not (field.window.contains((ax + 1, ay)) and field.window.contains((ax, ay + 1))):
        raise DomainError(f"a+(1,0) and a+(0,1) must lie in window {field.window}")
    p = (grid or passage_times(field)).parent
    return bool(K.on_path(p, ax + 1, ay, ax, ay) and K.on_path(p, ax, ay + 1, ax, ay))


def in_omega_lower(field: WeightField, m: int, grid: Optional[PassageTimeGrid] = None) -> bool:
    """Whether the low-optimal path to (m, 1) is (0,0),(1,0),...,(m,0),(m,1).

    That path is the axis path exactly when (m, 0) precedes (m, 1), so under the
    prefer-below tie rule omega_lower(1) reads w(1,0) >= w(0,1).
    """
    if m < 1:
        raise ConfigurationError("m must be >= 1")
    if not field.window.contains((m, 1)):
        raise DomainError(f"(m,1) = {(m, 1)} outside window {field.window}")
    p = (grid or passage_times(field)).parent
    return bool(p[m, 1] == K.BELOW)


def event_membership(field: WeightField, ev: EventSpec, grid: Optional[PassageTimeGrid] = None) -> bool:
    if ev.kind == "omega_upper":
        return in_omega_upper(field, ev.a, grid)
    return in_omega_lower(field, ev.m, grid)
