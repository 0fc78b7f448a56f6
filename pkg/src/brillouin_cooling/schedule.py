"""Piecewise-constant coupling schedules."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field


class ScheduleError(ValueError):
    pass


class Event(enum.Enum):
    SWITCH_ON = "on"
    SWITCH_OFF = "off"
    VACUUM_RESET = "reset"


class Mode(enum.Enum):
    CONSTANT_ON = "constant_on"
    ANALYTIC_PERIODIC = "analytic_periodic"
    MINIMUM_DETECT = "minimum_detect"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Segment:
    """A stretch of constant coupling.

    ``stop_at_minimum`` makes the integrator end the segment early at the
    first minimum of the phonon number; ``duration`` is then an upper bound.
    """

    duration: float
    g: float
    reset_at_start: bool = False
    stop_at_minimum: bool = False

    def __post_init__(self):
        if not self.duration > 0:
            raise ScheduleError(f"segment duration must be positive, got {self.duration}")
        if self.g < 0:
            raise ScheduleError(f"segment coupling must be non-negative, got {self.g}")


@dataclass(frozen=True)
class PulseSchedule:
    segments: tuple[Segment, ...]
    mode: Mode = Mode.CUSTOM
    settings: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.segments:
            raise ScheduleError("schedule has no segments")
        object.__setattr__(self, "segments", tuple(self.segments))

    @property
    def span(self) -> float:
        return float(sum(s.duration for s in self.segments))

    def boundaries(self) -> list[float]:
        """Nominal segment start times followed by the end of the span."""
        out = [0.0]
        for s in self.segments:
            out.append(out[-1] + s.duration)
        return out

    def g_at(self, t: float) -> float:
        """Nominal coupling at ``t`` (right-continuous)."""
        edges = self.boundaries()
        for seg, t1 in zip(self.segments, edges[1:]):
            if t < t1:
                return seg.g
        return self.segments[-1].g

    @classmethod
    def constant(cls, g: float, span: float) -> "PulseSchedule":
        return cls((Segment(span, g),), Mode.CONSTANT_ON, {"g": g})
