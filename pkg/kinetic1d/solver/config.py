"""
Configuration settings for time integration and the adaptive domain.

These are the dials of a run: how big a step we take, how far we go, when we
look at the density, and how eagerly the window grows.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import ClassVar

from ..errors import ParameterError

logger = logging.getLogger(__name__)

DEFAULT_DT = 0.1
DEFAULT_EPSILON = 1e-12
DEFAULT_MAX_KNOTS = 2**18


class CompanionMode(str, Enum):
    """How the homogeneous companion density is advanced."""

    RK_TRACKED = "rk_tracked"
    ANALYTIC = "analytic"


@dataclass(frozen=True)
class IntegrationConfig:
    """
    Time grid of a run.

    Think of it as the metronome: every step has the same length, and at each
    snapshot time we stop for a moment to take a picture of the density. ⏱️
    """

    dt: float = DEFAULT_DT  # Fixed time step
    t_end: float = 0.0  # Horizon T, rounded to a whole number of steps
    snapshot_times: tuple[float, ...] = field(default_factory=tuple)  # Ascending, within [0, T]

    def __post_init__(self):
        object.__setattr__(self, "snapshot_times", tuple(float(t) for t in self.snapshot_times))
        if not math.isfinite(self.dt) or self.dt <= 0:
            raise ParameterError(f"Time step dt must be > 0, got {self.dt}")
        if not math.isfinite(self.t_end) or self.t_end < 0:
            raise ParameterError(f"Horizon t_end must be >= 0, got {self.t_end}")
        previous = -math.inf
        for t in self.snapshot_times:
            if not 0 <= t <= self.t_end * (1 + 1e-12):
                raise ParameterError(f"Snapshot time {t} lies outside [0, {self.t_end}]")
            if t <= previous:
                raise ParameterError("Snapshot times must be strictly ascending")
            previous = t

    @property
    def steps(self) -> int:
        """P, the number of steps to reach t_end."""
        return _to_step(self.t_end, self.dt, "End time")

    def snapshot_steps(self) -> list[int]:
        """Step indices of the snapshots, snapped to step boundaries."""
        indices: list[int] = []
        for t in self.snapshot_times:
            p = min(_to_step(t, self.dt, "Snapshot time"), self.steps)
            if not indices or p != indices[-1]:
                indices.append(p)
        return indices


def _to_step(t: float, dt: float, what: str) -> int:
    p = round(t / dt)
    if abs(p * dt - t) > 1e-9 * max(1.0, abs(t)):
        logger.info("%s %g is not a multiple of dt=%g; using t=%g", what, t, dt, p * dt)
    return int(p)


@dataclass(frozen=True)
class AdaptiveConfig:
    """
    Settings of the automatically growing window.

    The window starts small and keeps an eye on its own edges. As soon as the
    density out there stops being negligible, it doubles and carries on, so a
    front can travel as far as it likes without a huge grid from the start. 🔭
    """

    GROWTH_FACTOR: ClassVar[int] = 2

    enabled: bool = False  # Grow when density reaches the sentinel knots
    epsilon: float = DEFAULT_EPSILON  # Tolerable level relative to max n, 0 < epsilon << 1
    max_knots: int = DEFAULT_MAX_KNOTS  # Hard cap on N after growth
    companion: CompanionMode = CompanionMode.RK_TRACKED  # How the flat reference density moves

    def __post_init__(self):
        object.__setattr__(self, "companion", CompanionMode(self.companion))
        if not (0 < self.epsilon < 1):
            raise ParameterError(f"Tolerable level epsilon must be in (0, 1), got {self.epsilon}")
        if int(self.max_knots) != self.max_knots or self.max_knots < 4:
            raise ParameterError(f"max_knots must be an integer >= 4, got {self.max_knots}")
        object.__setattr__(self, "max_knots", int(self.max_knots))
