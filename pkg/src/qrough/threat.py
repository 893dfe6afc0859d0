"""Fire threat index from per-frame fire areas.

``T_F = (F_muP - F_mu) / F_mu`` where ``F_mu`` is the mean fire area over all
frames seen so far and ``F_muP`` the mean over the most recent ``P`` frames.
Positive values mean the fire is spreading; a shrinking fire goes negative.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def choose_p(fps: float) -> int:
    """Recency window of one second of video, at least one frame."""
    if not fps > 0:
        raise ValueError(f"fps must be positive, got {fps}")
    return max(1, _round_half_up(fps))


@dataclass(frozen=True)
class ThreatReading:
    f_mu: float
    f_mu_p: float
    threat: float


@dataclass
class ThreatTracker:
    p: int
    areas: list = field(default_factory=list)
    running_sum: int = 0
    window_sum: int = 0

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("window length p must be >= 1")
        self._window = deque(self.areas[-self.p:])
        self.running_sum = sum(self.areas)
        self.window_sum = sum(self._window)

    @property
    def n(self) -> int:
        return len(self.areas)

    def update(self, area: int) -> ThreatReading:
        if area < 0:
            raise ValueError("fire area must be non-negative")
        area = int(area)
        self.areas.append(area)
        self.running_sum += area
        self._window.append(area)
        self.window_sum += area
        if len(self._window) > self.p:
            self.window_sum -= self._window.popleft()
        f_mu = self.running_sum / self.n
        f_mu_p = self.window_sum / len(self._window)
        threat = (f_mu_p - f_mu) / f_mu if f_mu > 0 else 0.0
        return ThreatReading(f_mu, f_mu_p, threat)


@dataclass(frozen=True)
class AlarmPolicy:
    tau: float = 0.2
    k: int = 15

    def __post_init__(self):
        if self.tau < 0:
            raise ValueError("tau must be >= 0")
        if self.k < 1:
            raise ValueError("k must be >= 1")

    @classmethod
    def for_fps(cls, fps: float, tau: float = 0.2) -> "AlarmPolicy":
        return cls(tau, max(1, _round_half_up(fps / 2)))


def alarm(policy: AlarmPolicy, threat_history: Sequence[float]) -> bool:
    """True iff the last ``k`` threat values all exceed ``tau``."""
    if len(threat_history) < policy.k:
        return False
    return all(t > policy.tau for t in list(threat_history)[-policy.k:])


def threat_series(areas, p: int) -> list[ThreatReading]:
    t = ThreatTracker(p)
    return [t.update(a) for a in areas]
