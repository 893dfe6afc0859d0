"""Sequence-level driver: segmentation with a shared Q-table plus threat tracking."""
from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator

from .agent import AgentConfig, FrameSegmentation, QTable, segment_frame
from .frame_io import FrameBuffer, FrameReport
from .granulation import DEFAULT_THR
from .threat import AlarmPolicy, ThreatTracker, alarm


def segment_sequence(frames: Iterable[FrameBuffer], cfg: AgentConfig | None = None,
                     qt: QTable | None = None, thr: int = DEFAULT_THR,
                     ) -> Iterator[tuple[FrameBuffer, FrameSegmentation]]:
    """Segment frames in order, carrying one Q-table across the whole sequence."""
    cfg = cfg or AgentConfig()
    qt = qt if qt is not None else QTable(cfg.quant_levels)
    for f in frames:
        seg = segment_frame(f, cfg, qt, thr)
        qt = seg.qtable
        yield f, seg


def track_threat(frames: Iterable[FrameBuffer], p: int, policy: AlarmPolicy,
                 cfg: AgentConfig | None = None, qt: QTable | None = None,
                 thr: int = DEFAULT_THR,
                 ) -> Iterator[tuple[FrameBuffer, FrameSegmentation, FrameReport]]:
    """Segment each frame and score the fire-area history after it."""
    cfg = cfg or AgentConfig()
    qt = qt if qt is not None else QTable(cfg.quant_levels)
    tracker = ThreatTracker(p)
    recent = deque(maxlen=policy.k)
    for f in frames:
        seg = segment_frame(f, cfg, qt, thr)
        qt = seg.qtable
        reading = tracker.update(seg.fire_area)
        recent.append(reading.threat)
        yield f, seg, FrameReport(f.index, seg.fire_area, reading.f_mu, reading.f_mu_p,
                               reading.threat, alarm(policy, recent))
