"""Segmentation metrics and synthetic ground-truthed sequences."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .frame_io import FrameBuffer


class NoRegion(ValueError):
    pass


@dataclass(frozen=True)
class EvalMetrics:
    fp_pct: float
    fn_pct: float
    precision: float
    recall: float
    n_frames: int = 1


def pixel_metrics(pred, gt) -> EvalMetrics:
    """Pixelwise FP%/FN%/precision/recall.

    FP% is relative to all predicted pixels and FN% to all ground-truth
    pixels, so ``precision == 1 - fp_pct/100`` and ``recall == 1 - fn_pct/100``.
    An empty prediction has precision 1; an empty ground truth has recall 1.
    """
    pred = np.asarray(pred, dtype=bool)
    gt = np.asarray(gt, dtype=bool)
    if pred.shape != gt.shape:
        raise ValueError(f"mask shapes differ: {pred.shape} vs {gt.shape}")
    tp = int(np.count_nonzero(pred & gt))
    fp = int(np.count_nonzero(pred & ~gt))
    fn = int(np.count_nonzero(~pred & gt))
    fp_frac = fp / (tp + fp) if tp + fp else 0.0
    fn_frac = fn / (tp + fn) if tp + fn else 0.0
    return EvalMetrics(100.0 * fp_frac, 100.0 * fn_frac, 1.0 - fp_frac, 1.0 - fn_frac)


def aggregate_metrics(per_frame: Iterable[EvalMetrics]) -> EvalMetrics:
    per_frame = list(per_frame)
    if not per_frame:
        raise ValueError("no frames to aggregate")
    arr = np.array([[m.fp_pct, m.fn_pct, m.precision, m.recall] for m in per_frame])
    fp, fn, p, r = arr.mean(axis=0)
    return EvalMetrics(float(fp), float(fn), float(p), float(r), len(per_frame))


def bbox_of(mask) -> tuple[int, int, int, int] | None:
    """Tight ``(min_x, min_y, max_x, max_y)`` box of the set pixels."""
    ys, xs = np.nonzero(np.asarray(mask, dtype=bool))
    if len(xs) == 0:
        return None
    return int(xs.min()), int(ys.min()), int(xs.max()), int(ys.max())


def _corners(box):
    x0, y0, x1, y1 = box
    return np.array([[x0, y0], [x1, y0], [x0, y1], [x1, y1]], dtype=np.float64)


def corner_rmse(pred_box, gt_box) -> float:
    if pred_box is None or gt_box is None:
        raise NoRegion("no region")
    d = _corners(pred_box) - _corners(gt_box)
    return math.sqrt(float((d * d).sum()) / 4.0)


# -- synthetic sequences -----------------------------------------------------

SCENARIOS = ("flicker", "grow", "shrink", "flashover")
FIRE_COLOR = (255, 120, 30)
BG_COLOR = (20, 40, 200)


@dataclass(frozen=True)
class SynthScenario:
    kind: str
    frames: int = 120
    base_area: int = 3000
    rate: float = 1.01
    width: int = 320
    height: int = 240
    fire_color: tuple = FIRE_COLOR
    bg_color: tuple = BG_COLOR
    seed: int = 0

    def __post_init__(self):
        if self.kind not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.kind!r}; choose from {SCENARIOS}")
        if self.frames < 1 or self.base_area < 1 or self.rate <= 0:
            raise ValueError("frames, base_area and rate must be positive")

    def target_area(self, t: int, phase: int = 0) -> float:
        a = float(self.base_area)
        if self.kind == "flicker":
            return a * (1.1 if (t + phase) % 2 == 0 else 0.9)
        if self.kind == "grow":
            return a * self.rate**t
        if self.kind == "shrink":
            return a * self.rate ** (-t)
        return a if t < self.frames // 2 else 4 * a


def rect_dims(area: float, width: int, height: int) -> tuple[int, int]:
    """Rectangle ``(w, h)`` of roughly ``area`` pixels with the frame's aspect ratio."""
    h = max(1, int(round(math.sqrt(area * height / width))))
    w = max(1, int(round(area / h)))
    if w > width or h > height:
        warnings.warn(f"fire area {area:.0f} exceeds the {width}x{height} frame; clamped",
                      stacklevel=3)
        w, h = min(w, width), min(h, height)
    return w, h


def synth_sequence(s: SynthScenario) -> tuple[list[FrameBuffer], list[np.ndarray]]:
    """Centered fire-coloured rectangle on a flat background, with exact truth."""
    phase = int(np.random.default_rng(s.seed).integers(2)) if s.kind == "flicker" else 0
    frames, gts = [], []
    for t in range(s.frames):
        w, h = rect_dims(s.target_area(t, phase), s.width, s.height)
        x0 = (s.width - w) // 2
        y0 = (s.height - h) // 2
        gt = np.zeros((s.height, s.width), dtype=bool)
        gt[y0:y0 + h, x0:x0 + w] = True
        px = np.empty((s.height, s.width, 3), dtype=np.uint8)
        px[...] = s.bg_color
        px[gt] = s.fire_color
        frames.append(FrameBuffer(px, t))
        gts.append(gt)
    return frames, gts
