"""RGB -> YCrCb conversion and the two rule-based candidate fire masks.

All thresholds are on the 0-255 scale of full-range BT.601 YCrCb.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frame_io import FrameBuffer

# full-range BT.601
KY_R, KY_G, KY_B = 0.299, 0.587, 0.114
K_CR = 0.713
K_CB = 0.564
CHROMA_OFFSET = 128.0


def _round_clamp(x: np.ndarray) -> np.ndarray:
    # half-up rounding, not numpy's round-half-even
    return np.clip(np.floor(x + 0.5), 0, 255).astype(np.int16)


def ycrcb_array(rgb: np.ndarray) -> np.ndarray:
    """Convert an ``(..., 3)`` RGB array to integer ``(..., 3)`` (Y, Cr, Cb)."""
    rgb = np.asarray(rgb, dtype=np.float64)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    y = KY_R * r + KY_G * g + KY_B * b
    cr = K_CR * (r - y) + CHROMA_OFFSET
    cb = K_CB * (b - y) + CHROMA_OFFSET
    return _round_clamp(np.stack([y, cr, cb], axis=-1))


@dataclass(frozen=True)
class YCrCbPixel:
    y: int
    cr: int
    cb: int


def rgb_to_ycrcb(p) -> YCrCbPixel:
    r, g, b = (int(c) for c in p)
    for c in (r, g, b):
        if not 0 <= c <= 255:
            raise ValueError(f"channel value {c} outside [0, 255]")
    y, cr, cb = ycrcb_array(np.array([r, g, b])).tolist()
    return YCrCbPixel(y, cr, cb)


@dataclass(frozen=True)
class FrameStats:
    """Whole-frame channel means used by the adaptive rules."""

    r_mean: float
    y_mean: float
    cr_mean: float
    cb_mean: float


def _rgb_of(f) -> np.ndarray:
    return f.pixels if isinstance(f, FrameBuffer) else np.asarray(f)


def frame_stats(f, ycc: np.ndarray | None = None) -> FrameStats:
    rgb = _rgb_of(f)
    if rgb.size == 0:
        raise ValueError("cannot compute statistics of an empty frame")
    if ycc is None:
        ycc = ycrcb_array(rgb)
    n = rgb.shape[0] * rgb.shape[1]
    # integer sums keep the means exact
    r_sum = int(rgb[..., 0].sum(dtype=np.int64))
    sums = ycc.reshape(-1, 3).sum(axis=0, dtype=np.int64)
    return FrameStats(r_sum / n, int(sums[0]) / n, int(sums[1]) / n, int(sums[2]) / n)


def ycrcb_rules(ycc: np.ndarray, s: FrameStats) -> np.ndarray:
    """Evaluate the YCrCb rule-base on precomputed (Y, Cr, Cb) values.

    A pixel is fire if ANY rule holds:

    1. ``Y >= Cb and Cr >= Cb``
    2. ``Y > Y_mean and Cr > Cr_mean and Cb > Cb_mean``
    3. ``Cb <= 120 and Cr > 150``
    """
    ycc = np.asarray(ycc)
    y, cr, cb = ycc[..., 0], ycc[..., 1], ycc[..., 2]
    rule1 = (y >= cb) & (cr >= cb)
    rule2 = (y > s.y_mean) & (cr > s.cr_mean) & (cb > s.cb_mean)
    rule3 = (cb <= 120) & (cr > 150)
    return rule1 | rule2 | rule3


def ycrcb_fire_mask(f, s: FrameStats, ycc: np.ndarray | None = None) -> np.ndarray:
    if ycc is None:
        ycc = ycrcb_array(_rgb_of(f))
    return ycrcb_rules(ycc, s)


def rgb_fire_mask(f, s: FrameStats) -> np.ndarray:
    """Pixels with ``R >= R_mean`` AND ``R > G > B``."""
    rgb = _rgb_of(f).astype(np.int16)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    return (r >= s.r_mean) & (r > g) & (g > b)
