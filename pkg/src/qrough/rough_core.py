"""Lower/upper rough approximations of the fire region over granules."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .granulation import GranulatedFrame


@dataclass(frozen=True)
class RoughApproximation:
    lower: frozenset
    upper: frozenset
    boundary: frozenset

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise ValueError("lower approximation must be a subset of the upper one")
        if self.boundary != self.upper - self.lower:
            raise ValueError("boundary must equal upper minus lower")


def _hits(gf: GranulatedFrame, mask) -> np.ndarray:
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != gf.labels.shape:
        raise ValueError(f"mask shape {mask.shape} does not match frame {gf.labels.shape}")
    return np.bincount(gf.labels.ravel(), weights=mask.ravel(), minlength=gf.n_granules)


def lower_ids(gf: GranulatedFrame, mask) -> np.ndarray:
    return np.flatnonzero(_hits(gf, mask) == gf.sizes)


def upper_ids(gf: GranulatedFrame, mask) -> np.ndarray:
    return np.flatnonzero(_hits(gf, mask) > 0)


def lower_approximation(gf: GranulatedFrame, mask) -> frozenset:
    """Granules lying entirely inside ``mask``."""
    return frozenset(lower_ids(gf, mask).tolist())


def upper_approximation(gf: GranulatedFrame, mask) -> frozenset:
    """Granules touching ``mask`` in at least one pixel."""
    return frozenset(upper_ids(gf, mask).tolist())


def approximate_fire(gf: GranulatedFrame, mask_ycrcb, mask_rgb) -> RoughApproximation:
    """Lower from the YCrCb mask alone, upper from the union of both masks."""
    mask_ycrcb = np.asarray(mask_ycrcb, dtype=bool)
    lower = lower_approximation(gf, mask_ycrcb)
    upper = upper_approximation(gf, mask_ycrcb | np.asarray(mask_rgb, dtype=bool))
    # unreachable while the union contains the YCrCb mask; kept as a guarantee
    upper = upper | lower
    return RoughApproximation(lower, upper, upper - lower)


def granule_mask(gf: GranulatedFrame, ids) -> np.ndarray:
    """Pixel mask of the union of the given granules."""
    sel = np.zeros(gf.n_granules, dtype=bool)
    ids = list(ids)
    if ids:
        sel[np.fromiter(ids, dtype=np.int64)] = True
    return sel[gf.labels]
