"""Spatio-color granulation of a frame.

A granule is grown from a seed pixel over 4-connected, not-yet-assigned
pixels whose RGB colour stays within ``thr`` of the *seed* colour
(max-channel absolute difference, strict). Seeds are taken in raster order,
so the partition is a deterministic function of ``(frame, thr)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numba
import numpy as np

from .colorspace import ycrcb_array
from .frame_io import FrameBuffer

DEFAULT_THR = 30


@numba.njit(cache=True)
def _flood_labels(rgb, thr):
    h, w = rgb.shape[0], rgb.shape[1]
    n_px = h * w
    labels = np.full(n_px, -1, dtype=np.int32)
    seeds = np.empty(n_px, dtype=np.int64)
    sizes = np.zeros(n_px, dtype=np.int64)
    bboxes = np.empty((n_px, 4), dtype=np.int64)
    stack = np.empty(n_px, dtype=np.int64)
    n = 0
    for start in range(n_px):
        if labels[start] >= 0:
            continue
        sy, sx = start // w, start % w
        r0, g0, b0 = rgb[sy, sx, 0], rgb[sy, sx, 1], rgb[sy, sx, 2]
        labels[start] = n
        seeds[n] = start
        x0, y0, x1, y1 = sx, sy, sx, sy
        stack[0] = start
        top = 1
        while top > 0:
            top -= 1
            p = stack[top]
            y, x = p // w, p % w
            sizes[n] += 1
            x0, x1 = min(x0, x), max(x1, x)
            y0, y1 = min(y0, y), max(y1, y)
            for k in range(4):
                if k == 0:
                    ny, nx = y - 1, x
                elif k == 1:
                    ny, nx = y + 1, x
                elif k == 2:
                    ny, nx = y, x - 1
                else:
                    ny, nx = y, x + 1
                if ny < 0 or ny >= h or nx < 0 or nx >= w:
                    continue
                q = ny * w + nx
                if labels[q] >= 0:
                    continue
                d = max(abs(rgb[ny, nx, 0] - r0), abs(rgb[ny, nx, 1] - g0), abs(rgb[ny, nx, 2] - b0))
                if d < thr:
                    labels[q] = n
                    stack[top] = q
                    top += 1
        bboxes[n, 0], bboxes[n, 1], bboxes[n, 2], bboxes[n, 3] = x0, y0, x1, y1
        n += 1
    return labels, seeds[:n], sizes[:n], bboxes[:n]


@dataclass
class Granule:
    id: int
    pixel_indices: np.ndarray
    seed_index: int
    mean_feature: np.ndarray
    bbox: tuple[int, int, int, int]

    @property
    def size(self) -> int:
        return len(self.pixel_indices)


@dataclass
class GranulatedFrame:
    """Partition of a frame into granules, stored column-wise.

    ``labels[y, x]`` is the granule id of a pixel; ``features[i]`` is the
    mean (R, G, B, Y, Cr, Cb) of granule ``i`` scaled to [0, 1].
    ``edges`` holds each undirected adjacency once as ``(a, b)`` with a < b.
    """

    labels: np.ndarray
    seeds: np.ndarray
    sizes: np.ndarray
    features: np.ndarray
    bboxes: np.ndarray
    edges: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.edges is None:
            self.edges = build_adjacency(self)

    @property
    def n_granules(self) -> int:
        return len(self.sizes)

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def pixel_to_granule(self) -> np.ndarray:
        return self.labels.ravel()

    @cached_property
    def _members(self) -> np.ndarray:
        return np.argsort(self.labels.ravel(), kind="stable")

    @cached_property
    def _offsets(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum(self.sizes)])

    def pixel_indices(self, gid: int) -> np.ndarray:
        return self._members[self._offsets[gid]:self._offsets[gid + 1]]

    def granule(self, gid: int) -> Granule:
        return Granule(
            id=gid,
            pixel_indices=self.pixel_indices(gid),
            seed_index=int(self.seeds[gid]),
            mean_feature=self.features[gid],
            bbox=tuple(int(v) for v in self.bboxes[gid]),
        )

    @cached_property
    def granules(self) -> list[Granule]:
        return [self.granule(i) for i in range(self.n_granules)]

    @cached_property
    def _csr(self):
        e = self.edges
        both = np.concatenate([e, e[:, ::-1]]) if len(e) else e.reshape(0, 2)
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        indptr = np.searchsorted(both[:, 0], np.arange(self.n_granules + 1))
        return indptr, both[:, 1]

    def neighbors(self, gid: int) -> np.ndarray:
        """Adjacent granule ids, ascending."""
        indptr, idx = self._csr
        return idx[indptr[gid]:indptr[gid + 1]]

    def adjacency(self) -> dict[int, set[int]]:
        return {g: set(self.neighbors(g).tolist()) for g in range(self.n_granules)}


def pixel_features(rgb: np.ndarray, ycc: np.ndarray | None = None) -> np.ndarray:
    """Per-pixel (R, G, B, Y, Cr, Cb) / 255 as an ``(n_pixels, 6)`` array."""
    if ycc is None:
        ycc = ycrcb_array(rgb)
    feats = np.concatenate([rgb.reshape(-1, 3), ycc.reshape(-1, 3)], axis=1)
    return feats.astype(np.float64) / 255.0


def granulate(f, thr: int = DEFAULT_THR, ycc: np.ndarray | None = None) -> GranulatedFrame:
    if thr < 1:
        raise ValueError(f"thr must be >= 1, got {thr}")
    rgb = f.pixels if isinstance(f, FrameBuffer) else np.asarray(f, dtype=np.uint8)
    h, w = rgb.shape[:2]
    flat, seeds, sizes, bboxes = _flood_labels(rgb.astype(np.int32), int(thr))
    n = len(seeds)
    feats = pixel_features(rgb, ycc)
    features = np.empty((n, 6))
    for c in range(6):
        features[:, c] = np.bincount(flat, weights=feats[:, c], minlength=n)
    features /= sizes[:, None]
    np.clip(features, 0.0, 1.0, out=features)
    return GranulatedFrame(flat.reshape(h, w), seeds, sizes, features, bboxes)


def build_adjacency(gf: GranulatedFrame) -> np.ndarray:
    """Unique undirected granule edges from 4-adjacent pixel pairs."""
    lab = gf.labels
    pairs = [
        np.stack([lab[:, :-1].ravel(), lab[:, 1:].ravel()], axis=1),
        np.stack([lab[:-1, :].ravel(), lab[1:, :].ravel()], axis=1),
    ]
    p = np.concatenate(pairs).astype(np.int64)
    p = p[p[:, 0] != p[:, 1]]
    if len(p) == 0:
        return np.empty((0, 2), dtype=np.int64)
    p.sort(axis=1)
    n = max(gf.n_granules, 1)
    code = np.unique(p[:, 0] * n + p[:, 1])
    return np.stack([code // n, code % n], axis=1)
