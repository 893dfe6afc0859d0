"""
Rough approximation of a fire region
====================================

Build a small frame, look at the two rule masks, the granules, and the
lower / upper / boundary sets they induce.
"""

import numpy as np

from qrough import FrameBuffer, approximate_fire, frame_stats, granulate, rgb_fire_mask, ycrcb_fire_mask
from qrough.rough_core import granule_mask

rng = np.random.default_rng(0)

# blue background, a dull red halo, a fire-coloured core; mild noise
px = np.empty((40, 50, 3), int)
px[...] = (20, 40, 200)
px[6:34, 8:42] = (170, 90, 70)
px[10:30, 12:38] = (255, 120, 30)
px += rng.integers(-30, 31, px.shape)
frame = FrameBuffer(np.clip(px, 0, 255))

stats = frame_stats(frame)
print(stats)

# YCrCb rules seed the lower approximation, RGB rules widen the upper one
m_ycc = ycrcb_fire_mask(frame, stats)
m_rgb = rgb_fire_mask(frame, stats)
print("YCrCb fire pixels:", m_ycc.sum(), " RGB fire pixels:", m_rgb.sum())

gf = granulate(frame, thr=45)
print("granules:", gf.n_granules, " adjacency edges:", len(gf.edges))

ra = approximate_fire(gf, m_ycc, m_rgb)
print("lower:", len(ra.lower), " upper:", len(ra.upper), " boundary:", sorted(ra.boundary))

lower_px = granule_mask(gf, ra.lower)
upper_px = granule_mask(gf, ra.upper)
print("pixels certainly fire:", lower_px.sum(), " possibly fire:", upper_px.sum())

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(1, 4, figsize=(12, 3))
    ax[0].imshow(frame.pixels)
    ax[1].imshow(m_ycc, cmap="gray")
    ax[2].imshow(m_rgb, cmap="gray")
    ax[3].imshow(lower_px.astype(int) + upper_px, cmap="magma")
    for a, t in zip(ax, ["frame", "YCrCb rules", "RGB rules", "lower / upper"]):
        a.set_title(t)
        a.axis("off")
    fig.savefig("rough_approximation.png", dpi=80)
