"""Q-rough refinement of the rough fire approximation.

The agent walks the boundary region (upper minus lower) outward from the
lower approximation. For every boundary granule it scores two actions,

* ``include``: add the granule to the lower set and move on to the next
  unvisited boundary granule adjacent to it;
* ``exclude``: leave the lower set untouched and move on to the next
  unvisited boundary granule adjacent to the lower set;

with ``Q(s, a) = R(s) + gamma * max_a' Q(s'_a, a')`` under the deterministic
two-successor transition model. The reward compares a granule's mean colour
feature with the running mean of the current lower set (the fire model).

Decisions are keyed by a quantized colour feature and stored in a
:class:`QTable`; a granule whose key is already known reuses the stored
action without any reward evaluation, which is what makes later frames of a
sequence cheap.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .colorspace import frame_stats, rgb_fire_mask, ycrcb_array, ycrcb_rules
from .frame_io import FrameBuffer
from .granulation import DEFAULT_THR, GranulatedFrame, Granule, granulate
from .rough_core import RoughApproximation, approximate_fire, granule_mask

INCLUDE = "include"
EXCLUDE = "exclude"
N_FEATURES = 6
QTABLE_FORMAT = "qrough-qtable"
QTABLE_VERSION = 1


class NoFireModel(ValueError):
    pass


@dataclass(frozen=True)
class AgentConfig:
    gamma: float = 0.9
    quant_levels: int = 16
    lookahead_depth: int = 1

    def __post_init__(self):
        if not 0 <= self.gamma < 1:
            raise ValueError(f"gamma must lie in [0, 1), got {self.gamma}")
        if self.quant_levels < 2:
            raise ValueError("quant_levels must be >= 2")
        if self.lookahead_depth < 1:
            raise ValueError("lookahead_depth must be >= 1")

    def q_bound(self) -> float:
        """Largest attainable |Q| given rewards in [-1, 1]."""
        return sum(self.gamma**k for k in range(self.lookahead_depth + 1))


def state_key(feature, quant_levels: int) -> tuple[int, ...]:
    q = np.floor(np.asarray(feature, dtype=np.float64) * quant_levels).astype(np.int64)
    return tuple(np.clip(q, 0, quant_levels - 1).tolist())


@dataclass
class QEntry:
    q_include: float
    q_exclude: float
    chosen: str
    visits: int = 1


class QTable:
    """Map from quantized granule features to action values and decisions."""

    def __init__(self, quant_levels: int | None = None):
        self.quant_levels = quant_levels
        self.entries: dict[tuple[int, ...], QEntry] = {}

    def __len__(self):
        return len(self.entries)

    def __contains__(self, key):
        return key in self.entries

    def get(self, key) -> QEntry | None:
        return self.entries.get(key)

    def record(self, key, q_include, q_exclude, chosen) -> QEntry:
        e = QEntry(float(q_include), float(q_exclude), chosen, 1)
        self.entries[key] = e
        return e

    def bind(self, cfg: AgentConfig):
        if self.quant_levels is None:
            self.quant_levels = cfg.quant_levels
        elif self.quant_levels != cfg.quant_levels:
            raise ValueError(
                f"Q-table was built with quant_levels={self.quant_levels}, "
                f"config has {cfg.quant_levels}"
            )

    def copy(self) -> "QTable":
        qt = QTable(self.quant_levels)
        qt.entries = {k: QEntry(e.q_include, e.q_exclude, e.chosen, e.visits) for k, e in self.entries.items()}
        return qt

    def to_dict(self) -> dict:
        return {
            "format": QTABLE_FORMAT,
            "version": QTABLE_VERSION,
            "quant_levels": self.quant_levels,
            "entries": [
                {"key": list(k), "q_include": e.q_include, "q_exclude": e.q_exclude,
                 "action": e.chosen, "visits": e.visits}
                for k, e in sorted(self.entries.items())
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "QTable":
        if d.get("format") != QTABLE_FORMAT:
            raise ValueError("not a Q-table file")
        if d.get("version") != QTABLE_VERSION:
            raise ValueError(f"unsupported Q-table version {d.get('version')}")
        qt = cls(d.get("quant_levels"))
        for item in d["entries"]:
            if item["action"] not in (INCLUDE, EXCLUDE):
                raise ValueError(f"bad action {item['action']!r}")
            qt.entries[tuple(item["key"])] = QEntry(
                float(item["q_include"]), float(item["q_exclude"]), item["action"], int(item["visits"])
            )
        return qt

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), sort_keys=True) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "QTable":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass
class FireModel:
    """Running pixel-weighted mean feature of the current lower set."""

    feature_sum: np.ndarray = field(default_factory=lambda: np.zeros(N_FEATURES))
    pixel_count: int = 0

    @property
    def defined(self) -> bool:
        return self.pixel_count > 0

    @property
    def mean_feature(self) -> np.ndarray:
        if not self.defined:
            raise NoFireModel("no fire model")
        return self.feature_sum / self.pixel_count

    def add(self, feature, size: int) -> None:
        self.feature_sum = self.feature_sum + np.asarray(feature, dtype=np.float64) * size
        self.pixel_count += int(size)

    @classmethod
    def from_granules(cls, gf: GranulatedFrame, ids) -> "FireModel":
        ids = np.fromiter(sorted(ids), dtype=np.int64)
        if len(ids) == 0:
            return cls()
        sizes = gf.sizes[ids]
        return cls((gf.features[ids] * sizes[:, None]).sum(axis=0), int(sizes.sum()))


def reward_of_feature(model: FireModel | None, feature) -> float:
    if model is None or not model.defined:
        raise NoFireModel("no fire model")
    diff = model.mean_feature - np.asarray(feature, dtype=np.float64)
    d = math.sqrt(float(diff @ diff) / N_FEATURES)
    return 1.0 - 2.0 * d


def reward(model: FireModel | None, g: Granule) -> float:
    """``1 - 2 D`` with ``D`` the Euclidean feature distance scaled to [0, 1]."""
    return reward_of_feature(model, g.mean_feature)


def q_pair(g: Granule, successors, model: FireModel, cfg: AgentConfig) -> tuple[float, float]:
    """One-step action values for ``g`` given its include/exclude successors."""
    r = reward(model, g)
    out = []
    for succ in successors:
        out.append(r if succ is None else r + cfg.gamma * reward(model, succ))
    return out[0], out[1]


@dataclass
class WalkStats:
    reward_evaluations: int = 0
    q_evaluations: int = 0
    known_states: int = 0
    visited: int = 0


class _BoundaryWalk:
    def __init__(self, gf, boundary, model, cfg, stats):
        self.gf = gf
        self.boundary = boundary
        self.model = model
        self.cfg = cfg
        self.stats = stats
        self._in_boundary = np.zeros(gf.n_granules, dtype=bool)
        if boundary:
            self._in_boundary[np.fromiter(boundary, dtype=np.int64)] = True
        self._nbrs = {}

    def neighbors(self, g) -> list[int]:
        """Boundary granules adjacent to ``g``, ascending."""
        n = self._nbrs.get(g)
        if n is None:
            nb = self.gf.neighbors(g)
            n = nb[self._in_boundary[nb]].tolist()
            self._nbrs[g] = n
        return n

    def reward(self, g) -> float:
        self.stats.reward_evaluations += 1
        return reward_of_feature(self.model, self.gf.features[g])

    def q_values(self, g, frontier, visited, depth) -> tuple[float, float, float]:
        """Return ``(q_include, q_exclude, R(g))``.

        ``frontier`` is the set of unvisited boundary granules adjacent to the
        lower set; ``visited`` already contains ``g``. Rewards during lookahead
        are scored against the model as it stands at decision time.
        """
        r = self.reward(g)
        if depth == 0:
            return r, r, r
        nb = [h for h in self.neighbors(g) if h not in visited]
        succ_inc = min(nb, default=None)
        succ_exc = min(frontier, default=None)
        q_inc = r
        if succ_inc is not None:
            nxt = (frontier | set(nb)) - {succ_inc}
            qi, qe, _ = self.q_values(succ_inc, nxt, visited | {succ_inc}, depth - 1)
            q_inc = r + self.cfg.gamma * max(qi, qe)
        q_exc = r
        if succ_exc is not None:
            qi, qe, _ = self.q_values(succ_exc, frontier - {succ_exc}, visited | {succ_exc}, depth - 1)
            q_exc = r + self.cfg.gamma * max(qi, qe)
        return q_inc, q_exc, r


@dataclass
class Refinement:
    fire: frozenset
    qtable: QTable
    no_fire_model: bool
    stats: WalkStats


def refine(gf: GranulatedFrame, ra: RoughApproximation, cfg: AgentConfig,
           qt: QTable | None = None, f: FrameBuffer | None = None) -> Refinement:
    """Adjudicate every boundary granule and return the Q-rough fire set.

    ``qt`` is updated in place (and returned); pass a copy to keep the
    original. Visiting order is breadth-first from the lower set, ascending
    granule id within a layer. Boundary granules never reached that way are
    seeded afterwards, lowest id first. ``f`` is accepted for interface
    symmetry; all features come from ``gf``.
    """
    qt = QTable(cfg.quant_levels) if qt is None else qt
    qt.bind(cfg)
    stats = WalkStats()
    if not ra.lower:
        return Refinement(frozenset(), qt, True, stats)

    lower = set(ra.lower)
    boundary = set(ra.boundary)
    model = FireModel.from_granules(gf, lower)
    walk = _BoundaryWalk(gf, boundary, model, cfg, stats)

    b_ids = np.array(sorted(boundary), dtype=np.int64)
    b_keys = np.clip(np.floor(gf.features[b_ids] * cfg.quant_levels), 0, cfg.quant_levels - 1)
    keys = {g: tuple(k) for g, k in zip(b_ids.tolist(), b_keys.astype(np.int64).tolist())}

    frontier = set()
    for g in lower:
        frontier.update(walk.neighbors(g))
    layer = deque(sorted(frontier))
    next_layer: set[int] = set()
    visited: set[int] = set()

    while True:
        if not layer:
            if next_layer:
                layer = deque(sorted(next_layer))
                next_layer = set()
                continue
            rest = boundary - visited
            if not rest:
                break
            seed = min(rest)
            layer.append(seed)
            frontier.add(seed)
        g = layer.popleft()
        frontier.discard(g)
        visited.add(g)
        stats.visited += 1

        key = keys[g]
        entry = qt.get(key)
        if entry is not None:
            stats.known_states += 1
            entry.visits += 1
            include = entry.chosen == INCLUDE
        else:
            stats.q_evaluations += 1
            q_inc, q_exc, r = walk.q_values(g, frontier, visited, cfg.lookahead_depth)
            include = q_inc > q_exc or (q_inc == q_exc and r > 0)
            qt.record(key, q_inc, q_exc, INCLUDE if include else EXCLUDE)

        if include:
            lower.add(g)
            model.add(gf.features[g], int(gf.sizes[g]))
            for h in walk.neighbors(g):
                if h not in visited and h not in frontier:
                    frontier.add(h)
                    next_layer.add(h)

    return Refinement(frozenset(lower), qt, False, stats)


@dataclass
class FrameSegmentation:
    mask: np.ndarray
    qtable: QTable
    fire: frozenset
    approximation: RoughApproximation
    granulated: GranulatedFrame
    no_fire_model: bool
    stats: WalkStats

    @property
    def fire_area(self) -> int:
        return int(self.mask.sum())

    def lower_mask(self) -> np.ndarray:
        return granule_mask(self.granulated, self.approximation.lower)

    def upper_mask(self) -> np.ndarray:
        return granule_mask(self.granulated, self.approximation.upper)


def segment_frame(f: FrameBuffer, cfg: AgentConfig | None = None, qt: QTable | None = None,
                  thr: int = DEFAULT_THR) -> FrameSegmentation:
    """Full single-frame pipeline: rule masks, granules, rough sets, refinement."""
    cfg = cfg or AgentConfig()
    ycc = ycrcb_array(f.pixels)
    stats = frame_stats(f, ycc)
    m_ycc = ycrcb_rules(ycc, stats)
    m_rgb = rgb_fire_mask(f, stats)
    gf = granulate(f, thr, ycc)
    ra = approximate_fire(gf, m_ycc, m_rgb)
    ref = refine(gf, ra, cfg, qt, f)
    mask = granule_mask(gf, ref.fire)
    return FrameSegmentation(mask, ref.qtable, ref.fire, ra, gf, ref.no_fire_model, ref.stats)
