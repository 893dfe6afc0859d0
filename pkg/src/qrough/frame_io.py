"""Frame sequence ingestion, mask images and JSON-lines reports.

Masks are plain ``(height, width)`` boolean numpy arrays throughout the
package; on disk they are 8-bit grayscale images (fire = 255).
"""
from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np
from PIL import Image, UnidentifiedImageError

log = logging.getLogger(__name__)

FRAME_SUFFIXES = (".ppm", ".pnm", ".pgm", ".png")


class FrameIOError(RuntimeError):
    """Fatal ingestion or serialization failure."""


@dataclass
class FrameBuffer:
    """One decoded frame: ``pixels`` is a ``(height, width, 3)`` uint8 array."""

    pixels: np.ndarray
    index: int = 0
    source: str | None = None

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 3 or px.shape[2] != 3:
            raise ValueError(f"expected (H, W, 3) pixels, got shape {px.shape}")
        if px.shape[0] == 0 or px.shape[1] == 0:
            raise ValueError("frame must have at least one pixel")
        if px.dtype != np.uint8:
            if px.min() < 0 or px.max() > 255:
                raise ValueError("channel values must lie in [0, 255]")
            px = px.astype(np.uint8)
        self.pixels = px

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @classmethod
    def uniform(cls, width, height, rgb, index=0):
        px = np.empty((height, width, 3), dtype=np.uint8)
        px[...] = rgb
        return cls(px, index)


@dataclass
class FrameReport:
    frame_index: int
    fire_area: int
    f_mu: float
    f_mu_p: float
    threat: float
    alarm: bool

    def to_json(self) -> str:
        d = asdict(self)
        d["fire_area"] = int(d["fire_area"])
        for k in ("f_mu", "f_mu_p", "threat"):
            d[k] = float(d[k])
        d["alarm"] = bool(d["alarm"])
        return json.dumps(d, separators=(",", ":"))


def list_frames(path, pattern: str | None = None) -> list[Path]:
    root = Path(path)
    if not root.is_dir():
        raise FrameIOError(f"input directory does not exist: {root}")
    if pattern is None:
        files = [p for p in root.iterdir() if p.suffix.lower() in FRAME_SUFFIXES]
    else:
        files = list(root.glob(pattern))
    return sorted((p for p in files if p.is_file()), key=lambda p: p.name)


def read_rgb(path) -> np.ndarray:
    try:
        with Image.open(path) as im:
            return np.array(im.convert("RGB"), dtype=np.uint8)
    except (OSError, UnidentifiedImageError, ValueError) as exc:
        raise FrameIOError(f"cannot decode frame {path}: {exc}") from exc


def load_sequence(path, pattern: str | None = None) -> Iterator[FrameBuffer]:
    """Yield frames of a directory in lexicographic filename order.

    ``pattern`` is a glob relative to ``path``; by default every file with a
    PPM/PNM/PGM/PNG suffix is taken. All frames must share the dimensions of
    the first one.
    """
    first = None
    for i, p in enumerate(list_frames(path, pattern)):
        px = read_rgb(p)
        if first is None:
            first = (p, px.shape)
        elif px.shape != first[1]:
            raise FrameIOError(
                f"dimension mismatch: {first[0].name} is {first[1][1]}x{first[1][0]}, "
                f"{p.name} is {px.shape[1]}x{px.shape[0]}"
            )
        yield FrameBuffer(px, i, str(p))


def write_mask(mask: np.ndarray, path) -> None:
    """Write a boolean mask as an 8-bit image; format follows the suffix."""
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2:
        raise ValueError(f"mask must be 2-D, got shape {mask.shape}")
    img = Image.fromarray(np.where(mask, 255, 0).astype(np.uint8), mode="L")
    try:
        img.save(path)
    except (OSError, ValueError) as exc:
        raise FrameIOError(f"cannot write mask {path}: {exc}") from exc


def read_mask(path) -> np.ndarray:
    try:
        with Image.open(path) as im:
            return np.array(im.convert("L")) > 127
    except (OSError, UnidentifiedImageError) as exc:
        raise FrameIOError(f"cannot decode mask {path}: {exc}") from exc


def write_frame(frame: FrameBuffer, path) -> None:
    try:
        Image.fromarray(frame.pixels, mode="RGB").save(path)
    except (OSError, ValueError) as exc:
        raise FrameIOError(f"cannot write frame {path}: {exc}") from exc


def write_report(reports: Iterable[FrameReport], path, header: dict | None = None) -> int:
    """Write one JSON object per report line; returns the number of reports.

    When ``header`` is given it is written first as ``{"header": {...}}`` so
    that run parameters travel with the numbers.
    """
    n = 0
    try:
        with open(path, "w", encoding="utf-8") as fh:
            if header is not None:
                fh.write(json.dumps({"header": header}, sort_keys=True) + "\n")
            for r in reports:
                fh.write(r.to_json() + "\n")
                n += 1
    except OSError as exc:
        raise FrameIOError(f"cannot write report {path}: {exc}") from exc
    return n


def read_report(path) -> tuple[dict | None, list[FrameReport]]:
    header, out = None, []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            d = json.loads(line)
            if "header" in d:
                header = d["header"]
            else:
                out.append(FrameReport(**d))
    return header, out
