"""Deterministic binary PPM rendering of orbit clouds."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from ..errors import BadViewport
from . import kernels


@dataclass(frozen=True)
class Viewport:
    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        vals = (self.x0, self.y0, self.x1, self.y1)
        if not all(np.isfinite(v) for v in vals) or self.x1 <= self.x0 or self.y1 <= self.y0:
            raise BadViewport(f"viewport {vals} has no positive area")

    @classmethod
    def parse(cls, text: str) -> Viewport:
        try:
            vals = [float(t) for t in text.split(",")]
        except ValueError:
            raise BadViewport(f"bad viewport {text!r}") from None
        if len(vals) != 4:
            raise BadViewport(f"viewport needs x0,y0,x1,y1, got {text!r}")
        return cls(*vals)

    def as_tuple(self):
        return (self.x0, self.y0, self.x1, self.y1)


@dataclass
class RasterImage:
    width: int
    height: int
    viewport: Viewport
    pixels: np.ndarray      # (height, width) uint8, 1 where a point landed; row 0 is the top

    def count(self) -> int:
        return int(self.pixels.sum())

    def to_ppm(self) -> bytes:
        rgb = np.where(self.pixels[..., None] == 1, 0, 255).astype(np.uint8)
        rgb = np.repeat(rgb, 3, axis=2)
        return b"P6\n%d %d\n255\n" % (self.width, self.height) + rgb.tobytes()

    def sha256(self) -> str:
        return hashlib.sha256(self.to_ppm()).hexdigest()

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_ppm())


def render(cloud, viewport, width: int, height: int) -> RasterImage:
    """Pixel (col, row) = floor of the scaled offset from the left and top edges.

    Bins are half-open, so x = x1 and y = y0 fall outside.  Infinity is dropped.
    """
    if not isinstance(viewport, Viewport):
        viewport = Viewport(*viewport)
    if width < 1 or height < 1:
        raise BadViewport("image size must be positive")
    pts = cloud.finite() if hasattr(cloud, "finite") else np.asarray(cloud, dtype=np.complex128)
    pts = np.asarray(pts, dtype=np.complex128)
    buf = kernels.rasterize(pts.real, pts.imag, viewport.as_tuple(), int(width), int(height))
    return RasterImage(int(width), int(height), viewport, buf)
