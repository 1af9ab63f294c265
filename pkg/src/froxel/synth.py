"""Occlusion-aware view synthesis from a reduced froxel field.

A novel view at position (x, y) on the camera plane (z = 0) is rendered by
marching each pixel's ray through the froxel grid from near to far.  Because
froxel slices are totally ordered in depth, it suffices to visit only the
slice indices actually present in the field, in descending k (nearest slice
first): for each slice the pixel is projected at that slice's representative
depth z_k = C / (k + 0.5), quantized to a froxel cell with the same
quantization binning uses, and the first populated froxel wins.  Nearer
content therefore occludes farther content without any depth buffer.

Pixels whose ray meets no populated froxel in any present slice are holes:
they get the request's hole color and are flagged in the returned mask
(True = hole).
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .filters import ReducedField
from .lfgeom import _cell_index, _pixel_scale, slice_representative_depth

__all__ = ["ViewRequest", "synthesize"]

_DEFAULT_HOLE_COLOR = (1.0, 0.0, 1.0)

# Offset folding signed cell indices into unsigned packed keys.
_PACK_BIAS = 2**31


@dataclasses.dataclass(frozen=True)
class ViewRequest:
    """A synthesis viewpoint on the camera plane, plus the hole fill color."""

    x_mm: float
    y_mm: float
    hole_color: tuple[float, float, float] = _DEFAULT_HOLE_COLOR

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x_mm) and math.isfinite(self.y_mm)):
            raise ValueError(f"viewpoint must be finite, got ({self.x_mm}, {self.y_mm})")
        if any(not (0.0 <= c <= 1.0) for c in self.hole_color):
            raise ValueError(f"hole color must lie in [0, 1], got {self.hole_color}")


def _pack_uv(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Fold (u, v) cell pairs into one sortable uint64 key."""
    return ((u.astype(np.int64) + _PACK_BIAS) << 32) | (v.astype(np.int64) + _PACK_BIAS)


def synthesize(field: ReducedField, request: ViewRequest) -> tuple[np.ndarray, np.ndarray]:
    """Render the reduced field from a novel viewpoint.

    Returns:
        (image, hole_mask): a (H, W, 3) float64 image and a (H, W) boolean
        mask with True marking hole pixels.

    Raises:
        ValueError: on an empty reduced field.
    """
    if not field.froxels:
        raise ValueError("cannot synthesize from an empty reduced field")
    cfg = field.cfg
    c_x, c_y = cfg.principal_point
    height, width = cfg.height_px, cfg.width_px

    # Per-slice lookup tables: sorted packed (u, v) keys and their colors.
    slices: dict[int, list[tuple[int, tuple[float, float, float]]]] = {}
    for index, froxel in field.froxels.items():
        packed = ((index.u + _PACK_BIAS) << 32) | (index.v + _PACK_BIAS)
        slices.setdefault(index.k, []).append((packed, froxel.color))
    tables = {}
    for k, entries in slices.items():
        entries.sort(key=lambda e: e[0])
        keys = np.array([e[0] for e in entries], dtype=np.uint64)
        colors = np.array([e[1] for e in entries], dtype=np.float64)
        tables[k] = (keys, colors)

    ii, jj = np.meshgrid(np.arange(width), np.arange(height))
    image = np.empty((height, width, 3), dtype=np.float64)
    image[:] = request.hole_color
    unresolved = np.ones((height, width), dtype=bool)

    for k in sorted(tables, reverse=True):
        if not unresolved.any():
            break
        keys, colors = tables[k]
        z = slice_representative_depth(cfg, k)
        scale = _pixel_scale(cfg, z)
        i_open, j_open = ii[unresolved], jj[unresolved]
        x = (i_open - c_x) * scale + request.x_mm
        y = (j_open - c_y) * scale + request.y_mm
        u = _cell_index(x, scale, cfg.n_hor, c_x)
        v = _cell_index(y, scale, cfg.n_ver, c_y)
        packed = _pack_uv(u, v).astype(np.uint64)
        pos = np.searchsorted(keys, packed)
        pos_clipped = np.minimum(pos, keys.shape[0] - 1)
        hit = keys[pos_clipped] == packed
        if not hit.any():
            continue
        rows, cols = j_open[hit], i_open[hit]
        image[rows, cols] = colors[pos_clipped[hit]]
        unresolved[rows, cols] = False

    return image, unresolved
