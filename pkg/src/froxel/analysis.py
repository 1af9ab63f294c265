"""Per-froxel color statistics and Lambertian classification.

A froxel samples one small piece of scene surface from many cameras at once.
If that surface is Lambertian (view-independent), the rays landing in the
froxel agree in color up to noise, so the spread of the per-channel color
distributions separates matte from view-dependent (e.g. specular) surfaces:

    score = (std_r + std_g + std_b) / 3        (population stds, ddof=0)
    Lambertian  iff  score <= tau              (default tau = 0.02)

The module also renders a "froxel patch": a small image laying out each
camera's ray color on the camera grid, useful for eyeballing a single froxel.
"""

from __future__ import annotations

import dataclasses
import enum
import math

import numpy as np

from .binning import FroxelStore, RaySample
from .lfgeom import CameraArrayConfig, FroxelIndex

__all__ = [
    "DEFAULT_TAU",
    "FroxelColorStats",
    "Lambertianness",
    "LambertianLabel",
    "color_stats",
    "classify_lambertian",
    "classify_store",
    "export_stats_csv",
    "export_froxel_patch",
]

DEFAULT_TAU = 0.02

_PLACEHOLDER_DARK = (0.25, 0.25, 0.25)
_PLACEHOLDER_LIGHT = (0.75, 0.75, 0.75)


@dataclasses.dataclass(frozen=True)
class FroxelColorStats:
    """Color statistics of one froxel's ray population."""

    n: int
    mean: tuple[float, float, float]
    per_channel_std: tuple[float, float, float]
    max_pairwise_dist: float


class Lambertianness(enum.Enum):
    LAMBERTIAN = "Lambertian"
    NON_LAMBERTIAN = "NonLambertian"


@dataclasses.dataclass(frozen=True)
class LambertianLabel:
    """Classification of a froxel plus the score it was judged by."""

    label: Lambertianness
    score: float


def _stats_from_colors(colors: np.ndarray) -> FroxelColorStats:
    """Statistics of an (n, 3) color block; the single formula used by both
    the scalar API and the CSV export."""
    n = colors.shape[0]
    mean = colors.mean(axis=0)
    std = colors.std(axis=0)
    if n == 1:
        max_dist = 0.0
    else:
        diff = colors[:, None, :] - colors[None, :, :]
        max_dist = float(np.sqrt((diff * diff).sum(axis=2)).max())
    return FroxelColorStats(
        n=n,
        mean=tuple(float(c) for c in mean),
        per_channel_std=tuple(float(c) for c in std),
        max_pairwise_dist=max_dist,
    )


def color_stats(samples: list[RaySample]) -> FroxelColorStats:
    """Mean, population std per channel, and max pairwise RGB distance of a
    froxel's rays.

    Raises:
        ValueError: on an empty sample list.
    """
    if not samples:
        raise ValueError("color statistics need at least one ray sample")
    colors = np.array([sample.color for sample in samples], dtype=np.float64)
    return _stats_from_colors(colors)


def classify_lambertian(stats: FroxelColorStats, tau: float = DEFAULT_TAU) -> LambertianLabel:
    """Label a froxel Lambertian iff the mean per-channel std is <= tau."""
    if not (math.isfinite(tau) and tau >= 0.0):
        raise ValueError(f"tau must be a finite non-negative number, got {tau}")
    score = sum(stats.per_channel_std) / 3.0
    label = Lambertianness.LAMBERTIAN if score <= tau else Lambertianness.NON_LAMBERTIAN
    return LambertianLabel(label=label, score=score)


def classify_store(
    store: FroxelStore, tau: float = DEFAULT_TAU
) -> dict[FroxelIndex, LambertianLabel]:
    """Classify every non-empty froxel of a store."""
    labels = {}
    for g in range(store.num_froxels):
        stats = _stats_from_colors(store.color[store.group_slice(g)])
        labels[store.froxel_index_at(g)] = classify_lambertian(stats, tau)
    return labels


def export_stats_csv(store: FroxelStore, tau: float = DEFAULT_TAU) -> str:
    """CSV of per-froxel statistics in canonical froxel order.

    Columns: u,v,k,n,mean_r,mean_g,mean_b,std_r,std_g,std_b,label
    """
    lines = ["u,v,k,n,mean_r,mean_g,mean_b,std_r,std_g,std_b,label"]
    for g in range(store.num_froxels):
        index = store.froxel_index_at(g)
        stats = _stats_from_colors(store.color[store.group_slice(g)])
        label = classify_lambertian(stats, tau)
        mean = ",".join(repr(c) for c in stats.mean)
        std = ",".join(repr(c) for c in stats.per_channel_std)
        lines.append(
            f"{index.u},{index.v},{index.k},{stats.n},{mean},{std},{label.label.value}"
        )
    return "\n".join(lines) + "\n"


def export_froxel_patch(
    samples: list[RaySample],
    cfg: CameraArrayConfig,
    magnification: int = 8,
) -> np.ndarray:
    """Render one froxel's rays as a camera-grid image.

    The patch is a ceil(sqrt(M)) x ceil(sqrt(M)) grid of cells; cell (t, s)
    shows the color of the ray camera (s, t) contributed (the first such ray
    in canonical order when the froxel holds several).  Cameras that did not
    reach the froxel get a two-tone gray checkerboard placeholder keyed by
    (t + s) parity.  Each cell is magnification x magnification pixels.
    """
    if magnification < 1:
        raise ValueError(f"magnification must be >= 1, got {magnification}")
    q = math.isqrt(cfg.num_cameras)
    if q * q < cfg.num_cameras:
        q += 1
    patch = np.zeros((q * magnification, q * magnification, 3), dtype=np.float64)
    colors: dict[tuple[int, int], tuple[float, float, float]] = {}
    for sample in samples:
        key = (sample.cam.t, sample.cam.s)
        if key not in colors:
            colors[key] = sample.color
    for t in range(cfg.rows):
        for s in range(cfg.cols):
            if (t, s) in colors:
                color = colors[(t, s)]
            elif (t + s) % 2 == 0:
                color = _PLACEHOLDER_DARK
            else:
                color = _PLACEHOLDER_LIGHT
            rows = slice(t * magnification, (t + 1) * magnification)
            cols = slice(s * magnification, (s + 1) * magnification)
            patch[rows, cols] = color
    return patch
