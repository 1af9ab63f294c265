"""Deterministic synthetic image noise for light fields.

Both noise kinds corrupt only the color images; depth maps pass through
untouched so binning geometry is identical before and after.  Randomness
comes from numpy's PCG64 generator.  Each view (t, s) draws from its own
stream seeded with `seed ^ (t * cols + s)`, which makes results independent
of view evaluation order and of the thread count.

Gaussian noise adds N(mean, variance) per sample and clamps to [0, 1].
Salt-and-pepper noise corrupts whole pixels: a corruption raster is drawn
first, then a polarity raster; corrupted pixels become (1, 1, 1) (polarity
draw < 0.5) or (0, 0, 0), with equal probability.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .binning import LightField

__all__ = [
    "GaussianNoise",
    "SaltPepperNoise",
    "NoiseParams",
    "gaussian_field",
    "add_gaussian",
    "add_salt_pepper",
    "add_noise",
]

_MAX_SEED = 2**64 - 1


@dataclasses.dataclass(frozen=True)
class GaussianNoise:
    """Additive Gaussian noise: N(mean, variance) per color sample."""

    mean: float = 0.0
    variance: float = 0.01

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mean)):
            raise ValueError(f"mean must be finite, got {self.mean}")
        if not (math.isfinite(self.variance) and self.variance >= 0.0):
            raise ValueError(f"variance must be finite and >= 0, got {self.variance}")


@dataclasses.dataclass(frozen=True)
class SaltPepperNoise:
    """Whole-pixel salt-and-pepper noise with the given corruption density."""

    density: float = 0.05

    def __post_init__(self) -> None:
        if not (math.isfinite(self.density) and 0.0 <= self.density <= 1.0):
            raise ValueError(f"density must lie in [0, 1], got {self.density}")


@dataclasses.dataclass(frozen=True)
class NoiseParams:
    """A noise kind plus the base seed its per-view streams derive from."""

    kind: GaussianNoise | SaltPepperNoise
    seed: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.kind, (GaussianNoise, SaltPepperNoise)):
            raise ValueError(f"unsupported noise kind {type(self.kind).__name__}")
        if not (isinstance(self.seed, int) and 0 <= self.seed <= _MAX_SEED):
            raise ValueError(f"seed must be an integer in [0, 2**64), got {self.seed}")


def gaussian_field(
    shape: tuple[int, ...], mean: float, variance: float, seed: int
) -> np.ndarray:
    """The raw (pre-clamp) Gaussian draw of one view's noise.

    Exposed separately so the sample statistics of the additive field can be
    verified directly, before clamping skews them.
    """
    rng = np.random.default_rng(seed)
    return rng.normal(loc=mean, scale=math.sqrt(variance), size=shape)


def _view_seed(params: NoiseParams, view_linear: int) -> int:
    return params.seed ^ view_linear


def _map_views(lf: LightField, fn, threads: int) -> LightField:
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    views = range(lf.cfg.num_cameras)
    if threads == 1:
        images = [fn(m) for m in views]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            images = list(pool.map(fn, views))
    return LightField(cfg=lf.cfg, images=images, depths=list(lf.depths))


def add_gaussian(lf: LightField, params: NoiseParams, threads: int = 1) -> LightField:
    """Additive clamped Gaussian noise on every view's image.

    Depth maps are carried over unchanged.
    """
    if not isinstance(params.kind, GaussianNoise):
        raise ValueError("add_gaussian requires GaussianNoise parameters")
    kind = params.kind

    def corrupt(view_linear: int) -> np.ndarray:
        image = lf.images[view_linear]
        field = gaussian_field(image.shape, kind.mean, kind.variance, _view_seed(params, view_linear))
        return np.clip(image + field, 0.0, 1.0)

    return _map_views(lf, corrupt, threads)


def add_salt_pepper(lf: LightField, params: NoiseParams, threads: int = 1) -> LightField:
    """Whole-pixel salt-and-pepper corruption on every view's image.

    Depth maps are carried over unchanged.
    """
    if not isinstance(params.kind, SaltPepperNoise):
        raise ValueError("add_salt_pepper requires SaltPepperNoise parameters")
    density = params.kind.density

    def corrupt(view_linear: int) -> np.ndarray:
        image = lf.images[view_linear]
        rng = np.random.default_rng(_view_seed(params, view_linear))
        height, width = image.shape[:2]
        corrupted = rng.random((height, width)) < density
        salt = rng.random((height, width)) < 0.5
        out = image.copy()
        out[corrupted & salt] = 1.0
        out[corrupted & ~salt] = 0.0
        return out

    return _map_views(lf, corrupt, threads)


def add_noise(lf: LightField, params: NoiseParams, threads: int = 1) -> LightField:
    """Apply whichever noise kind `params` carries."""
    if isinstance(params.kind, GaussianNoise):
        return add_gaussian(lf, params, threads)
    return add_salt_pepper(lf, params, threads)
