"""Full-reference image quality metrics: PSNR and single-scale SSIM.

Both metrics assume float images with values in [0, 1] (dynamic range L = 1).

PSNR is 10*log10(1 / MSE) with the mean squared error taken over every pixel
and channel; identical images have MSE 0 and PSNR +infinity.

SSIM is computed on BT.601 luma (0.299 R + 0.587 G + 0.114 B) with the
standard single-scale parameters: an 11x11 Gaussian window of sigma 1.5,
K1 = 0.01, K2 = 0.03.  Local statistics use valid-mode 2-D convolution, so
images must be at least 11 pixels in each dimension.  The implementation
computes the covariance and the variances with the identical expression,
which makes ssim(a, a) exactly 1.0.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
from scipy.signal import convolve2d

__all__ = ["QualityReport", "psnr", "ssim", "evaluate"]

_WINDOW_SIZE = 11
_WINDOW_SIGMA = 1.5
_K1 = 0.01
_K2 = 0.03
_L = 1.0
_C1 = (_K1 * _L) ** 2
_C2 = (_K2 * _L) ** 2


def _gaussian_window(size: int, sigma: float) -> np.ndarray:
    offsets = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
    taps = np.exp(-(offsets**2) / (2.0 * sigma**2))
    window = np.outer(taps, taps)
    return window / window.sum()


_WINDOW = _gaussian_window(_WINDOW_SIZE, _WINDOW_SIGMA)


@dataclasses.dataclass(frozen=True)
class QualityReport:
    """PSNR (dB) and SSIM of a test image against a reference."""

    psnr_db: float
    ssim: float


def _checked_pair(ref: np.ndarray, test: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(ref, dtype=np.float64)
    b = np.asarray(test, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"image shapes differ: {a.shape} vs {b.shape}")
    if a.ndim == 3 and a.shape[2] != 3:
        raise ValueError(f"color images must have 3 channels, got shape {a.shape}")
    if a.ndim not in (2, 3):
        raise ValueError(f"images must be 2-D or (H, W, 3), got shape {a.shape}")
    for name, arr in (("reference", a), ("test", b)):
        if not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0:
            raise ValueError(f"{name} image values must lie in [0, 1]")
    return a, b


def _luma(image: np.ndarray) -> np.ndarray:
    if image.ndim == 2:
        return image
    return image[:, :, 0] * 0.299 + image[:, :, 1] * 0.587 + image[:, :, 2] * 0.114


def psnr(ref: np.ndarray, test: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB over all pixels and channels.

    Returns math.inf for identical images.
    """
    a, b = _checked_pair(ref, test)
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(1.0 / mse)


def ssim(ref: np.ndarray, test: np.ndarray) -> float:
    """Mean single-scale SSIM on luma.

    Raises:
        ValueError: when either image dimension is smaller than the 11x11
            window.
    """
    a, b = _checked_pair(ref, test)
    x = _luma(a)
    y = _luma(b)
    if x.shape[0] < _WINDOW_SIZE or x.shape[1] < _WINDOW_SIZE:
        raise ValueError(
            f"images must be at least {_WINDOW_SIZE}x{_WINDOW_SIZE} for SSIM, "
            f"got {x.shape[1]}x{x.shape[0]}"
        )
    mu_x = convolve2d(x, _WINDOW, mode="valid")
    mu_y = convolve2d(y, _WINDOW, mode="valid")
    # Covariance and variances share one expression so that y == x yields a
    # bitwise-identical numerator and denominator (SSIM exactly 1).
    var_x = convolve2d(x * x, _WINDOW, mode="valid") - mu_x * mu_x
    var_y = convolve2d(y * y, _WINDOW, mode="valid") - mu_y * mu_y
    cov_xy = convolve2d(x * y, _WINDOW, mode="valid") - mu_x * mu_y
    numerator = (2.0 * mu_x * mu_y + _C1) * (2.0 * cov_xy + _C2)
    denominator = (mu_x * mu_x + mu_y * mu_y + _C1) * (var_x + var_y + _C2)
    return float(np.mean(numerator / denominator))


def evaluate(ref: np.ndarray, test: np.ndarray) -> QualityReport:
    """PSNR and SSIM of a test image against a reference."""
    return QualityReport(psnr_db=psnr(ref, test), ssim=ssim(ref, test))
