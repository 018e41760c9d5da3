"""PSNR and SSIM image-quality metrics on [0, 1] float images.

SSIM follows the canonical windowed formulation: 11x11 Gaussian window
(sigma 1.5) normalized to unit sum, k1 = 0.01, k2 = 0.03, peak 1.0,
plain weighted moments (no sample-covariance correction), mean over valid
window positions only, channels averaged. These defaults are stated
explicitly so reported numbers are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import convolve2d

from .errors import ImageTooSmallError
from .tensorimg import as_image, require_same_shape


@dataclass(frozen=True)
class SsimParams:
    window_size: int = 11
    sigma: float = 1.5
    k1: float = 0.01
    k2: float = 0.03
    peak: float = 1.0

    def window(self) -> np.ndarray:
        """Normalized 2D Gaussian window (weights sum to 1)."""
        half = (self.window_size - 1) / 2.0
        coords = np.arange(self.window_size, dtype=np.float64) - half
        g = np.exp(-(coords ** 2) / (2.0 * self.sigma ** 2))
        w = np.outer(g, g)
        return w / w.sum()


def mse(a: np.ndarray, b: np.ndarray) -> float:
    """Mean squared error over all pixels and channels."""
    x, y = as_image(a), as_image(b)
    require_same_shape(x, y)
    return float(np.mean((x - y) ** 2))


def psnr(a: np.ndarray, b: np.ndarray, peak: float = 1.0) -> float:
    """Peak signal-to-noise ratio in dB; +inf when the images are identical."""
    if peak <= 0:
        raise ValueError(f"peak must be > 0, got {peak}")
    err = mse(a, b)
    if err == 0.0:
        return float("inf")
    return float(10.0 * np.log10(peak * peak / err))


def ssim(a: np.ndarray, b: np.ndarray, params: SsimParams = SsimParams()) -> float:
    """Mean structural similarity over valid window positions, in [-1, 1]."""
    x, y = as_image(a), as_image(b)
    require_same_shape(x, y)
    if min(x.shape[0], x.shape[1]) < params.window_size:
        raise ImageTooSmallError(
            f"SSIM needs min dimension >= {params.window_size}, got {x.shape[:2]}"
        )
    w = params.window()
    c1 = (params.k1 * params.peak) ** 2
    c2 = (params.k2 * params.peak) ** 2
    channel_means = []
    for c in range(x.shape[2]):
        p, q = x[:, :, c], y[:, :, c]
        mu_p = convolve2d(p, w, mode="valid")
        mu_q = convolve2d(q, w, mode="valid")
        var_p = convolve2d(p * p, w, mode="valid") - mu_p ** 2
        var_q = convolve2d(q * q, w, mode="valid") - mu_q ** 2
        cov = convolve2d(p * q, w, mode="valid") - mu_p * mu_q
        s = ((2.0 * mu_p * mu_q + c1) * (2.0 * cov + c2)) / (
            (mu_p ** 2 + mu_q ** 2 + c1) * (var_p + var_q + c2)
        )
        channel_means.append(float(np.mean(s)))
    return float(np.mean(channel_means))
