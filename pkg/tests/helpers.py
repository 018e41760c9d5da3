"""Shared test utilities: independent oracles and the FD gradient check."""

from __future__ import annotations

import numpy as np

from freqloss.floss import LossConfig, multi_scale_loss
from freqloss.spectral import dct2, fft2
from freqloss.tensorimg import build_pyramid


def block_mean_pool(plane: np.ndarray) -> np.ndarray:
    """Direct per-block 2x2 mean, written independently of downsample2x."""
    h, w = plane.shape
    out = np.empty((h // 2, w // 2))
    for i in range(h // 2):
        for j in range(w // 2):
            out[i, j] = (
                plane[2 * i, 2 * j]
                + plane[2 * i, 2 * j + 1]
                + plane[2 * i + 1, 2 * j]
                + plane[2 * i + 1, 2 * j + 1]
            ) / 4.0
    return out


def min_coeff_gap(a: np.ndarray, b: np.ndarray, config: LossConfig) -> float:
    """Smallest |coefficient difference| (and pixel difference) over all terms.

    Finite-difference probes step across the kinks of |.| when a difference
    is this close to zero, so random instances below a threshold get
    re-sampled.
    """
    gaps = [np.min(np.abs(a - b))] if config.include_l1 else []
    p1 = build_pyramid(a, config.scales)
    p2 = build_pyramid(b, config.scales)
    transform = dct2 if config.variant == "dct" else fft2
    for lvl1, lvl2 in zip(p1, p2):
        for c in range(a.shape[2]):
            gaps.append(np.min(np.abs(transform(lvl1[:, :, c]) - transform(lvl2[:, :, c]))))
    return float(min(gaps))


def sample_smooth_pair(
    rng: np.random.Generator, h: int, w: int, c: int, config: LossConfig,
    gap: float = 1e-3,
) -> tuple[np.ndarray, np.ndarray]:
    """Random pair with every |coefficient difference| above the kink gap."""
    while True:
        a = rng.random((h, w, c))
        b = rng.random((h, w, c))
        if min_coeff_gap(a, b, config) > gap:
            return a, b


def fd_gradient(
    a: np.ndarray, b: np.ndarray, config: LossConfig, h: float = 1e-6
) -> np.ndarray:
    """Central finite differences of multi_scale_loss(...).total over every pixel."""
    fd = np.zeros_like(a)
    for idx in np.ndindex(a.shape):
        ap = a.copy()
        am = a.copy()
        ap[idx] += h
        am[idx] -= h
        fd[idx] = (
            multi_scale_loss(ap, b, config).total
            - multi_scale_loss(am, b, config).total
        ) / (2.0 * h)
    return fd


def rel_gradient_error(analytic: np.ndarray, fd: np.ndarray) -> float:
    """Max absolute deviation relative to the largest gradient magnitude."""
    scale = max(np.max(np.abs(analytic)), np.max(np.abs(fd)), 1e-12)
    return float(np.max(np.abs(analytic - fd)) / scale)
