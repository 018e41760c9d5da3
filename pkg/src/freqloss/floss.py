"""Multi-scale frequency-domain loss with analytic gradients.

The loss compares two images in transform space. Per channel and per pyramid
level, the single-scale term is the mean absolute difference between
transform coefficients:

    L_level = mean_{u,v} | T(I1_level) - T(I2_level) |

with T the orthonormal 2D DCT-II (real absolute value) or the unnormalized
2D DFT (complex modulus of the coefficient difference). Levels come from a
2x2 mean-pooling pyramid; the frequency term is the sum over levels of the
channel-averaged single-scale terms. The combined objective adds a plain
mean-absolute pixel term:

    total = l1_term + lambda * freq_term

Everything is built from linear transforms plus absolute values, so an exact
subgradient exists everywhere; the subgradient of |.| at 0 is taken as 0
(for complex moduli the phase factor is taken as 0 where the modulus is 0),
which makes the gradient exactly zero at the global minimum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadConfigError, ShapeMismatchError
from .spectral import dct2, fft2, idct2
from .tensorimg import as_image, build_pyramid, require_same_shape

VARIANTS = ("dct", "fft")


@dataclass(frozen=True)
class LossConfig:
    """Configuration of the combined loss.

    variant: "dct" or "fft" transform for the frequency term.
    scales: number of pyramid levels (>= 1); image dimensions must be
        multiples of 2**(scales-1).
    lam: nonnegative weight of the frequency term (manually tuned in
        practice; 1.0 by default).
    include_l1: add the mean-absolute pixel term.
    """

    variant: str = "dct"
    scales: int = 3
    lam: float = 1.0
    include_l1: bool = True

    def validate(self) -> "LossConfig":
        if self.variant not in VARIANTS:
            raise BadConfigError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.scales < 1:
            raise BadConfigError(f"scales must be >= 1, got {self.scales}")
        if not (self.lam >= 0.0) or not np.isfinite(self.lam):
            raise BadConfigError(f"lambda must be a finite value >= 0, got {self.lam}")
        return self


@dataclass
class LossReport:
    """Loss value with its per-scale, per-channel breakdown.

    per_scale holds one (scale divisor K, [per-channel loss]) entry per
    pyramid level, K = 2**level. freq_term is the sum over levels of the
    channel means; total = l1_term + lam * freq_term.
    """

    total: float
    l1_term: float
    freq_term: float
    lam: float
    per_scale: list[tuple[int, list[float]]] = field(default_factory=list)

    def __add__(self, other: "LossReport") -> "LossReport":
        if self.lam != other.lam or len(self.per_scale) != len(other.per_scale):
            raise ShapeMismatchError("cannot add loss reports with different configs")
        per_scale = [
            (k1, [a + b for a, b in zip(c1, c2)])
            for (k1, c1), (_, c2) in zip(self.per_scale, other.per_scale)
        ]
        return LossReport(
            total=self.total + other.total,
            l1_term=self.l1_term + other.l1_term,
            freq_term=self.freq_term + other.freq_term,
            lam=self.lam,
            per_scale=per_scale,
        )


def _coeff_diff(p1: np.ndarray, p2: np.ndarray, variant: str) -> np.ndarray:
    if variant == "dct":
        return dct2(p1) - dct2(p2)
    return fft2(p1) - fft2(p2)


def single_scale_loss(img1: np.ndarray, img2: np.ndarray, variant: str = "dct") -> list[float]:
    """Per-channel mean absolute coefficient difference at one scale.

    Inputs are the already-downsampled level images; the mean over their
    own grid realizes the K^2/(M*N) normalization of the full-resolution
    formula exactly.
    """
    if variant not in VARIANTS:
        raise BadConfigError(f"variant must be one of {VARIANTS}, got {variant!r}")
    a, b = as_image(img1), as_image(img2)
    require_same_shape(a, b)
    return [
        float(np.mean(np.abs(_coeff_diff(a[:, :, c], b[:, :, c], variant))))
        for c in range(a.shape[2])
    ]


def multi_scale_loss(img1: np.ndarray, img2: np.ndarray, config: LossConfig) -> LossReport:
    """Combined loss L1 + lambda * sum-over-scales of frequency terms."""
    config.validate()
    a, b = as_image(img1), as_image(img2)
    require_same_shape(a, b)
    pyr1 = build_pyramid(a, config.scales)
    pyr2 = build_pyramid(b, config.scales)
    per_scale: list[tuple[int, list[float]]] = []
    freq_term = 0.0
    for level, (l1_img, l2_img) in enumerate(zip(pyr1, pyr2)):
        channel_losses = single_scale_loss(l1_img, l2_img, config.variant)
        per_scale.append((2 ** level, channel_losses))
        freq_term += sum(channel_losses) / len(channel_losses)
    l1_term = float(np.mean(np.abs(a - b))) if config.include_l1 else 0.0
    return LossReport(
        total=l1_term + config.lam * freq_term,
        l1_term=l1_term,
        freq_term=freq_term,
        lam=config.lam,
        per_scale=per_scale,
    )


def _upsample_gradient(g: np.ndarray) -> np.ndarray:
    """Adjoint of one 2x2 mean-pooling step: spread g/4 over each block."""
    return np.repeat(np.repeat(g, 2, axis=0), 2, axis=1) * 0.25


def _scale_gradient_plane(p1: np.ndarray, p2: np.ndarray, variant: str) -> np.ndarray:
    """d(mean |coeff diff|)/d(level pixels) for one channel plane."""
    rows, cols = p1.shape
    diff = _coeff_diff(p1, p2, variant)
    if variant == "dct":
        # Adjoint of the orthonormal DCT is its inverse.
        return idct2(np.sign(diff)) / (rows * cols)
    mod = np.abs(diff)
    phase = np.zeros_like(diff)
    nz = mod > 0.0
    phase[nz] = diff[nz] / mod[nz]
    # Adjoint of the unnormalized DFT is rows*cols * ifft2; the mean's
    # 1/(rows*cols) cancels it exactly.
    return np.real(np.fft.ifft2(phase))


def loss_gradient(img1: np.ndarray, img2: np.ndarray, config: LossConfig) -> np.ndarray:
    """Exact subgradient of multi_scale_loss(...).total with respect to img1."""
    config.validate()
    a, b = as_image(img1), as_image(img2)
    require_same_shape(a, b)
    h, w, nch = a.shape
    grad = np.zeros_like(a)
    if config.include_l1:
        grad += np.sign(a - b) / (h * w * nch)
    if config.lam == 0.0:
        return grad
    pyr1 = build_pyramid(a, config.scales)
    pyr2 = build_pyramid(b, config.scales)
    for level in range(config.scales):
        for c in range(nch):
            g = _scale_gradient_plane(
                pyr1[level][:, :, c], pyr2[level][:, :, c], config.variant
            )
            for _ in range(level):
                g = _upsample_gradient(g)
            grad[:, :, c] += (config.lam / nch) * g
    return grad


def masked_loss(
    img1: np.ndarray, img2: np.ndarray, mask: np.ndarray, config: LossConfig
) -> LossReport:
    """Loss on mask*I and on (1-mask)*I, summed term-wise.

    The mask has the images' spatial shape with values in [0, 1]; a
    single-channel mask broadcasts across color channels.
    """
    a, b = as_image(img1), as_image(img2)
    require_same_shape(a, b)
    m = np.asarray(mask, dtype=np.float64)
    if m.ndim == 2:
        m = m[:, :, np.newaxis]
    if m.shape[:2] != a.shape[:2] or m.shape[2] not in (1, a.shape[2]):
        raise ShapeMismatchError(f"mask shape {m.shape} does not match images {a.shape}")
    if np.any(m < 0.0) or np.any(m > 1.0):
        raise BadConfigError("mask values must lie in [0, 1]")
    inside = multi_scale_loss(m * a, m * b, config)
    outside = multi_scale_loss((1.0 - m) * a, (1.0 - m) * b, config)
    return inside + outside
