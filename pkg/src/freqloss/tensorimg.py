"""Image tensors, PNG/JPEG ingestion, and the mean-pooling pyramid.

Images are numpy float64 arrays of shape (height, width, channels) with
channels in {1, 3}. Ingested pixel values live in [0, 1] (8-bit sample / 255).
Intermediate arithmetic results produced elsewhere in the package may leave
that range; nothing here re-clamps them.
"""

from __future__ import annotations

import io
import os

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import (
    DecodeError,
    ImageTooSmallError,
    OddDimensionError,
    ShapeMismatchError,
    UnsupportedFormatError,
)

# PIL modes accepted for 8-bit ingestion, with their channel counts.
_MODE_CHANNELS = {"L": 1, "RGB": 3}


def as_image(arr: np.ndarray) -> np.ndarray:
    """Coerce an array to the canonical (H, W, C) float64 layout.

    Accepts (H, W) single-plane or (H, W, C) input with C in {1, 3}.
    """
    a = np.asarray(arr, dtype=np.float64)
    if a.ndim == 2:
        a = a[:, :, np.newaxis]
    if a.ndim != 3 or a.shape[2] not in (1, 3):
        raise ShapeMismatchError(
            f"expected (H, W) or (H, W, C) with C in {{1, 3}}, got shape {a.shape}"
        )
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ImageTooSmallError(f"empty image of shape {a.shape}")
    return a


def decode_image(data: bytes) -> np.ndarray:
    """Decode 8-bit PNG or JPEG bytes to an (H, W, C) float64 array in [0, 1].

    Each 8-bit sample maps to value / 255.0. Grayscale files yield C=1,
    color files C=3. Palette PNGs are expanded to RGB (their samples are
    8-bit). Anything else (alpha, 16-bit, CMYK, ...) is rejected.
    """
    try:
        with Image.open(io.BytesIO(data)) as im:
            if im.mode == "P":
                im = im.convert("RGB")
            if im.mode not in _MODE_CHANNELS:
                raise UnsupportedFormatError(
                    f"unsupported image mode {im.mode!r}; need 8-bit grayscale or RGB"
                )
            samples = np.asarray(im, dtype=np.uint8)
    except UnidentifiedImageError as exc:
        raise DecodeError(f"cannot decode image: {exc}") from exc
    except OSError as exc:
        raise DecodeError(f"cannot decode image: {exc}") from exc
    if samples.ndim == 2:
        samples = samples[:, :, np.newaxis]
    return samples.astype(np.float64) / 255.0


def load_image(path: str | os.PathLike) -> np.ndarray:
    """Load an 8-bit PNG or JPEG file; see decode_image for the contract."""
    if not os.path.exists(path):
        raise FileNotFoundError(f"no such image file: {path}")
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        return decode_image(data)
    except (UnsupportedFormatError, DecodeError) as exc:
        raise type(exc)(f"{path}: {exc}") from exc


def save_image(img: np.ndarray, path: str | os.PathLike) -> None:
    """Write an image in [0, 1] as an 8-bit PNG (values rounded to /255 grid)."""
    a = as_image(img)
    samples = np.clip(np.rint(a * 255.0), 0, 255).astype(np.uint8)
    if samples.shape[2] == 1:
        pil = Image.fromarray(samples[:, :, 0], mode="L")
    else:
        pil = Image.fromarray(samples, mode="RGB")
    pil.save(path, format="PNG")


def crop_to_multiple(img: np.ndarray, m: int) -> np.ndarray:
    """Top-left crop so both spatial dimensions are multiples of m.

    No-op (same array returned) when the dimensions already are multiples.
    """
    a = as_image(img)
    h, w = a.shape[0], a.shape[1]
    if m < 1:
        raise ValueError(f"multiple must be >= 1, got {m}")
    if h < m or w < m:
        raise ImageTooSmallError(f"image {h}x{w} smaller than required multiple {m}")
    nh, nw = (h // m) * m, (w // m) * m
    if nh == h and nw == w:
        return a
    return a[:nh, :nw, :]


def downsample2x(img: np.ndarray) -> np.ndarray:
    """Halve both dimensions by averaging disjoint 2x2 blocks per channel."""
    a = as_image(img)
    h, w = a.shape[0], a.shape[1]
    if h % 2 or w % 2:
        raise OddDimensionError(f"downsample2x needs even dimensions, got {h}x{w}")
    # Fixed summation order keeps results reproducible across runs.
    return (a[0::2, 0::2] + a[0::2, 1::2] + a[1::2, 0::2] + a[1::2, 1::2]) * 0.25


def build_pyramid(img: np.ndarray, levels: int) -> list[np.ndarray]:
    """Mean-pooling pyramid: level 0 is the input, level k halves level k-1.

    The input must have dimensions divisible by 2**(levels-1); use
    crop_to_multiple first. An odd dimension at any level raises
    OddDimensionError.
    """
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    out = [as_image(img)]
    for _ in range(levels - 1):
        out.append(downsample2x(out[-1]))
    return out


def require_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shape mismatch: {a.shape} vs {b.shape}")
