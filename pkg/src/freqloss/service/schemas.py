"""Pydantic request/response models for the HTTP service.

Two wire conventions coexist:

* Buffer endpoints (/v1/loss, /v1/gradient) move raw float64 data as
  base64-encoded little-endian bytes in channel-major planar layout
  (C planes of H*W row-major values). Results include a numeric status:
  0 ok, 1 shape/buffer mismatch, 2 bad config, 3 dimensions not
  pyramid-compatible. The versioned route names are the stable contract
  external training loops bind against.

* File endpoints (/v1/compare/*, /v1/spectrum, /v1/demo) move whole
  image files (PNG/JPEG bytes, base64) and return report objects; errors
  carry a kind ("input" or "runtime") the CLI maps to its exit codes.
"""

from __future__ import annotations

import base64
import binascii

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import ShapeMismatchError
from ..floss import LossConfig, LossReport

STATUS_OK = 0
STATUS_SHAPE = 1
STATUS_CONFIG = 2
STATUS_PYRAMID = 3


class LossSettings(BaseModel):
    """Wire mirror of LossConfig; value validation happens in LossConfig."""

    model_config = ConfigDict(populate_by_name=True)

    variant: str = "dct"
    scales: int = 3
    lam: float = Field(default=1.0, alias="lambda")
    include_l1: bool = True

    def to_config(self) -> LossConfig:
        return LossConfig(
            variant=self.variant,
            scales=self.scales,
            lam=self.lam,
            include_l1=self.include_l1,
        ).validate()

    def echo(self) -> dict:
        return {
            "variant": self.variant,
            "scales": self.scales,
            "lambda": self.lam,
            "include_l1": self.include_l1,
        }


class BufferPayload(BaseModel):
    """Caller-owned numeric buffer: planar float64, little-endian, base64."""

    height: int
    width: int
    channels: int
    layout: str = "planar"
    data_b64: str

    def to_array(self) -> np.ndarray:
        """Decode to the internal (H, W, C) layout."""
        if self.layout != "planar":
            raise ShapeMismatchError(f"unsupported buffer layout {self.layout!r}")
        if self.height < 1 or self.width < 1 or self.channels not in (1, 3):
            raise ShapeMismatchError(
                f"bad buffer dimensions {self.height}x{self.width}x{self.channels}"
            )
        try:
            raw = base64.b64decode(self.data_b64, validate=True)
        except (binascii.Error, ValueError) as exc:
            raise ShapeMismatchError(f"undecodable buffer data: {exc}") from exc
        expected = self.height * self.width * self.channels * 8
        if len(raw) != expected:
            raise ShapeMismatchError(
                f"buffer holds {len(raw)} bytes, expected {expected}"
            )
        flat = np.frombuffer(raw, dtype="<f8")
        planes = flat.reshape(self.channels, self.height, self.width)
        return np.ascontiguousarray(planes.transpose(1, 2, 0))

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "BufferPayload":
        h, w, c = arr.shape
        planar = np.ascontiguousarray(arr.transpose(2, 0, 1)).astype("<f8")
        return cls(
            height=h,
            width=w,
            channels=c,
            layout="planar",
            data_b64=base64.b64encode(planar.tobytes()).decode("ascii"),
        )


class ScaleEntry(BaseModel):
    scale: int
    per_channel: list[float]


class LossTerms(BaseModel):
    total: float
    l1_term: float
    freq_term: float
    lam: float = Field(alias="lambda")
    per_scale: list[ScaleEntry]

    model_config = ConfigDict(populate_by_name=True)

    @classmethod
    def from_report(cls, report: LossReport) -> "LossTerms":
        return cls(
            total=report.total,
            l1_term=report.l1_term,
            freq_term=report.freq_term,
            lam=report.lam,
            per_scale=[
                ScaleEntry(scale=k, per_channel=list(v)) for k, v in report.per_scale
            ],
        )


class BufferLossRequest(BaseModel):
    pred: BufferPayload
    target: BufferPayload
    config: LossSettings = LossSettings()


class BufferLossResponse(BaseModel):
    status: int = STATUS_OK
    result: LossTerms


class BufferGradientResponse(BaseModel):
    status: int = STATUS_OK
    result: LossTerms
    grad: BufferPayload


class StatusError(BaseModel):
    status: int
    error: str


class FilePayload(BaseModel):
    name: str
    content_b64: str

    def raw(self) -> bytes:
        return base64.b64decode(self.content_b64)


class CompareRequest(BaseModel):
    image_a: FilePayload
    image_b: FilePayload
    config: LossSettings = LossSettings()
    crop: bool = False


class InputDigest(BaseModel):
    name: str
    sha256: str


class CropInfo(BaseModel):
    applied: bool
    original_a: list[int]
    original_b: list[int]
    cropped: list[int]


class CompareLossResponse(BaseModel):
    result: LossTerms
    crop: CropInfo
    inputs: list[InputDigest]
    config: dict


class MetricsRequest(BaseModel):
    image_a: FilePayload
    image_b: FilePayload
    crop: bool = False


class MetricsResponse(BaseModel):
    psnr: float | str
    ssim: float
    mse: float
    crop: CropInfo
    inputs: list[InputDigest]
    config: dict


class SpectrumRequest(BaseModel):
    image: FilePayload
    transform: str = "dct"


class SpectrumPlane(BaseModel):
    channel: int
    data_b64: str
    header: str


class SpectrumResponse(BaseModel):
    transform: str
    height: int
    width: int
    channels: int
    convention: str
    planes: list[SpectrumPlane]
    inputs: list[InputDigest]
    config: dict


class DemoRequest(BaseModel):
    seed: int = 2024
    synthetic: int | None = None
    images: list[FilePayload] | None = None
    epochs: int | None = None
    image_size: int | None = None
    gain: float | None = None
    gamma: float | None = None
    noise_sigma: float | None = None
    lr: float | None = None
    lambda_dct: float | None = None
    lambda_fft: float | None = None
    scales: int | None = None


class ServiceError(BaseModel):
    kind: str  # "input" | "runtime"
    error: str
