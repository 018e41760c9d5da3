"""FastAPI service wrapping the loss, metrics, spectrum, and demo operations."""

from __future__ import annotations

import base64

import numpy as np
from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import (
    BadConfigError,
    DecodeError,
    DivergenceError,
    FreqlossError,
    ImageTooSmallError,
    ShapeMismatchError,
    UnsupportedFormatError,
)
from ..floss import loss_gradient, multi_scale_loss
from ..jsonreport import sanitize_floats, sha256_hex
from ..metrics import mse, psnr, ssim
from ..spectral import dct2, fft2
from ..tensorimg import crop_to_multiple, decode_image
from ..toytrain import DemoConfig, DegradeParams, HyperParams, run_demo
from . import schemas as sc

DCT_CONVENTION = (
    "orthonormal separable 2D DCT-II: X_k = s_k*sum_n x_n*cos(pi*(2n+1)*k/(2N)), "
    "s_0=sqrt(1/N), s_k=sqrt(2/N); row-major float64 little-endian"
)
FFT_CONVENTION = (
    "unnormalized forward 2D DFT: X(u,v) = sum_{m,n} x(m,n)*exp(-2pi*i*(u*m/M+v*n/N)); "
    "row-major interleaved (re,im) float64 little-endian"
)


def _status_error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=400, content={"status": status, "error": message})


def _input_error(message: str) -> JSONResponse:
    return JSONResponse(status_code=400, content={"kind": "input", "error": message})


def _runtime_error(message: str) -> JSONResponse:
    return JSONResponse(status_code=500, content={"kind": "runtime", "error": message})


def _decode_buffers(req: sc.BufferLossRequest):
    """Shared decode/validate path for the buffer endpoints."""
    try:
        config = req.config.to_config()
    except BadConfigError as exc:
        return _status_error(sc.STATUS_CONFIG, str(exc))
    try:
        pred = req.pred.to_array()
        target = req.target.to_array()
    except (ShapeMismatchError, FreqlossError) as exc:
        return _status_error(sc.STATUS_SHAPE, str(exc))
    if pred.shape != target.shape:
        return _status_error(
            sc.STATUS_SHAPE, f"shape mismatch: {pred.shape} vs {target.shape}"
        )
    m = 2 ** (config.scales - 1)
    if pred.shape[0] % m or pred.shape[1] % m:
        return _status_error(
            sc.STATUS_PYRAMID,
            f"dimensions {pred.shape[0]}x{pred.shape[1]} are not multiples of "
            f"{m} required by scales={config.scales}",
        )
    return config, pred, target


def _load_pair(a: sc.FilePayload, b: sc.FilePayload):
    raw_a, raw_b = a.raw(), b.raw()
    imgs = []
    for payload, raw in ((a, raw_a), (b, raw_b)):
        try:
            imgs.append(decode_image(raw))
        except (UnsupportedFormatError, DecodeError) as exc:
            raise DecodeError(f"{payload.name}: {exc}") from exc
    digests = [
        sc.InputDigest(name=a.name, sha256=sha256_hex(raw_a)),
        sc.InputDigest(name=b.name, sha256=sha256_hex(raw_b)),
    ]
    return imgs[0], imgs[1], digests


def _align_pair(img_a: np.ndarray, img_b: np.ndarray, crop: bool, multiple: int):
    """Optional shape alignment (--crop) plus the automatic pyramid crop."""
    orig_a, orig_b = list(img_a.shape[:2]), list(img_b.shape[:2])
    if img_a.shape[2] != img_b.shape[2]:
        raise ShapeMismatchError(
            f"channel mismatch: {img_a.shape[2]} vs {img_b.shape[2]}"
        )
    if img_a.shape[:2] != img_b.shape[:2]:
        if not crop:
            raise ShapeMismatchError(
                f"image sizes differ ({orig_a} vs {orig_b}); pass crop to align"
            )
        h = min(img_a.shape[0], img_b.shape[0])
        w = min(img_a.shape[1], img_b.shape[1])
        img_a, img_b = img_a[:h, :w], img_b[:h, :w]
    if multiple > 1:
        img_a = crop_to_multiple(img_a, multiple)
        img_b = crop_to_multiple(img_b, multiple)
    applied = list(img_a.shape[:2]) != orig_a or list(img_b.shape[:2]) != orig_b
    info = sc.CropInfo(
        applied=applied,
        original_a=orig_a,
        original_b=orig_b,
        cropped=list(img_a.shape[:2]),
    )
    return img_a, img_b, info


def create_app() -> FastAPI:
    app = FastAPI(title="freqloss", version=__version__)

    @app.get("/v1/health")
    def health() -> dict:
        return {"status": "ok", "name": "freqloss", "version": __version__}

    @app.post("/v1/loss")
    def buffer_loss(req: sc.BufferLossRequest):
        decoded = _decode_buffers(req)
        if isinstance(decoded, JSONResponse):
            return decoded
        config, pred, target = decoded
        report = multi_scale_loss(pred, target, config)
        return sc.BufferLossResponse(
            status=sc.STATUS_OK, result=sc.LossTerms.from_report(report)
        )

    @app.post("/v1/gradient")
    def buffer_gradient(req: sc.BufferLossRequest):
        decoded = _decode_buffers(req)
        if isinstance(decoded, JSONResponse):
            return decoded
        config, pred, target = decoded
        report = multi_scale_loss(pred, target, config)
        grad = loss_gradient(pred, target, config)
        return sc.BufferGradientResponse(
            status=sc.STATUS_OK,
            result=sc.LossTerms.from_report(report),
            grad=sc.BufferPayload.from_array(grad),
        )

    @app.post("/v1/compare/loss")
    def compare_loss(req: sc.CompareRequest):
        try:
            config = req.config.to_config()
            img_a, img_b, digests = _load_pair(req.image_a, req.image_b)
            img_a, img_b, crop_info = _align_pair(
                img_a, img_b, req.crop, 2 ** (config.scales - 1)
            )
        except (FreqlossError, ValueError) as exc:
            return _input_error(str(exc))
        report = multi_scale_loss(img_a, img_b, config)
        return sc.CompareLossResponse(
            result=sc.LossTerms.from_report(report),
            crop=crop_info,
            inputs=digests,
            config={**req.config.echo(), "crop": req.crop},
        )

    @app.post("/v1/compare/metrics")
    def compare_metrics(req: sc.MetricsRequest):
        try:
            img_a, img_b, digests = _load_pair(req.image_a, req.image_b)
            img_a, img_b, crop_info = _align_pair(img_a, img_b, req.crop, 1)
            result = {
                "psnr": psnr(img_a, img_b),
                "ssim": ssim(img_a, img_b),
                "mse": mse(img_a, img_b),
            }
        except (FreqlossError, ValueError) as exc:
            return _input_error(str(exc))
        return sc.MetricsResponse(
            **sanitize_floats(result),
            crop=crop_info,
            inputs=digests,
            config={"crop": req.crop, "peak": 1.0},
        )

    @app.post("/v1/spectrum")
    def spectrum(req: sc.SpectrumRequest):
        if req.transform not in ("dct", "fft"):
            return _input_error(f"transform must be dct or fft, got {req.transform!r}")
        raw = req.image.raw()
        try:
            img = decode_image(raw)
        except (UnsupportedFormatError, DecodeError) as exc:
            return _input_error(f"{req.image.name}: {exc}")
        h, w, channels = img.shape
        convention = DCT_CONVENTION if req.transform == "dct" else FFT_CONVENTION
        dtype = "<f8" if req.transform == "dct" else "<c16"
        planes = []
        for c in range(channels):
            if req.transform == "dct":
                coeffs = dct2(img[:, :, c]).astype("<f8")
            else:
                coeffs = fft2(img[:, :, c]).astype("<c16")
            header = "\n".join(
                [
                    "freqloss-spectrum/1",
                    f"transform: {req.transform}",
                    f"height: {h}",
                    f"width: {w}",
                    f"channel: {c}",
                    f"dtype: {dtype}",
                    "layout: row-major",
                    f"convention: {convention}",
                ]
            ) + "\n"
            planes.append(
                sc.SpectrumPlane(
                    channel=c,
                    data_b64=base64.b64encode(coeffs.tobytes()).decode("ascii"),
                    header=header,
                )
            )
        return sc.SpectrumResponse(
            transform=req.transform,
            height=h,
            width=w,
            channels=channels,
            convention=convention,
            planes=planes,
            inputs=[sc.InputDigest(name=req.image.name, sha256=sha256_hex(raw))],
            config={"transform": req.transform},
        )

    @app.post("/v1/demo")
    def demo(req: sc.DemoRequest):
        base = DemoConfig()
        try:
            demo_cfg = DemoConfig(
                seed=req.seed,
                image_count=req.synthetic if req.synthetic else base.image_count,
                image_size=req.image_size or base.image_size,
                degrade=DegradeParams(
                    gain=req.gain if req.gain is not None else base.degrade.gain,
                    gamma=req.gamma if req.gamma is not None else base.degrade.gamma,
                    noise_sigma=(
                        req.noise_sigma
                        if req.noise_sigma is not None
                        else base.degrade.noise_sigma
                    ),
                ).validate(),
                hyper=HyperParams(
                    lr=req.lr if req.lr is not None else base.hyper.lr,
                    epochs=req.epochs if req.epochs is not None else base.hyper.epochs,
                ),
                scales=req.scales or base.scales,
                lam_dct=req.lambda_dct if req.lambda_dct is not None else base.lam_dct,
                lam_fft=req.lambda_fft if req.lambda_fft is not None else base.lam_fft,
            )
            inputs = []
            clean_images = None
            if req.images is not None:
                if req.synthetic is not None:
                    return _input_error("pass either synthetic count or images, not both")
                if len(req.images) < 5:
                    return _input_error(f"need at least 5 images, got {len(req.images)}")
                clean_images = []
                multiple = 2 ** (demo_cfg.scales - 1)
                for payload in req.images:
                    raw = payload.raw()
                    img = crop_to_multiple(decode_image(raw), multiple)
                    if min(img.shape[0], img.shape[1]) < 12:
                        raise ImageTooSmallError(
                            f"{payload.name}: images must be at least 12x12 after crop"
                        )
                    clean_images.append(img)
                    inputs.append(
                        sc.InputDigest(name=payload.name, sha256=sha256_hex(raw))
                    )
            elif demo_cfg.image_count < 5:
                return _input_error(
                    f"synthetic count must be >= 5, got {demo_cfg.image_count}"
                )
            if demo_cfg.hyper.epochs < 0:
                return _input_error("epochs must be >= 0")
        except (FreqlossError, ValueError) as exc:
            return _input_error(str(exc))
        try:
            report = run_demo(demo_cfg, clean_images)
        except DivergenceError as exc:
            return _runtime_error(f"training diverged: {exc}")
        return JSONResponse(
            content=sanitize_floats(
                {
                    "report": report,
                    "inputs": [d.model_dump() for d in inputs],
                    "config": report["benchmark"] | report["hyper"],
                }
            )
        )

    return app


app = create_app()
