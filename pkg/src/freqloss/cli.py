"""Command-line front door, implemented as a thin client of the HTTP service.

By default every subcommand talks to an in-process instance of the FastAPI
app (no socket needed); --server redirects the same requests to a running
instance. Exit codes: 0 success, 2 input error, 3 runtime/divergence error.
"""

from __future__ import annotations

import argparse
import base64
import json
import sys
import warnings
from pathlib import Path

import httpx

from . import __version__
from .jsonreport import build_report, dumps_canonical

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RUNTIME = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def make_client(server: str | None) -> httpx.Client:
    """HTTP client against --server, or the in-process app when unset."""
    if server:
        return httpx.Client(base_url=server.rstrip("/"), timeout=None)
    with warnings.catch_warnings():
        # starlette's TestClient import warns about its httpx dependency;
        # irrelevant noise for CLI users running the in-process app.
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app())


def _post(client: httpx.Client, path: str, payload: dict) -> dict:
    resp = client.post(path, json=payload)
    try:
        body = resp.json()
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed response from service: {exc}", EXIT_RUNTIME) from exc
    if resp.status_code == 200:
        return body
    kind = body.get("kind", "runtime")
    message = body.get("error", f"service returned HTTP {resp.status_code}")
    raise CliError(message, EXIT_INPUT if kind == "input" else EXIT_RUNTIME)


def _file_payload(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise CliError(f"no such file: {path}")
    return {
        "name": p.name,
        "content_b64": base64.b64encode(p.read_bytes()).decode("ascii"),
    }


def read_config_file(path: str) -> dict:
    """Parse `key = value` lines; '#' starts a comment; blank lines ignored."""
    values: dict[str, str] = {}
    p = Path(path)
    if not p.is_file():
        raise CliError(f"no such config file: {path}")
    for lineno, line in enumerate(p.read_text().splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise CliError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if not key:
            raise CliError(f"{path}:{lineno}: empty key")
        values[key] = value
    return values


_CONFIG_KEYS = {
    "variant": str,
    "scales": int,
    "lambda": float,
    "l1": lambda s: s.lower() in ("1", "true", "yes", "on"),
    "crop": lambda s: s.lower() in ("1", "true", "yes", "on"),
}


def _apply_config_file(args: argparse.Namespace) -> None:
    """File values fill in flags the user did not pass explicitly."""
    if not getattr(args, "config", None):
        return
    values = read_config_file(args.config)
    unknown = set(values) - set(_CONFIG_KEYS)
    if unknown:
        raise CliError(f"{args.config}: unknown config keys {sorted(unknown)}")
    for key, raw in values.items():
        dest = {"lambda": "lam", "l1": "l1"}.get(key, key)
        if getattr(args, dest, None) is None:
            try:
                setattr(args, dest, _CONFIG_KEYS[key](raw))
            except ValueError as exc:
                raise CliError(f"{args.config}: bad value for {key}: {raw!r} ({exc})")


def _loss_settings(args: argparse.Namespace) -> dict:
    return {
        "variant": args.variant if args.variant is not None else "dct",
        "scales": args.scales if args.scales is not None else 3,
        "lambda": args.lam if args.lam is not None else 1.0,
        "include_l1": args.l1 if args.l1 is not None else True,
    }


def _print_report(args: argparse.Namespace, command: str, config: dict,
                  inputs: list[dict], results: dict, human_lines: list[str]) -> None:
    if args.json:
        doc = build_report(command, config, inputs, results, version=__version__)
        sys.stdout.write(dumps_canonical(doc))
    else:
        for line in human_lines:
            print(line)


def cmd_loss(args: argparse.Namespace, client: httpx.Client) -> int:
    _apply_config_file(args)
    settings = _loss_settings(args)
    payload = {
        "image_a": _file_payload(args.image_a),
        "image_b": _file_payload(args.image_b),
        "config": settings,
        "crop": bool(args.crop),
    }
    body = _post(client, "/v1/compare/loss", payload)
    result = body["result"]
    crop = body["crop"]
    config = dict(settings, crop=bool(args.crop))
    human = [
        f"variant      {settings['variant']}",
        f"scales       {settings['scales']}",
        f"lambda       {settings['lambda']}",
        f"include_l1   {settings['include_l1']}",
        f"crop         {crop['cropped'][0]}x{crop['cropped'][1]}"
        + (" (applied)" if crop["applied"] else " (no-op)"),
        f"l1_term      {result['l1_term']:.12g}",
        f"freq_term    {result['freq_term']:.12g}",
        f"total        {result['total']:.12g}",
    ]
    for entry in result["per_scale"]:
        channels = " ".join(f"{v:.12g}" for v in entry["per_channel"])
        human.append(f"scale 1/{entry['scale']:<3} {channels}")
    _print_report(args, "loss", config, body["inputs"],
                  {"loss": result, "crop": crop}, human)
    return EXIT_OK


def cmd_metrics(args: argparse.Namespace, client: httpx.Client) -> int:
    _apply_config_file(args)
    payload = {
        "image_a": _file_payload(args.image_a),
        "image_b": _file_payload(args.image_b),
        "crop": bool(args.crop),
    }
    body = _post(client, "/v1/compare/metrics", payload)
    config = {"crop": bool(args.crop), "peak": 1.0}
    psnr_text = body["psnr"] if isinstance(body["psnr"], str) else f"{body['psnr']:.6f}"
    human = [
        f"psnr   {psnr_text}",
        f"ssim   {body['ssim']:.6f}",
        f"mse    {body['mse']:.12g}",
    ]
    results = {"psnr": body["psnr"], "ssim": body["ssim"], "mse": body["mse"],
               "crop": body["crop"]}
    _print_report(args, "metrics", config, body["inputs"], results, human)
    return EXIT_OK


def _spectrum_paths(out: Path, channels: int) -> list[Path]:
    if channels == 1:
        return [out]
    return [out.with_name(f"{out.stem}.c{c}{out.suffix}") for c in range(channels)]


def cmd_spectrum(args: argparse.Namespace, client: httpx.Client) -> int:
    payload = {
        "image": _file_payload(args.image),
        "transform": args.transform,
    }
    body = _post(client, "/v1/spectrum", payload)
    out = Path(args.out)
    paths = _spectrum_paths(out, body["channels"])
    written = []
    try:
        for plane, path in zip(body["planes"], paths):
            path.write_bytes(base64.b64decode(plane["data_b64"]))
            header_path = path.with_name(path.name + ".hdr")
            header_path.write_text(plane["header"])
            written.append({"channel": plane["channel"], "data": str(path),
                            "header": str(header_path)})
    except OSError as exc:
        raise CliError(f"cannot write spectrum dump: {exc}")
    config = {"transform": args.transform, "out": str(out)}
    results = {
        "transform": body["transform"],
        "height": body["height"],
        "width": body["width"],
        "channels": body["channels"],
        "convention": body["convention"],
        "files": written,
    }
    human = [f"wrote {w['data']} (+ {w['header']})" for w in written]
    _print_report(args, "spectrum", config, body["inputs"], results, human)
    return EXIT_OK


def cmd_demo(args: argparse.Namespace, client: httpx.Client) -> int:
    payload: dict = {"seed": args.seed}
    inputs: list[dict] = []
    if args.images:
        image_dir = Path(args.images)
        if not image_dir.is_dir():
            raise CliError(f"no such directory: {args.images}")
        files = sorted(
            p for p in image_dir.iterdir()
            if p.suffix.lower() in (".png", ".jpg", ".jpeg")
        )
        if len(files) < 5:
            raise CliError(f"need at least 5 images in {args.images}, found {len(files)}")
        payload["images"] = [_file_payload(str(p)) for p in files]
    else:
        payload["synthetic"] = args.synthetic
    for key in ("epochs", "image_size", "gain", "gamma", "noise_sigma", "lr",
                "lambda_dct", "lambda_fft", "scales"):
        value = getattr(args, key)
        if value is not None:
            payload[key] = value
    body = _post(client, "/v1/demo", payload)
    report = body["report"]
    inputs = body["inputs"]
    doc = build_report("demo", body["config"], inputs, report, version=__version__)
    text = dumps_canonical(doc)
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            raise CliError(f"cannot write report: {exc}")
    if args.json:
        sys.stdout.write(text)
    else:
        print(f"{'Loss':<8} {'PSNR':>10} {'SSIM':>8}")
        for row in report["table"]:
            psnr_text = row["psnr"] if isinstance(row["psnr"], str) else f"{row['psnr']:.4f}"
            ssim_text = row["ssim"] if isinstance(row["ssim"], str) else f"{row['ssim']:.4f}"
            print(f"{row['loss']:<8} {psnr_text:>10} {ssim_text:>8}")
        if args.out:
            print(f"report written to {args.out}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace, _client: httpx.Client | None) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freqloss",
        description="Frequency-domain image loss, metrics, and training demo.",
    )
    parser.add_argument("--version", action="version", version=f"freqloss {__version__}")
    parser.add_argument("--server", default=None,
                        help="URL of a running freqloss service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    loss = sub.add_parser("loss", help="multi-scale frequency loss between two images")
    loss.add_argument("image_a")
    loss.add_argument("image_b")
    loss.add_argument("--variant", choices=("dct", "fft"), default=None)
    loss.add_argument("--scales", type=int, default=None)
    loss.add_argument("--lambda", dest="lam", type=float, default=None)
    loss.add_argument("--no-l1", dest="l1", action="store_const", const=False, default=None)
    loss.add_argument("--crop", action="store_true",
                      help="crop both images to the common size on mismatch")
    loss.add_argument("--config", default=None, help="key = value config file")
    loss.add_argument("--json", action="store_true")
    loss.set_defaults(func=cmd_loss)

    metrics = sub.add_parser("metrics", help="PSNR/SSIM between two images")
    metrics.add_argument("image_a")
    metrics.add_argument("image_b")
    metrics.add_argument("--crop", action="store_true")
    metrics.add_argument("--config", default=None)
    metrics.set_defaults(variant=None, scales=None, lam=None, l1=None)
    metrics.add_argument("--json", action="store_true")
    metrics.set_defaults(func=cmd_metrics)

    spectrum = sub.add_parser("spectrum", help="dump DCT/FFT coefficients to disk")
    spectrum.add_argument("image")
    spectrum.add_argument("--transform", choices=("dct", "fft"), default="dct")
    spectrum.add_argument("--out", required=True)
    spectrum.add_argument("--json", action="store_true")
    spectrum.set_defaults(func=cmd_spectrum)

    demo = sub.add_parser("demo", help="L1 vs L1+DCT vs L1+FFT training ablation")
    source = demo.add_mutually_exclusive_group(required=True)
    source.add_argument("--images", default=None, help="directory of clean PNG/JPEG images")
    source.add_argument("--synthetic", type=int, default=None,
                        help="number of synthetic images to generate")
    demo.add_argument("--seed", type=int, default=2024)
    demo.add_argument("--epochs", type=int, default=None)
    demo.add_argument("--image-size", dest="image_size", type=int, default=None)
    demo.add_argument("--gain", type=float, default=None)
    demo.add_argument("--gamma", type=float, default=None)
    demo.add_argument("--noise-sigma", dest="noise_sigma", type=float, default=None)
    demo.add_argument("--lr", type=float, default=None)
    demo.add_argument("--lambda-dct", dest="lambda_dct", type=float, default=None)
    demo.add_argument("--lambda-fft", dest="lambda_fft", type=float, default=None)
    demo.add_argument("--scales", type=int, default=None)
    demo.add_argument("--out", default=None, help="write the JSON report here")
    demo.add_argument("--json", action="store_true")
    demo.set_defaults(func=cmd_demo)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8321)
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "serve":
            return cmd_serve(args, None)
        with make_client(args.server) as client:
            return args.func(args, client)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except httpx.HTTPError as exc:
        print(f"error: cannot reach service: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
