#!/usr/bin/env python3
"""Generate cross-boundary fixtures: seeded inputs with native expected values.

The TypeScript tests replay these requests against a live service and demand
bit-exact agreement, so the client's wire encoding is proven equivalent to
the native code path. Re-run after any change to the loss semantics:

    python3 scripts/make_fixtures.py > tests/fixtures/cross_boundary.json
"""

import json
import sys

import numpy as np

from freqloss.floss import LossConfig, loss_gradient, multi_scale_loss
from freqloss.service.schemas import BufferPayload
from freqloss.spectral import dct2, fft2
from freqloss.tensorimg import build_pyramid


def payload(arr):
    return BufferPayload.from_array(arr).model_dump()


def coeff_gap(a, b, config):
    gaps = [float(np.min(np.abs(a - b)))]
    transform = dct2 if config.variant == "dct" else fft2
    for l1, l2 in zip(build_pyramid(a, config.scales), build_pyramid(b, config.scales)):
        for c in range(a.shape[2]):
            gaps.append(float(np.min(np.abs(transform(l1[:, :, c]) - transform(l2[:, :, c])))))
    return min(gaps)


def expected(a, b, config):
    report = multi_scale_loss(a, b, config)
    grad = loss_gradient(a, b, config)
    return {
        "total": report.total,
        "l1_term": report.l1_term,
        "freq_term": report.freq_term,
        "per_scale": [
            {"scale": k, "per_channel": list(v)} for k, v in report.per_scale
        ],
        "grad_b64": BufferPayload.from_array(grad).data_b64,
    }


def main():
    rng = np.random.default_rng(424242)
    cases = []
    variants = ("dct", "fft")
    lambdas = (0.5, 1.0, 2.0)
    for i in range(60):
        config = LossConfig(
            variant=variants[i % 2],
            scales=1 + (i % 2 == 0),
            lam=lambdas[i % 3],
            include_l1=bool(i % 2),
        )
        a = rng.random((4, 4, 1))
        b = rng.random((4, 4, 1))
        cases.append((f"small-{i}", a, b, config))
    for i in range(40):
        config = LossConfig(variant=variants[i % 2], scales=3, lam=lambdas[i % 3])
        a = rng.random((8, 8, 3))
        b = rng.random((8, 8, 3))
        cases.append((f"color-{i}", a, b, config))

    fd_cases = []
    for variant in variants:
        config = LossConfig(variant=variant, scales=2, lam=1.0, include_l1=True)
        while True:
            a = rng.random((4, 4, 1))
            b = rng.random((4, 4, 1))
            if coeff_gap(a, b, config) > 1e-3:
                break
        fd_cases.append((f"fd-{variant}", a, b, config))

    def entry(name, a, b, config):
        return {
            "name": name,
            "config": {
                "variant": config.variant,
                "scales": config.scales,
                "lambda": config.lam,
                "include_l1": config.include_l1,
            },
            "pred": payload(a),
            "target": payload(b),
            "expected": expected(a, b, config),
        }

    doc = {
        "seed": 424242,
        "cases": [entry(*case) for case in cases],
        "fd_cases": [entry(*case) for case in fd_cases],
    }
    json.dump(doc, sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
