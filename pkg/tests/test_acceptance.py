"""Acceptance suite: one test per release criterion, at the stated tolerance.

Each test prints a `[PASS]`/`[FAIL]` line (visible with `pytest -s` or in the
captured output of failures). The full-benchmark ablation test is the slow
one; the whole module is sized to finish well within a coffee break on a
laptop CPU.
"""

import time

import numpy as np
import pytest
from helpers import fd_gradient, rel_gradient_error, sample_smooth_pair

from freqloss.floss import (
    LossConfig,
    loss_gradient,
    masked_loss,
    multi_scale_loss,
    single_scale_loss,
)
from freqloss.metrics import psnr, ssim
from freqloss.spectral import dct2, fft2, idct2, naive_dct2, naive_dft2
from freqloss.toytrain import DemoConfig, run_demo

VARIANTS = ("dct", "fft")


def report(name: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


class TestAcceptance:
    def test_transform_oracle_equivalence(self):
        # Fast dct2/fft2 vs brute-force oracles on every size 1..16 in both
        # axes (256 seeded planes per transform), max abs error < 1e-9, < 30 s.
        started = time.time()
        rng = np.random.default_rng(1001)
        worst_dct = 0.0
        worst_dft = 0.0
        planes = 0
        for h in range(1, 17):
            for w in range(1, 17):
                plane = rng.random((h, w))
                worst_dct = max(worst_dct, float(np.max(np.abs(dct2(plane) - naive_dct2(plane)))))
                worst_dft = max(worst_dft, float(np.max(np.abs(fft2(plane) - naive_dft2(plane)))))
                planes += 1
        elapsed = time.time() - started
        report(
            "transform oracle equivalence",
            worst_dct < 1e-9 and worst_dft < 1e-9 and planes >= 100 and elapsed < 30.0,
            f"dct {worst_dct:.2e}, dft {worst_dft:.2e}, {planes} planes, {elapsed:.1f}s",
        )

    def test_orthonormality_and_roundtrip(self):
        rng = np.random.default_rng(1002)
        worst_ratio = 0.0
        for _ in range(50):
            x = rng.random((int(rng.integers(1, 65)), int(rng.integers(1, 65))))
            ratio = np.linalg.norm(dct2(x)) / np.linalg.norm(x)
            worst_ratio = max(worst_ratio, abs(ratio - 1.0))
        x = rng.random((64, 64))
        roundtrip = float(np.max(np.abs(idct2(dct2(x)) - x)))
        report(
            "orthonormality and Parseval round-trip",
            worst_ratio < 1e-12 and roundtrip < 1e-10,
            f"norm ratio err {worst_ratio:.2e}, 64x64 round-trip {roundtrip:.2e}",
        )

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_loss_axioms(self, variant):
        rng = np.random.default_rng(1003)
        config = LossConfig(variant=variant, scales=3, lam=1.0)
        ok = True
        for i in range(100):
            channels = 3 if i % 2 else 1
            a = rng.random((8, 8, channels))
            b = rng.random((8, 8, channels))
            fwd = multi_scale_loss(a, b, config)
            ok &= fwd.total >= 0.0
            ok &= fwd.total == multi_scale_loss(b, a, config).total
            s = float(rng.uniform(-2.0, 2.0))
            ok &= abs(multi_scale_loss(s * a, s * b, config).total - abs(s) * fwd.total) < 1e-12
            ok &= multi_scale_loss(a, a, config).total == 0.0
            if variant == "dct":
                ok &= fwd.total > 0.0  # distinct random pairs never collide
        report(f"loss axioms ({variant})", ok, "100 seeded pairs")

    @pytest.mark.parametrize("variant", VARIANTS)
    def test_gradient_correctness(self, variant):
        # >= 100 seeded instances per variant across 8x8 and 16x16; near-zero
        # coefficient differences are re-sampled before probing.
        rng = np.random.default_rng(1004)
        config = LossConfig(variant=variant, scales=3, lam=1.0)
        worst = 0.0
        for size in (8, 16):
            for _ in range(60):
                a, b = sample_smooth_pair(rng, size, size, 1, config)
                analytic = loss_gradient(a, b, config)
                fd = fd_gradient(a, b, config)
                worst = max(worst, rel_gradient_error(analytic, fd))
        report(
            f"gradient vs central differences ({variant})",
            worst < 1e-5,
            f"120 instances, max rel err {worst:.2e}",
        )

    def test_end_to_end_parameter_gradient(self):
        from freqloss.floss import multi_scale_loss as msl
        from freqloss.toytrain import ToyModel, model_forward, model_gradient
        from helpers import min_coeff_gap

        rng = np.random.default_rng(1005)
        worst = 0.0
        for variant in VARIANTS:
            config = LossConfig(variant=variant, scales=3, lam=1.0)
            instances = 0
            while instances < 10:
                img = rng.random((8, 8, 3))
                clean = rng.random((8, 8, 3))
                model = ToyModel(
                    gains=rng.uniform(0.8, 1.2, 3),
                    biases=rng.uniform(-0.1, 0.1, 3),
                    kernel=rng.normal(0.0, 0.2, (3, 3)),
                )
                if min_coeff_gap(model_forward(model, img), clean, config) <= 1e-3:
                    continue
                instances += 1
                upstream = loss_gradient(model_forward(model, img), clean, config)
                g = model_gradient(model, img, upstream)
                analytic = np.concatenate([g.gains, g.biases, g.kernel.ravel()])
                fd = []
                h = 1e-6
                for mutate in (
                    [lambda m, d, c=c: m.gains.__setitem__(c, m.gains[c] + d) for c in range(3)]
                    + [lambda m, d, c=c: m.biases.__setitem__(c, m.biases[c] + d) for c in range(3)]
                    + [
                        lambda m, d, i=i, j=j: m.kernel.__setitem__((i, j), m.kernel[i, j] + d)
                        for i in range(3)
                        for j in range(3)
                    ]
                ):
                    plus, minus = model.copy(), model.copy()
                    mutate(plus, +h)
                    mutate(minus, -h)
                    fd.append(
                        (
                            msl(model_forward(plus, img), clean, config).total
                            - msl(model_forward(minus, img), clean, config).total
                        )
                        / (2.0 * h)
                    )
                worst = max(worst, rel_gradient_error(analytic, np.asarray(fd)))
        report(
            "composed model-parameter gradient",
            worst < 1e-5,
            f"max rel err {worst:.2e}",
        )

    def test_hand_computable_values(self):
        a = np.ones((2, 2, 1))
        b = np.zeros((2, 2, 1))
        dct_value = single_scale_loss(a, b, "dct")[0]
        fft_value = single_scale_loss(a, b, "fft")[0]
        base = np.zeros((16, 16, 3))
        psnr_value = psnr(base, base + 0.1)
        rng = np.random.default_rng(1006)
        x = rng.random((16, 16, 3))
        ssim_value = ssim(x, x)
        ok = (
            abs(dct_value - 0.5) < 1e-12
            and abs(fft_value - 1.0) < 1e-12
            and abs(psnr_value - 20.0) < 1e-12
            and abs(ssim_value - 1.0) < 1e-12
        )
        report(
            "hand-computable values",
            ok,
            f"dct {dct_value}, fft {fft_value}, psnr {psnr_value}, ssim {ssim_value}",
        )

    def test_directional_ablation(self):
        # The causal claim at toy scale: same model/data/seed/epochs, adding
        # the frequency term must not lower held-out PSNR or SSIM.
        demo = DemoConfig()
        assert demo.degrade.gain <= 0.5
        assert demo.degrade.noise_sigma >= 0.05
        started = time.time()
        result = run_demo(demo)
        elapsed = time.time() - started
        assert result["benchmark"]["heldout_count"] >= 20
        rows = {row["loss"]: row for row in result["table"]}
        l1 = rows["L1"]
        ok = (
            rows["L1+DCT"]["psnr"] >= l1["psnr"]
            and rows["L1+FFT"]["psnr"] >= l1["psnr"]
            and rows["L1+DCT"]["ssim"] >= l1["ssim"]
            and rows["L1+FFT"]["ssim"] >= l1["ssim"]
            and elapsed < 300.0
        )
        report(
            "directional ablation",
            ok,
            "PSNR/SSIM L1 {:.3f}/{:.4f}, DCT {:.3f}/{:.4f}, FFT {:.3f}/{:.4f}, {:.0f}s".format(
                l1["psnr"], l1["ssim"],
                rows["L1+DCT"]["psnr"], rows["L1+DCT"]["ssim"],
                rows["L1+FFT"]["psnr"], rows["L1+FFT"]["ssim"],
                elapsed,
            ),
        )

    def test_demo_determinism(self, tmp_path, capsys):
        from freqloss.cli import main

        args = [
            "demo", "--synthetic", "8", "--seed", "31", "--epochs", "3",
            "--image-size", "16",
        ]
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        code1 = main(args + ["--out", str(out1)])
        code2 = main(args + ["--out", str(out2)])
        capsys.readouterr()
        ok = code1 == 0 and code2 == 0 and out1.read_bytes() == out2.read_bytes()
        report("demo determinism (byte-identical report.json)", ok)

    def test_masked_loss_composition(self):
        rng = np.random.default_rng(1007)
        ok = True
        for variant in VARIANTS:
            config = LossConfig(variant=variant, scales=3, lam=1.0)
            for _ in range(10):
                a = rng.random((8, 8, 3))
                b = rng.random((8, 8, 3))
                masked = masked_loss(a, b, np.ones((8, 8)), config)
                plain = multi_scale_loss(a, b, config)
                ok &= abs(masked.total - plain.total) < 1e-12
                ok &= abs(masked.l1_term - plain.l1_term) < 1e-12
                ok &= abs(masked.freq_term - plain.freq_term) < 1e-12
        report("masked loss with all-ones mask equals plain loss", ok)
