"""Multi-scale frequency-domain image loss (DCT/FFT variants) with analytic
gradients, image-quality metrics, and a deterministic training ablation."""

from .errors import (
    BadConfigError,
    DecodeError,
    DivergenceError,
    FreqlossError,
    ImageTooSmallError,
    OddDimensionError,
    ShapeMismatchError,
    UnsupportedFormatError,
)
from .floss import LossConfig, LossReport, loss_gradient, masked_loss, multi_scale_loss, single_scale_loss
from .metrics import SsimParams, mse, psnr, ssim
from .spectral import dct2, fft2, idct2, naive_dct2, naive_dft2
from .tensorimg import (
    build_pyramid,
    crop_to_multiple,
    decode_image,
    downsample2x,
    load_image,
    save_image,
)
from .toytrain import (
    DegradeParams,
    DemoConfig,
    HyperParams,
    ToyModel,
    degrade,
    evaluate,
    model_forward,
    model_gradient,
    run_demo,
    synthesize_corpus,
    train,
)

__version__ = "0.1.0"
