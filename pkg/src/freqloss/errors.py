"""Exception types shared across the package."""


class FreqlossError(Exception):
    """Base class for all package-specific errors."""


class UnsupportedFormatError(FreqlossError):
    """Image file is readable but not 8-bit grayscale/RGB PNG or JPEG."""


class DecodeError(FreqlossError):
    """Image file exists but cannot be decoded."""


class ImageTooSmallError(FreqlossError):
    """Image dimensions are below the minimum required by an operation."""


class OddDimensionError(FreqlossError):
    """Operation requires even height and width."""


class ShapeMismatchError(FreqlossError):
    """Two inputs that must share a shape do not."""


class BadConfigError(FreqlossError):
    """Loss configuration contains an invalid value."""


class DivergenceError(FreqlossError):
    """Training produced a non-finite loss."""

    def __init__(self, message: str, epoch: int):
        super().__init__(message)
        self.epoch = epoch
