"""Exception and warning types raised by the filtering pipeline."""


class McsfError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(McsfError, ValueError):
    pass


class NotSymmetric(McsfError, ValueError):
    pass


class NotPositiveDefinite(McsfError, ValueError):
    pass


class DegenerateDenominator(McsfError, ArithmeticError):
    """The accumulated normalization fell below the usable threshold.

    ``count`` is the number of offending pixels and ``pixel`` the first one
    in row-major order, as ``(x, y)``.
    """

    def __init__(self, count, pixel, value):
        self.count = count
        self.pixel = pixel
        self.value = value
        super().__init__(
            f"|Re Z| below threshold at {count} pixel(s); first at (x={pixel[0]}, y={pixel[1]}) "
            f"with Re Z = {value:.3e}; increase the number of trials"
        )


class ZeroMse(McsfError, ArithmeticError):
    pass


class ImageFormatError(McsfError, ValueError):
    pass


class UnsupportedFormat(ImageFormatError):
    pass


class CorruptHeader(ImageFormatError):
    pass


class TruncatedData(ImageFormatError):
    pass


class ParameterWarning(UserWarning):
    """Raised-cosine order too low for the range of intensity differences."""
