import math

import numpy as np

from .errors import DimensionMismatch, ZeroMse


def mse(a, b):
    """Mean squared error over all channels and pixels, on raw float samples."""
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot compare images of shape {a.shape} and {b.shape}")
    return float(np.mean((a.data - b.data) ** 2))


def mse_db(a, b):
    """``10 log10(mse)``; raises ZeroMse for identical images."""
    m = mse(a, b)
    if m == 0.0:
        raise ZeroMse("images are identical; MSE in dB is undefined")
    return 10.0 * math.log10(m)
