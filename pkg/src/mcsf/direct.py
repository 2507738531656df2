"""Brute-force bilateral filtering over the square spatial window.

``direct_bilateral`` evaluates the exact Gaussian range kernel and is the
reference every accuracy and speed figure is measured against.
``direct_bilateral_with_sampled_kernel`` swaps in the Monte Carlo range
kernel so that the fast filter can be checked to rounding error.
"""
import numpy as np

from . import _backend
from .core import BoundaryPolicy, Image, pad_planes
from .errors import DegenerateDenominator, DimensionMismatch

DEGENERATE_Z = 1e-9


def _check_dims(f, cov):
    if f.channels != cov.dim:
        raise DimensionMismatch(f"image has {f.channels} channels but covariance is {cov.dim}x{cov.dim}")


def direct_bilateral(f, kernel, cov, boundary=BoundaryPolicy.SYMMETRIC):
    _check_dims(f, cov)
    R = kernel.window_radius
    padded = pad_planes(f.data, R, R, boundary)
    out = _backend.kernels().direct_bilateral(padded, kernel.window(), np.ascontiguousarray(cov.C_inv))
    return Image(out)


def check_denominator(z_re):
    bad = np.abs(z_re) < DEGENERATE_Z
    if bad.any():
        y, x = np.unravel_index(np.argmax(bad), bad.shape)
        raise DegenerateDenominator(int(bad.sum()), (int(x), int(y)), float(z_re[y, x]))


def direct_bilateral_with_sampled_kernel(f, kernel, params, cov, trials,
                                         boundary=BoundaryPolicy.SYMMETRIC, chunk=32):
    """Windowed sums with the range kernel replaced by its Monte Carlo estimate.

    Weights use the normalized spatial taps and undivided trial weights, so
    the accumulated denominator is on the same scale as the fast filter's.
    """
    _check_dims(f, cov)
    if trials.dim != f.channels or params.dim != f.channels:
        raise DimensionMismatch("trial/parameter dimension does not match the image")
    R = kernel.window_radius
    H, W = f.height, f.width
    window = kernel.window()
    window = window / window.sum()
    g = np.einsum("kl,khw->lhw", cov.Q, f.data)
    fp = pad_planes(f.data, R, R, boundary)
    gp = pad_planes(g, R, R, boundary)
    freqs = trials.Y * params.gammas  # (T, d)
    num = np.zeros((f.channels, H, W))
    den = np.zeros((H, W))
    for dy in range(2 * R + 1):
        for dx in range(2 * R + 1):
            dg = gp[:, dy:dy + H, dx:dx + W] - g
            psi = np.zeros((H, W))
            for s in range(0, len(trials), chunk):
                phase = np.tensordot(freqs[s:s + chunk], dg, axes=1)
                psi += np.tensordot(trials.weights[s:s + chunk], np.cos(phase), axes=1)
            wt = window[dy, dx] * psi
            den += wt
            num += wt * (fp[:, dy:dy + H, dx:dx + W] - f.data)
    check_denominator(den)
    return Image(f.data + num / den)
