"""sRGB <-> CIE-Lab (D65) for filtering in a perceptual color space."""
from enum import Enum

import numpy as np

from .core import Image
from .errors import DimensionMismatch

# linear sRGB -> XYZ, D65 (IEC 61966-2-1)
RGB_TO_XYZ = np.array([
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
])
XYZ_TO_RGB = np.linalg.inv(RGB_TO_XYZ)
# white point as the image of RGB (1, 1, 1), so neutral grays land exactly on a = b = 0
WHITE_D65 = RGB_TO_XYZ.sum(axis=1)

_EPS = (6.0 / 29.0) ** 3
_KAPPA = 3.0 * (6.0 / 29.0) ** 2


class ColorSpace(str, Enum):
    RGB = "rgb"
    LAB = "lab"


def _require_rgb(img):
    if img.channels != 3:
        raise DimensionMismatch(f"color conversion needs 3 channels, got {img.channels}")


def srgb_to_linear(c):
    return np.where(c <= 0.04045, c / 12.92, ((np.maximum(c, 0.04045) + 0.055) / 1.055) ** 2.4)


def linear_to_srgb(c):
    c = np.maximum(c, 0.0)
    return np.where(c <= 0.0031308, 12.92 * c, 1.055 * np.maximum(c, 0.0031308) ** (1 / 2.4) - 0.055)


def _f(t):
    return np.where(t > _EPS, np.cbrt(t), t / _KAPPA + 4.0 / 29.0)


def _f_inv(t):
    return np.where(t > 6.0 / 29.0, t**3, _KAPPA * (t - 4.0 / 29.0))


def rgb_to_lab(img):
    """8-bit-range sRGB image to Lab (L in [0, 100])."""
    _require_rgb(img)
    lin = srgb_to_linear(img.data / 255.0)
    xyz = np.einsum("ij,jhw->ihw", RGB_TO_XYZ, lin) / WHITE_D65[:, None, None]
    fx, fy, fz = _f(xyz)
    return Image(np.stack([116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)]))


def lab_to_rgb(img):
    """Inverse of ``rgb_to_lab``; out-of-gamut colors are clamped to [0, 255]."""
    _require_rgb(img)
    L, a, b = img.data
    fy = (L + 16.0) / 116.0
    xyz = np.stack([_f_inv(fy + a / 500.0), _f_inv(fy), _f_inv(fy - b / 200.0)]) * WHITE_D65[:, None, None]
    lin = np.einsum("ij,jhw->ihw", XYZ_TO_RGB, xyz)
    return Image(np.clip(255.0 * linear_to_srgb(lin), 0.0, 255.0))
