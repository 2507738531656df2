"""Image containers and boundary extension."""
from dataclasses import dataclass
from enum import Enum

import numpy as np


class BoundaryPolicy(str, Enum):
    SYMMETRIC = "symmetric-reflect"
    REPLICATE = "replicate-edge"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        aliases = {"symmetric": cls.SYMMETRIC, "reflect": cls.SYMMETRIC, "replicate": cls.REPLICATE,
                   "edge": cls.REPLICATE}
        v = str(value).lower()
        if v in aliases:
            return aliases[v]
        return cls(v)

    @property
    def numpy_mode(self):
        # np.pad "symmetric" is the half-sample reflection (edge sample repeated)
        return "symmetric" if self is BoundaryPolicy.SYMMETRIC else "edge"


def fold_index(i, n, policy=BoundaryPolicy.SYMMETRIC):
    """Map an arbitrary integer coordinate into ``[0, n)``."""
    if policy is BoundaryPolicy.REPLICATE:
        return min(max(i, 0), n - 1)
    period = 2 * n
    i %= period
    return i if i < n else period - 1 - i


class Image:
    """Planar multi-channel raster of float64 samples.

    ``data`` has shape ``(channels, height, width)``. The array is copied on
    construction and frozen, so an Image can be shared freely.
    """

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.array(data, dtype=np.float64, copy=True)
        if arr.ndim == 2:
            arr = arr[None]
        if arr.ndim != 3 or min(arr.shape) < 1:
            raise ValueError(f"expected (channels, height, width) data, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("image samples must be finite")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        self.data = arr

    @classmethod
    def from_interleaved(cls, pixels):
        """Build from an ``(height, width[, channels])`` array, e.g. what imaging libraries return."""
        arr = np.asarray(pixels)
        if arr.ndim == 2:
            return cls(arr[None])
        return cls(np.moveaxis(arr, -1, 0))

    def to_interleaved(self):
        return np.moveaxis(self.data, 0, -1).copy()

    @property
    def channels(self):
        return self.data.shape[0]

    @property
    def height(self):
        return self.data.shape[1]

    @property
    def width(self):
        return self.data.shape[2]

    @property
    def shape(self):
        return self.data.shape

    def flip_horizontal(self):
        return Image(self.data[:, :, ::-1])

    def __eq__(self, other):
        return isinstance(other, Image) and self.shape == other.shape and np.array_equal(self.data, other.data)

    def __repr__(self):
        return f"Image(width={self.width}, height={self.height}, channels={self.channels})"


@dataclass(frozen=True)
class ComplexPlane:
    """Per-pixel complex scalars stored as separate real and imaginary planes."""

    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        re = np.ascontiguousarray(self.re, dtype=np.float64)
        im = np.ascontiguousarray(self.im, dtype=np.float64)
        if re.ndim != 2 or re.shape != im.shape:
            raise ValueError(f"re and im must be 2-D planes of equal shape, got {re.shape} and {im.shape}")
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    @classmethod
    def from_complex(cls, z):
        z = np.asarray(z)
        return cls(z.real, z.imag)

    def to_complex(self):
        return self.re + 1j * self.im

    @property
    def height(self):
        return self.re.shape[0]

    @property
    def width(self):
        return self.re.shape[1]


def get_pixel_vector(img, x, y, policy=BoundaryPolicy.SYMMETRIC):
    """The d-vector at ``(x, y)``, with out-of-range coordinates folded by ``policy``."""
    policy = BoundaryPolicy.parse(policy)
    xi = fold_index(int(x), img.width, policy)
    yi = fold_index(int(y), img.height, policy)
    return img.data[:, yi, xi].copy()


def pad_planes(planes, radius_y, radius_x, policy):
    """Extend the last two axes of ``planes`` by the given radii."""
    policy = BoundaryPolicy.parse(policy)
    width = [(0, 0)] * (planes.ndim - 2) + [(radius_y, radius_y), (radius_x, radius_x)]
    return np.pad(planes, width, mode=policy.numpy_mode)
