"""Separable 2-D smoothing of real and complex planes.

Two engines share one interface: ``fir-separable`` (truncated, normalized
taps; the accuracy reference) and ``recursive-deriche`` (Deriche's
fourth-order recursive Gaussian, whose cost does not depend on sigma).
"""
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _backend
from .core import BoundaryPolicy, ComplexPlane, pad_planes
from .kernelmath import SpatialKernel

FIR = "fir-separable"
RECURSIVE = "recursive-deriche"
METHODS = (FIR, RECURSIVE)


# Deriche (INRIA RR-1893, 1993), 4th-order fit of exp(-n^2 / 2 sigma^2):
# h(n) = (a0 cos(w0 n/s) + a1 sin(w0 n/s)) e^(-b0 n/s) + (c0 cos(w1 n/s) + c1 sin(w1 n/s)) e^(-b1 n/s)
DERICHE_GAUSSIAN = dict(a0=1.680, a1=3.735, b0=1.783, b1=1.723, w0=0.6318, w1=1.997, c0=-0.6803, c1=-0.2598)


def deriche_impulse_response(n, sigma, p=DERICHE_GAUSSIAN):
    """Closed-form (unnormalized) symmetric impulse response at integer offsets ``n``."""
    t = np.abs(np.asarray(n, dtype=np.float64)) / sigma
    return ((p["a0"] * np.cos(p["w0"] * t) + p["a1"] * np.sin(p["w0"] * t)) * np.exp(-p["b0"] * t)
            + (p["c0"] * np.cos(p["w1"] * t) + p["c1"] * np.sin(p["w1"] * t)) * np.exp(-p["b1"] * t))


@dataclass(frozen=True, eq=False)
class RecursiveGaussian:
    """Recursion coefficients, normalized to unit DC gain.

    ``num``/``den`` realize the causal half h(n), n >= 0, and ``num_anti``
    the anticausal half h(n), n < 0. ``gain_causal``/``gain_anti`` are the
    responses of each half to a constant, used to start from replicated edges.
    """

    num: np.ndarray
    den: np.ndarray
    num_anti: np.ndarray
    gain_causal: float
    gain_anti: float

    @classmethod
    def deriche(cls, sigma, p=DERICHE_GAUSSIAN):
        if not sigma > 0:
            raise ValueError("sigma must be positive")
        poles = np.exp(np.array([-p["b0"] + 1j * p["w0"], -p["b0"] - 1j * p["w0"],
                                 -p["b1"] + 1j * p["w1"], -p["b1"] - 1j * p["w1"]]) / sigma)
        resid = np.array([p["a0"] - 1j * p["a1"], p["a0"] + 1j * p["a1"],
                          p["c0"] - 1j * p["c1"], p["c0"] + 1j * p["c1"]]) / 2
        # sum of first-order sections r / (1 - p z^-1) over a common denominator
        den = np.poly(poles).real
        num = sum(r * np.poly(np.delete(poles, i)) for i, r in enumerate(resid)).real
        causal_dc = num.sum() / den.sum()
        num = num / (2.0 * causal_dc - num[0])
        h0 = num[0]
        num_anti = np.append(num[1:] - den[1:4] * h0, -den[4] * h0)
        causal_dc = num.sum() / den.sum()
        return cls(num, den, num_anti, causal_dc, causal_dc - h0)

    def args(self):
        return self.num, self.den, self.num_anti, self.gain_causal, self.gain_anti


def _box_filter_axis(planes, radius, axis, policy):
    pads = [(0, 0)] * planes.ndim
    pads[axis] = (radius + 1, radius)
    padded = np.pad(planes, pads, mode=BoundaryPolicy.parse(policy).numpy_mode)
    cs = np.cumsum(padded, axis=axis)
    n = planes.shape[axis]
    hi = np.take(cs, np.arange(2 * radius + 1, 2 * radius + 1 + n), axis=axis)
    lo = np.take(cs, np.arange(n), axis=axis)
    return (hi - lo) / (2 * radius + 1)


@dataclass(frozen=True)
class ConvolutionEngine:
    """Spatial smoothing ``omega * p`` with a fixed method, kernel and boundary.

    ``boundary`` defaults to symmetric reflection for FIR and to replicated
    edges for the recursive engine. The recursive Gaussian starts each pass
    from the steady state of a replicated edge, so it only supports
    ``replicate-edge``; its box variant (running sums) supports both.
    """

    method: str = FIR
    kernel: SpatialKernel = field(default_factory=lambda: SpatialKernel.gaussian(1.0))
    boundary: BoundaryPolicy = None

    def __post_init__(self):
        method = {"fir": FIR, "recursive": RECURSIVE, "deriche": RECURSIVE}.get(self.method, self.method)
        if method not in METHODS:
            raise ValueError(f"unknown convolution method {self.method!r}")
        object.__setattr__(self, "method", method)
        if self.boundary is None:
            boundary = BoundaryPolicy.REPLICATE if method == RECURSIVE else BoundaryPolicy.SYMMETRIC
        else:
            boundary = BoundaryPolicy.parse(self.boundary)
        if method == RECURSIVE and self.kernel.kind == "gaussian" and boundary is not BoundaryPolicy.REPLICATE:
            raise ValueError("the recursive Gaussian engine supports only replicate-edge boundaries")
        object.__setattr__(self, "boundary", boundary)

    @cached_property
    def taps(self):
        return self.kernel.taps_1d()

    @cached_property
    def iir(self):
        return RecursiveGaussian.deriche(self.kernel.sigma_s)

    def apply(self, planes):
        """Smooth a stack of real planes shaped ``(P, H, W)``; returns a new array."""
        planes = np.ascontiguousarray(planes, dtype=np.float64)
        if planes.ndim != 3:
            raise ValueError(f"expected a (P, H, W) stack, got shape {planes.shape}")
        kern = _backend.kernels()
        if self.method == RECURSIVE and self.kernel.kind == "gaussian":
            coef = self.iir.args()
            out = kern.iir_rows(planes, *coef)
            out = np.ascontiguousarray(out.transpose(0, 2, 1))
            out = kern.iir_rows(out, *coef)
            return np.ascontiguousarray(out.transpose(0, 2, 1))
        if self.method == RECURSIVE and self.kernel.kind == "box":
            r = self.kernel.radius
            return _box_filter_axis(_box_filter_axis(planes, r, 1, self.boundary), r, 2, self.boundary)
        taps = self.taps
        R = taps.shape[0] // 2
        out = kern.fir_rows(pad_planes(planes, R, 0, self.boundary), taps)
        return kern.fir_cols(pad_planes(out, 0, R, self.boundary), taps)


def convolve_plane(p, engine):
    """Smooth a single real ``(H, W)`` plane."""
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 2:
        raise ValueError("expected a 2-D plane")
    return engine.apply(p[None])[0]


def convolve_complex(p, engine):
    """Smooth real and imaginary parts of a ComplexPlane independently."""
    out = engine.apply(np.stack([p.re, p.im]))
    return ComplexPlane(out[0], out[1])
