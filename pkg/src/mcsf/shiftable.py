"""The Monte Carlo shiftable filter: bilateral filtering through a sum of
complex-modulated spatial convolutions."""
import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .convolve import FIR, ConvolutionEngine
from .core import Image
from .direct import _check_dims, check_denominator
from .errors import DimensionMismatch, ParameterWarning
from .sampling import draw_trials

DYNAMIC_RANGE = 255.0


@dataclass
class McsfOutput:
    filtered: Image
    z_min: float  # min over pixels of Re Z
    imag_max: float  # max |Im P| before division
    timings: dict = field(default_factory=dict)
    trials_used: int = 0  # convolution sets actually run (after compaction)


def count_convolutions(params, d):
    """Planes convolved by the textbook algorithm: one for H and d for G, per trial."""
    return params.T * (d + 1)


def check_order_range(cov, N, dynamic_range=DYNAMIC_RANGE):
    """Warn when the raised cosine passes its first zero inside the dynamic range."""
    if math.sqrt(N) * math.pi / 2 < float(np.max(cov.alphas)) * dynamic_range:
        warnings.warn(
            f"order N={N} is low for this range kernel: the raised cosine oscillates for "
            f"differences above {math.sqrt(N) * math.pi / 2 / np.max(cov.alphas):.1f}",
            ParameterWarning,
            stacklevel=3,
        )
        return False
    return True


def mcsf_filter(f, kernel, cov, params, engine=None, trials=None, compact=True):
    """Filter ``f`` with the Monte Carlo shiftable approximation.

    Parameters
    ----------
    f : Image
    kernel : SpatialKernel
    cov : CovarianceSpec
        Range covariance; ``cov.dim`` must equal ``f.channels``.
    params : McsfParams
        Order, trial count, seed and the per-axis frequencies alpha_k / sqrt(N).
    engine : ConvolutionEngine, optional
        Defaults to the FIR engine for ``kernel``.
    trials : TrialSet, optional
        Drawn from ``params`` when omitted.
    compact : bool
        Merge repeated and sign-mirrored trials before filtering. The real
        parts of the accumulators are unchanged; only fewer convolutions run.

    Returns
    -------
    McsfOutput
        ``filtered`` is Re P / Re Z per channel.
    """
    t_start = time.perf_counter()
    _check_dims(f, cov)
    d = f.channels
    if engine is None:
        engine = ConvolutionEngine(FIR, kernel)
    elif engine.kernel != kernel:
        raise ValueError("engine was built for a different spatial kernel")
    expected = np.asarray(cov.alphas) / math.sqrt(params.N)
    if params.dim != d or not np.allclose(params.gammas, expected, rtol=1e-14, atol=0):
        raise DimensionMismatch("params.gammas do not match cov.alphas / sqrt(N)")
    check_order_range(cov, params.N)
    if trials is None:
        trials = draw_trials(params, d)
    if trials.dim != d or trials.N != params.N:
        raise DimensionMismatch("trial set does not match the image dimension or order")
    if compact:
        trials = trials.compacted()

    kern = _backend.kernels()
    # The range kernel only sees differences, so filtering f - m and adding m
    # back changes nothing mathematically; centering on the per-channel
    # midrange keeps G small and leaves constant images exactly fixed.
    m = 0.5 * (f.data.min(axis=(1, 2)) + f.data.max(axis=(1, 2)))
    fdata = f.data - m[:, None, None]
    g = np.ascontiguousarray(np.einsum("kl,khw->lhw", cov.Q, fdata))
    freqs = trials.Y * params.gammas
    P_re = np.zeros(fdata.shape)
    P_im = np.zeros(fdata.shape)
    Z_re = np.zeros(fdata.shape[1:])
    Z_im = np.zeros(fdata.shape[1:])
    stack = np.empty((2 * (d + 1),) + fdata.shape[1:])
    t_trials = time.perf_counter()
    for t in range(len(trials)):
        kern.modulate(g, fdata, np.ascontiguousarray(freqs[t]), stack)
        smoothed = engine.apply(stack)
        kern.accumulate(stack, smoothed, float(trials.weights[t]), float(trials.imag_weights[t]),
                        P_re, P_im, Z_re, Z_im)
    t_divide = time.perf_counter()
    check_denominator(Z_re)
    out = Image(P_re / Z_re + m[:, None, None])
    t_end = time.perf_counter()
    return McsfOutput(
        filtered=out,
        z_min=float(Z_re.min()),
        # imaginary part of the numerator for the uncentered image
        imag_max=float(np.abs(P_im + m[:, None, None] * Z_im).max()),
        timings={
            "transform_ms": 1e3 * (t_trials - t_start),
            "trials_ms": 1e3 * (t_divide - t_trials),
            "divide_ms": 1e3 * (t_end - t_divide),
            "total_ms": 1e3 * (t_end - t_start),
        },
        trials_used=len(trials),
    )
