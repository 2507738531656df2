"""Fast bilateral filtering of vector-valued images by Monte Carlo sampling of
a raised-cosine range kernel, with the exact direct filter as reference."""
from ._backend import active_backend, set_backend, use_backend
from .colorspace import ColorSpace, lab_to_rgb, rgb_to_lab
from .convolve import FIR, RECURSIVE, ConvolutionEngine, convolve_complex, convolve_plane
from .core import BoundaryPolicy, ComplexPlane, Image, get_pixel_vector
from .direct import direct_bilateral, direct_bilateral_with_sampled_kernel
from .errors import (
    CorruptHeader,
    DegenerateDenominator,
    DimensionMismatch,
    ImageFormatError,
    McsfError,
    NotPositiveDefinite,
    NotSymmetric,
    ParameterWarning,
    TruncatedData,
    UnsupportedFormat,
    ZeroMse,
)
from .imgio import read_image, write_image
from .kernelmath import (
    CovarianceSpec,
    SpatialKernel,
    cosN_binomial_expectation,
    diagonalize,
    gaussian_range,
    raised_cosine,
    read_covariance_file,
    spatial_weight,
)
from .metrics import mse, mse_db
from .sampling import McsfParams, TrialSample, TrialSet, draw_trials, sampled_kernel
from .shiftable import McsfOutput, count_convolutions, mcsf_filter

__version__ = "0.1.0"
