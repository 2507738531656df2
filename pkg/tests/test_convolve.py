import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcsf import FIR, RECURSIVE, BoundaryPolicy, ComplexPlane, ConvolutionEngine, SpatialKernel
from mcsf import convolve_complex, convolve_plane, use_backend
from mcsf.convolve import RecursiveGaussian, deriche_impulse_response
from mcsf.core import fold_index


def fir(sigma, boundary=BoundaryPolicy.SYMMETRIC):
    return ConvolutionEngine(FIR, SpatialKernel.gaussian(sigma), boundary)


def rec(sigma):
    return ConvolutionEngine(RECURSIVE, SpatialKernel.gaussian(sigma))


def brute_force_2d(p, kernel, policy):
    w = kernel.window()
    w = w / w.sum()
    R = kernel.window_radius
    H, W = p.shape
    out = np.zeros_like(p)
    for y in range(H):
        for x in range(W):
            acc = 0.0
            for dy in range(-R, R + 1):
                for dx in range(-R, R + 1):
                    acc += w[dy + R, dx + R] * p[fold_index(y - dy, H, policy), fold_index(x - dx, W, policy)]
            out[y, x] = acc
    return out


@pytest.mark.parametrize("engine", [fir(0.7), fir(3.0), fir(2.0, "replicate-edge")])
def test_constant_plane_exact(engine):
    out = convolve_plane(np.full((9, 13), 77.25), engine)
    np.testing.assert_array_equal(out, 77.25)


@pytest.mark.parametrize("sigma", [1.0, 4.0, 12.0])
def test_recursive_dc_gain(sigma):
    out = convolve_plane(np.full((40, 50), 100.0), rec(sigma))
    assert np.max(np.abs(out - 100.0)) <= 0.1


@pytest.mark.parametrize("engine", [fir(1.0), fir(5.0), rec(1.0), rec(5.0),
                                    ConvolutionEngine(FIR, SpatialKernel.box(2)),
                                    ConvolutionEngine(RECURSIVE, SpatialKernel.box(3))])
def test_single_pixel(engine):
    assert convolve_plane(np.array([[42.0]]), engine)[0, 0] == pytest.approx(42.0, abs=1e-12)


def test_impulse_response_is_tap_product():
    p = np.zeros((65, 65))
    p[32, 32] = 1.0
    out = convolve_plane(p, fir(5.0))
    r = np.arange(-15, 16)
    taps = np.exp(-(r**2) / 50.0)
    taps /= taps.sum()
    np.testing.assert_allclose(out[17:48, 17:48], np.outer(taps, taps), rtol=0, atol=1e-16)
    assert out[32, 32] == pytest.approx(taps[15] ** 2, rel=1e-14)
    assert np.all(out[:17] == 0) and np.all(out[:, 48:] == 0)


def test_complex_plane_conventions(rng):
    re = rng.normal(size=(16, 16))
    im = rng.normal(size=(16, 16))
    eng = fir(1.5)
    out = convolve_complex(ComplexPlane(re, im), eng)
    np.testing.assert_array_equal(out.re, convolve_plane(re, eng))
    np.testing.assert_array_equal(out.im, convolve_plane(im, eng))
    real_only = convolve_complex(ComplexPlane(re, np.zeros_like(re)), eng)
    assert np.all(real_only.im == 0)
    const = convolve_complex(ComplexPlane(np.full((5, 7), 3.0), np.full((5, 7), -2.0)), eng)
    np.testing.assert_array_equal(const.re, 3.0)
    np.testing.assert_array_equal(const.im, -2.0)


@settings(max_examples=30, deadline=None)
@given(st.floats(-10, 10), st.floats(-10, 10), st.integers(0, 2**31), st.floats(0.3, 4.0))
def test_linearity(a, b, seed, sigma):
    r = np.random.default_rng(seed)
    p, q = r.uniform(0, 255, size=(2, 12, 15))
    eng = fir(sigma)
    lhs = convolve_plane(a * p + b * q, eng)
    rhs = a * convolve_plane(p, eng) + b * convolve_plane(q, eng)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(1.0, abs(a) + abs(b)) * 255


@pytest.mark.parametrize("sigma,policy", [(1.0, "symmetric-reflect"), (2.0, "symmetric-reflect"),
                                          (1.3, "replicate-edge"), (7.0, "symmetric-reflect")])
def test_separable_matches_brute_force(rng, sigma, policy):
    p = rng.uniform(0, 255, size=(16, 16))
    eng = fir(sigma, policy)
    ref = brute_force_2d(p, eng.kernel, BoundaryPolicy.parse(policy))
    assert np.max(np.abs(convolve_plane(p, eng) - ref)) <= 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 20), st.integers(1, 20), st.floats(0.3, 6.0), st.integers(0, 2**31))
def test_flip_equivariance_exact(h, w, sigma, seed):
    p = np.random.default_rng(seed).uniform(0, 255, size=(h, w))
    eng = fir(sigma)
    np.testing.assert_array_equal(convolve_plane(p[:, ::-1], eng), convolve_plane(p, eng)[:, ::-1])


@pytest.mark.parametrize("sigma", [2.0, 5.0, 10.0])
def test_recursive_close_to_fir(rng, sigma):
    p = rng.uniform(0, 255, size=(256, 256))
    # same boundary on both sides so the comparison isolates the kernel shape
    dev = np.abs(convolve_plane(p, rec(sigma)) - convolve_plane(p, fir(sigma, "replicate-edge")))
    assert dev.max() <= 0.5


def test_deriche_recursion_reproduces_closed_form():
    sigma = 3.0
    p = np.zeros((1, 201))
    p[0, 100] = 1.0
    row = rec(sigma).apply(p[None])[0]
    # a 1-row plane is smoothed only horizontally after the vertical pass sees a constant column
    h = deriche_impulse_response(np.arange(-100, 101), sigma)
    np.testing.assert_allclose(row[0], h / h.sum(), rtol=0, atol=1e-12)


def test_deriche_fits_gaussian():
    n = np.arange(-60, 61)
    for sigma in (2.0, 5.0, 15.0):
        h = deriche_impulse_response(n, sigma)
        g = np.exp(-(n**2) / (2 * sigma**2))
        assert np.max(np.abs(h / h.sum() - g / g.sum())) <= 2e-3 / sigma


def test_recursive_replicate_matches_long_padding(rng):
    sigma = 4.0
    p = rng.uniform(0, 255, size=(1, 40))
    pad = 400
    long = np.pad(p, ((0, 0), (pad, pad)), mode="edge")
    short_out = rec(sigma).apply(p[None])[0]
    long_out = rec(sigma).apply(long[None])[0][:, pad:-pad]
    assert np.max(np.abs(short_out - long_out)) <= 1e-9


def test_recursive_rejects_symmetric():
    with pytest.raises(ValueError):
        ConvolutionEngine(RECURSIVE, SpatialKernel.gaussian(2.0), "symmetric-reflect")
    with pytest.raises(ValueError):
        ConvolutionEngine("fft", SpatialKernel.gaussian(2.0))


@pytest.mark.parametrize("policy", ["symmetric-reflect", "replicate-edge"])
def test_box_running_sum_matches_fir(rng, policy):
    p = rng.uniform(0, 255, size=(3, 20, 17))
    k = SpatialKernel.box(3)
    a = ConvolutionEngine(RECURSIVE, k, policy).apply(p)
    b = ConvolutionEngine(FIR, k, policy).apply(p)
    assert np.max(np.abs(a - b)) <= 1e-9


@pytest.mark.parametrize("engine", [fir(2.5), rec(2.5), fir(1.0, "replicate-edge")])
def test_backends_agree(rng, engine):
    p = rng.uniform(0, 255, size=(4, 33, 29))
    with use_backend("numba"):
        a = engine.apply(p)
    with use_backend("numpy"):
        b = engine.apply(p)
    assert np.max(np.abs(a - b)) <= 1e-10


def test_coefficients_normalized():
    for sigma in (0.5, 1.0, 10.0, 50.0):
        c = RecursiveGaussian.deriche(sigma)
        assert c.gain_causal + c.gain_anti == pytest.approx(1.0, abs=1e-12)


@pytest.mark.slow
def test_recursive_runtime_independent_of_sigma():
    p = np.random.default_rng(0).uniform(0, 255, size=(8, 512, 512))

    def best(sigma):
        eng = rec(sigma)
        eng.apply(p)
        times = []
        for _ in range(5):
            t0 = time.perf_counter()
            eng.apply(p)
            times.append(time.perf_counter() - t0)
        return min(times)

    t1, t10 = best(1.0), best(10.0)
    assert t10 <= 1.25 * t1
