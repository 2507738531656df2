"""Numba kernels. Same signatures and semantics as ``_kernels_numpy``.

Every parallel loop gives each output row (or plane) to exactly one
iteration, so results do not depend on the thread count.
"""
import math

import numpy as np
from numba import njit, prange


@njit(parallel=True, cache=True)
def fir_rows(padded, taps):
    """Correlate along axis 1 with symmetric ``taps``; ``padded`` is extended by len(taps)//2 on that axis.

    Evaluated as x[n] + sum_k taps[R+k] ((x[n-k] - x[n]) + (x[n+k] - x[n])):
    constants pass through exactly and mirrored inputs give mirrored outputs bit for bit.
    """
    P, Hp, W = padded.shape
    K = taps.shape[0]
    R = K // 2
    H = Hp - K + 1
    out = np.empty((P, H, W))
    for py in prange(P * H):
        p = py // H
        y = py % H
        for x in range(W):
            c = padded[p, y + R, x]
            acc = 0.0
            for k in range(1, R + 1):
                acc += taps[R + k] * ((padded[p, y + R - k, x] - c) + (padded[p, y + R + k, x] - c))
            out[p, y, x] = c + acc
    return out


@njit(parallel=True, cache=True)
def fir_cols(padded, taps):
    """Correlate along axis 2; same evaluation order as ``fir_rows``."""
    P, H, Wp = padded.shape
    K = taps.shape[0]
    R = K // 2
    W = Wp - K + 1
    out = np.empty((P, H, W))
    for py in prange(P * H):
        p = py // H
        y = py % H
        row = padded[p, y]
        for x in range(W):
            c = row[x + R]
            acc = 0.0
            for k in range(1, R + 1):
                acc += taps[R + k] * ((row[x + R - k] - c) + (row[x + R + k] - c))
            out[p, y, x] = c + acc
    return out


@njit(parallel=True, cache=True)
def iir_rows(planes, num, den, num_anti, gain_causal, gain_anti):
    """Fourth-order causal + anticausal recursive smoothing along axis 1.

    ``num``/``den`` are the causal taps (den[0] == 1), ``num_anti`` the taps
    on x[n+1..n+4]. Both ends start from the steady state of a replicated edge.
    """
    P, H, W = planes.shape
    out = np.empty((P, H, W))
    n0, n1, n2, n3 = num[0], num[1], num[2], num[3]
    d1, d2, d3, d4 = den[1], den[2], den[3], den[4]
    m1, m2, m3, m4 = num_anti[0], num_anti[1], num_anti[2], num_anti[3]
    for p in prange(P):
        x = planes[p]
        o = out[p]
        # anticausal half straight into the output; rows past the end are steady state
        for y in range(H - 1, -1, -1):
            r1 = min(y + 1, H - 1)
            r2 = min(y + 2, H - 1)
            r3 = min(y + 3, H - 1)
            r4 = min(y + 4, H - 1)
            for c in range(W):
                s1 = o[y + 1, c] if y + 1 < H else x[H - 1, c] * gain_anti
                s2 = o[y + 2, c] if y + 2 < H else x[H - 1, c] * gain_anti
                s3 = o[y + 3, c] if y + 3 < H else x[H - 1, c] * gain_anti
                s4 = o[y + 4, c] if y + 4 < H else x[H - 1, c] * gain_anti
                o[y, c] = (m1 * x[r1, c] + m2 * x[r2, c] + m3 * x[r3, c] + m4 * x[r4, c]
                           - d1 * s1 - d2 * s2 - d3 * s3 - d4 * s4)
        yc = np.empty((H + 4, W))  # causal half; rows 0..3 are the pre-start state
        for c in range(W):
            v = x[0, c] * gain_causal
            for i in range(4):
                yc[i, c] = v
        for y in range(H):
            r1 = max(y - 1, 0)
            r2 = max(y - 2, 0)
            r3 = max(y - 3, 0)
            for c in range(W):
                v = (n0 * x[y, c] + n1 * x[r1, c] + n2 * x[r2, c] + n3 * x[r3, c]
                     - d1 * yc[y + 3, c] - d2 * yc[y + 2, c] - d3 * yc[y + 1, c] - d4 * yc[y, c])
                yc[y + 4, c] = v
                o[y, c] += v
    return out


@njit(parallel=True, cache=True)
def modulate(g, f, coef, stack):
    """Fill ``stack`` with [Re H, Im H, Re H f_0, Im H f_0, ...], H = exp(i sum_k coef_k g_k)."""
    d, Hh, W = g.shape
    for y in prange(Hh):
        for x in range(W):
            ph = 0.0
            for k in range(d):
                ph += coef[k] * g[k, y, x]
            c = math.cos(ph)
            s = math.sin(ph)
            stack[0, y, x] = c
            stack[1, y, x] = s
            for k in range(f.shape[0]):
                stack[2 + 2 * k, y, x] = c * f[k, y, x]
                stack[3 + 2 * k, y, x] = s * f[k, y, x]


@njit(parallel=True, cache=True)
def accumulate(stack, smoothed, w_re, w_im, P_re, P_im, Z_re, Z_im):
    """P += H* (omega * G), Z += H* (omega * H), with separate real/imaginary weights."""
    d = P_re.shape[0]
    Hh, W = Z_re.shape
    for y in prange(Hh):
        for x in range(W):
            hr = stack[0, y, x]
            hi = stack[1, y, x]
            Z_re[y, x] += w_re * (hr * smoothed[0, y, x] + hi * smoothed[1, y, x])
            Z_im[y, x] += w_im * (hr * smoothed[1, y, x] - hi * smoothed[0, y, x])
            for k in range(d):
                gr = smoothed[2 + 2 * k, y, x]
                gi = smoothed[3 + 2 * k, y, x]
                P_re[k, y, x] += w_re * (hr * gr + hi * gi)
                P_im[k, y, x] += w_im * (hr * gi - hi * gr)


@njit(parallel=True, cache=True)
def direct_bilateral(padded, window, c_inv):
    """Brute-force bilateral sums over the square window for every pixel.

    Accumulates weighted differences from the center, so the result is
    center + sum w (f_j - f_i) / sum w.
    """
    d, Hp, Wp = padded.shape
    K = window.shape[0]
    R = K // 2
    H = Hp - 2 * R
    W = Wp - 2 * R
    out = np.empty((d, H, W))
    for y in prange(H):
        center = np.empty(d)
        diff = np.empty(d)
        num = np.empty(d)
        for x in range(W):
            for k in range(d):
                center[k] = padded[k, y + R, x + R]
                num[k] = 0.0
            den = 0.0
            for dy in range(K):
                for dx in range(K):
                    for k in range(d):
                        diff[k] = padded[k, y + dy, x + dx] - center[k]
                    q = 0.0
                    for k in range(d):
                        s = 0.0
                        for m in range(d):
                            s += c_inv[k, m] * diff[m]
                        q += diff[k] * s
                    wt = window[dy, dx] * math.exp(-0.5 * q)
                    den += wt
                    for k in range(d):
                        num[k] += wt * diff[k]
            for k in range(d):
                out[k, y, x] = center[k] + num[k] / den
    return out
