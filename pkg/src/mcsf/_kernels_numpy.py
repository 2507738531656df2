"""Pure-numpy versions of the hot kernels (vectorized over pixels)."""
import numpy as np


def fir_rows(padded, taps):
    R = taps.shape[0] // 2
    H = padded.shape[1] - 2 * R
    c = padded[:, R:R + H, :]
    acc = np.zeros_like(c)
    for k in range(1, R + 1):
        acc += taps[R + k] * ((padded[:, R - k:R - k + H, :] - c) + (padded[:, R + k:R + k + H, :] - c))
    return c + acc


def fir_cols(padded, taps):
    R = taps.shape[0] // 2
    W = padded.shape[2] - 2 * R
    c = padded[:, :, R:R + W]
    acc = np.zeros_like(c)
    for k in range(1, R + 1):
        acc += taps[R + k] * ((padded[:, :, R - k:R - k + W] - c) + (padded[:, :, R + k:R + k + W] - c))
    return c + acc


def iir_rows(planes, num, den, num_anti, gain_causal, gain_anti):
    P, H, W = planes.shape
    x = planes.transpose(1, 0, 2)  # row-major walk, vectorized over (P, W)
    xc = np.concatenate([np.repeat(x[:1], 3, axis=0), x])
    yc = np.empty((H + 4, P, W))
    yc[:4] = x[0] * gain_causal
    for y in range(H):
        yc[y + 4] = (num[0] * xc[y + 3] + num[1] * xc[y + 2] + num[2] * xc[y + 1] + num[3] * xc[y]
                     - den[1] * yc[y + 3] - den[2] * yc[y + 2] - den[3] * yc[y + 1] - den[4] * yc[y])
    xa = np.concatenate([x, np.repeat(x[-1:], 4, axis=0)])
    ya = np.empty((H + 4, P, W))
    ya[H:] = x[-1] * gain_anti
    for y in range(H - 1, -1, -1):
        ya[y] = (num_anti[0] * xa[y + 1] + num_anti[1] * xa[y + 2] + num_anti[2] * xa[y + 3]
                 + num_anti[3] * xa[y + 4]
                 - den[1] * ya[y + 1] - den[2] * ya[y + 2] - den[3] * ya[y + 3] - den[4] * ya[y + 4])
    return np.ascontiguousarray((yc[4:] + ya[:H]).transpose(1, 0, 2))


def modulate(g, f, coef, stack):
    ph = np.tensordot(coef, g, axes=1)
    c = np.cos(ph)
    s = np.sin(ph)
    stack[0] = c
    stack[1] = s
    stack[2::2] = c * f
    stack[3::2] = s * f


def accumulate(stack, smoothed, w_re, w_im, P_re, P_im, Z_re, Z_im):
    hr = stack[0]
    hi = stack[1]
    Z_re += w_re * (hr * smoothed[0] + hi * smoothed[1])
    Z_im += w_im * (hr * smoothed[1] - hi * smoothed[0])
    gr = smoothed[2::2]
    gi = smoothed[3::2]
    P_re += w_re * (hr * gr + hi * gi)
    P_im += w_im * (hr * gi - hi * gr)


def direct_bilateral(padded, window, c_inv):
    d = padded.shape[0]
    K = window.shape[0]
    R = K // 2
    H = padded.shape[1] - 2 * R
    W = padded.shape[2] - 2 * R
    center = padded[:, R:R + H, R:R + W]
    num = np.zeros((d, H, W))
    den = np.zeros((H, W))
    for dy in range(K):
        for dx in range(K):
            nb = padded[:, dy:dy + H, dx:dx + W]
            diff = nb - center
            q = np.einsum("khw,km,mhw->hw", diff, c_inv, diff)
            wt = window[dy, dx] * np.exp(-0.5 * q)
            den += wt
            num += wt * diff
    return center + num / den
