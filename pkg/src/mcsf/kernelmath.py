"""Closed-form kernel mathematics: spatial and range kernels, covariance
diagonalization, and the raised-cosine approximants of the Gaussian."""
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NotPositiveDefinite, NotSymmetric

SYMMETRY_TOL = 1e-12


def jacobi_eigh(a, tol=1e-14, max_sweeps=100):
    """Eigen-decomposition of a small symmetric matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, vectors)`` with eigenvectors in the columns,
    unsorted. Sweeps stop once the off-diagonal Frobenius norm drops to
    ``tol`` times the matrix norm.
    """
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    scale = max(np.linalg.norm(a), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # A <- J^T A J with J the (p, q) rotation
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    return np.diag(a).copy(), v


@dataclass(frozen=True, eq=False)
class CovarianceSpec:
    """Range covariance ``C`` with ``C^-1 = Q diag(alphas^2) Q^T``."""

    dim: int
    C: np.ndarray
    Q: np.ndarray
    alphas: np.ndarray

    @cached_property
    def C_inv(self):
        return (self.Q * self.alphas**2) @ self.Q.T

    @classmethod
    def isotropic(cls, sigma_r, dim):
        return diagonalize(sigma_r**2 * np.eye(dim))


def diagonalize(C):
    """Diagonalize the inverse covariance of a range kernel.

    Eigenvalues of ``C`` are ``1/alpha_k^2``; alphas come back sorted in
    descending order and every column of ``Q`` has its first nonzero entry
    positive, so the result is reproducible.
    """
    C = np.atleast_2d(np.asarray(C, dtype=np.float64))
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise NotSymmetric(f"covariance must be square, got shape {C.shape}")
    if not np.all(np.isfinite(C)):
        raise NotSymmetric("covariance has non-finite entries")
    if np.max(np.abs(C - C.T)) > SYMMETRY_TOL * max(1.0, np.max(np.abs(C))):
        raise NotSymmetric("covariance matrix is not symmetric")
    C = 0.5 * (C + C.T)
    lam, vecs = jacobi_eigh(C)
    if lam.max() <= 0 or np.any(lam <= 1e-12 * lam.max()):
        raise NotPositiveDefinite(f"covariance eigenvalues {lam} are not all positive")
    order = np.argsort(lam, kind="stable")  # ascending eigenvalue == descending alpha
    lam = lam[order]
    vecs = vecs[:, order]
    for k in range(vecs.shape[1]):
        nz = np.flatnonzero(np.abs(vecs[:, k]) > 1e-15)
        if nz.size and vecs[nz[0], k] < 0:
            vecs[:, k] = -vecs[:, k]
    alphas = 1.0 / np.sqrt(lam)
    for arr in (C, vecs, alphas):
        arr.setflags(write=False)
    return CovarianceSpec(dim=C.shape[0], C=C, Q=vecs, alphas=alphas)


def parse_covariance(text):
    """Parse the plain-text covariance format: ``d`` on the first line, then ``d`` rows."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty covariance file")
    try:
        d = int(lines[0][0])
        rows = [[float(v) for v in ln] for ln in lines[1:]]
    except ValueError as exc:
        raise ValueError(f"malformed covariance file: {exc}") from None
    if d < 1 or len(lines[0]) != 1 or len(rows) != d or any(len(r) != d for r in rows):
        raise ValueError(f"covariance file must hold a dimension line and {d} rows of {d} values")
    return np.array(rows)


def read_covariance_file(path):
    with open(path) as fh:
        return diagonalize(parse_covariance(fh.read()))


def format_covariance(C):
    C = np.atleast_2d(C)
    rows = [" ".join(repr(float(v)) for v in row) for row in C]
    return f"{C.shape[0]}\n" + "\n".join(rows) + "\n"


def gaussian_range(y, alphas):
    """exp(-1/2 sum alpha_k^2 y_k^2). ``y`` may carry extra leading axes."""
    y = np.asarray(y, dtype=np.float64)
    alphas = np.asarray(alphas, dtype=np.float64)
    if y.shape[-1:] != alphas.shape:
        raise ValueError(f"vector of length {y.shape[-1:]} does not match {alphas.shape[0]} alphas")
    return np.exp(-0.5 * np.sum((alphas * y) ** 2, axis=-1))


def check_order(N):
    if int(N) != N or N < 2 or N % 2:
        raise ValueError(f"raised-cosine order must be an even integer >= 2, got {N}")
    return int(N)


def raised_cosine(t, alpha, N):
    """[cos(alpha t / sqrt(N))]^N, the order-N approximant of exp(-alpha^2 t^2 / 2).

    No clamping is applied: beyond ``|alpha t| = sqrt(N) pi / 2`` the
    approximant oscillates back up.
    """
    N = check_order(N)
    return np.cos(alpha * np.asarray(t, dtype=np.float64) / math.sqrt(N)) ** N


def cosN_binomial_expectation(theta, N):
    """Evaluate cos(theta)^N by explicitly summing its binomial expansion.

    Each term is the B(N, 1/2) probability of ``n`` times cos((N - 2n) theta);
    the imaginary parts cancel pairwise. Accepts any positive integer N and
    serves as an enumeration oracle.
    """
    if N < 1 or N > 60:
        raise ValueError("N must lie in 1..60")
    theta = np.asarray(theta, dtype=np.float64)
    total = np.zeros_like(theta)
    for n in range(N + 1):
        total = total + math.comb(N, n) / 2.0**N * np.cos((N - 2 * n) * theta)
    return total


@dataclass(frozen=True)
class SpatialKernel:
    """Spatial weight: isotropic Gaussian of width ``sigma_s`` or a square box."""

    kind: str = "gaussian"
    sigma_s: float = 1.0
    radius: int = 0

    def __post_init__(self):
        if self.kind == "gaussian":
            if not self.sigma_s > 0:
                raise ValueError("sigma_s must be positive")
        elif self.kind == "box":
            if int(self.radius) != self.radius or self.radius < 1:
                raise ValueError("box radius must be a positive integer")
        else:
            raise ValueError(f"unknown spatial kernel kind {self.kind!r}")

    @classmethod
    def gaussian(cls, sigma_s):
        return cls("gaussian", float(sigma_s), 0)

    @classmethod
    def box(cls, radius):
        return cls("box", 0.0, int(radius))

    @property
    def window_radius(self):
        """Half-width of the square window; ceil(3 sigma_s) for the Gaussian."""
        if self.kind == "gaussian":
            return int(math.ceil(3.0 * self.sigma_s))
        return int(self.radius)

    def weights_1d(self):
        r = np.arange(-self.window_radius, self.window_radius + 1, dtype=np.float64)
        if self.kind == "gaussian":
            return np.exp(-(r**2) / (2.0 * self.sigma_s**2))
        return np.ones_like(r)

    def taps_1d(self):
        """Separable FIR taps normalized to unit sum."""
        w = self.weights_1d()
        return w / w.sum()

    def window(self):
        """Unnormalized 2-D weights over the square window, indexed ``[dy, dx]``."""
        w = self.weights_1d()
        return np.outer(w, w)


def spatial_weight(j, kernel):
    jx, jy = (int(v) for v in j)
    if kernel.kind == "gaussian":
        return math.exp(-(jx * jx + jy * jy) / (2.0 * kernel.sigma_s**2))
    return 1.0 if max(abs(jx), abs(jy)) <= kernel.radius else 0.0
