"""Seeded Monte Carlo trials for the sampled range kernel.

Each trial component X_k ~ B(N, 1/2) is the popcount of the low N bits of one
64-bit word from a Philox4x64-10 stream keyed by the seed (the counter-based
generator of Salmon et al., SC'11, as shipped with numpy). Words are consumed
in trial-major, component-minor order from counter zero.
"""
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .kernelmath import check_order

MAX_ORDER = 64


@dataclass(frozen=True, eq=False)
class McsfParams:
    N: int
    T: int
    gammas: np.ndarray
    seed: int = 0

    def __post_init__(self):
        check_order(self.N)
        if self.N > MAX_ORDER:
            raise ValueError(f"order N must be <= {MAX_ORDER}")
        if int(self.T) != self.T or self.T < 1:
            raise ValueError(f"number of trials must be a positive integer, got {self.T}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        g = np.array(self.gammas, dtype=np.float64).reshape(-1)
        g.setflags(write=False)
        object.__setattr__(self, "gammas", g)

    @classmethod
    def from_cov(cls, cov, N, T, seed=0):
        return cls(N=int(N), T=int(T), gammas=np.asarray(cov.alphas) / math.sqrt(N), seed=int(seed))

    @property
    def dim(self):
        return self.gammas.shape[0]


@dataclass(frozen=True)
class TrialSample:
    X: tuple
    Y: tuple


class TrialSet:
    """An ordered, weighted collection of binomial trial vectors.

    Plain Monte Carlo draws carry unit weights. ``exhaustive`` builds the
    full outcome set weighted by its probabilities, and ``compacted`` merges
    trials whose contributions to the real-part estimate coincide.
    """

    def __init__(self, X, N, weights=None, imag_weights=None):
        X = np.array(X, dtype=np.int64, ndmin=2)
        if X.ndim != 2 or X.shape[0] < 1:
            raise ValueError("need at least one trial")
        if X.min() < 0 or X.max() > N:
            raise ValueError(f"trial components must lie in 0..{N}")
        w = np.ones(X.shape[0]) if weights is None else np.array(weights, dtype=np.float64)
        if w.shape != (X.shape[0],):
            raise ValueError("one weight per trial required")
        v = w.copy() if imag_weights is None else np.array(imag_weights, dtype=np.float64)
        if v.shape != w.shape:
            raise ValueError("one imaginary weight per trial required")
        for arr in (X, w, v):
            arr.setflags(write=False)
        self.X = X
        self.N = int(N)
        self.weights = w
        # weights applied to imaginary parts; differ from ``weights`` only after compaction
        self.imag_weights = v

    @property
    def Y(self):
        return self.N - 2 * self.X

    @property
    def dim(self):
        return self.X.shape[1]

    @property
    def total_weight(self):
        return float(self.weights.sum())

    def __len__(self):
        return self.X.shape[0]

    def __getitem__(self, t):
        x = self.X[t]
        return TrialSample(tuple(int(v) for v in x), tuple(int(self.N - 2 * v) for v in x))

    def __iter__(self):
        return (self[t] for t in range(len(self)))

    def compacted(self):
        """Merge duplicate trials and sign-mirrored pairs (Y, -Y).

        Mirrored trials give conjugate modulations, so their contributions to
        the real parts of the accumulators are identical; merging them is an
        exact rearrangement of the real-part estimate. The imaginary parts
        flip sign, which the signed ``imag_weights`` keep track of. Merged
        trials appear in order of first occurrence.
        """
        Y = self.Y
        # canonical sign: first nonzero component positive
        first = np.argmax(Y != 0, axis=1)
        sign = np.where(Y[np.arange(len(Y)), first] < 0, -1, 1)
        canon = Y * sign[:, None]
        uniq, first_idx, inverse = np.unique(canon, axis=0, return_index=True, return_inverse=True)
        inverse = inverse.reshape(-1)
        w = np.bincount(inverse, weights=self.weights, minlength=len(uniq))
        v = np.bincount(inverse, weights=sign * self.imag_weights, minlength=len(uniq))
        order = np.argsort(first_idx, kind="stable")
        return TrialSet((self.N - uniq[order]) // 2, self.N, w[order], v[order])

    @classmethod
    def exhaustive(cls, N, d):
        """All (N+1)^d outcomes weighted by their product-binomial probabilities."""
        pmf = np.array([math.comb(N, n) for n in range(N + 1)], dtype=np.float64) / 2.0**N
        X = np.array(list(itertools.product(range(N + 1), repeat=d)), dtype=np.int64)
        return cls(X, N, np.prod(pmf[X], axis=1))


def draw_trials(params, d=None):
    """Draw ``params.T`` i.i.d. vectors from B(N, 1/2)^d, deterministic in the seed."""
    d = params.dim if d is None else int(d)
    if d < 1:
        raise ValueError("dimension must be positive")
    bitgen = np.random.Philox(key=int(params.seed))
    words = bitgen.random_raw(params.T * d).astype(np.uint64)
    mask = np.uint64(2**params.N - 1)
    X = np.bitwise_count(words & mask).astype(np.int64).reshape(params.T, d)
    return TrialSet(X, params.N)


def sampled_kernel(y, trials, params):
    """Monte Carlo estimate (weighted mean over trials) of the raised-cosine range kernel.

    ``y`` is a d-vector, or an array whose last axis has length d.
    """
    y = np.asarray(y, dtype=np.float64)
    if y.shape[-1] != trials.dim or trials.dim != params.dim:
        raise ValueError("dimension mismatch between y, trials and params")
    phase = np.tensordot(y * params.gammas, trials.Y.T.astype(np.float64), axes=(-1, 0))
    re = (np.cos(phase) * trials.weights).sum(axis=-1)
    im = (np.sin(phase) * trials.imag_weights).sum(axis=-1)
    est = (re + 1j * im) / trials.total_weight
    return complex(est) if est.ndim == 0 else est
