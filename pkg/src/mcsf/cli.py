"""Command-line interface: ``mcsf {filter,compare,sweep,bench,kernel-table}``.

Exit codes: 0 success, 2 usage error, 3 data error, 4 degenerate normalization.
"""
import argparse
import csv
import json
import math
import sys
import time
import warnings

import numpy as np

from . import colorspace, imgio, kernelmath
from .convolve import ConvolutionEngine
from .core import BoundaryPolicy, Image
from .direct import direct_bilateral
from .errors import DegenerateDenominator, McsfError, ParameterWarning
from .metrics import mse
from .sampling import McsfParams, draw_trials, sampled_kernel
from .shiftable import count_convolutions, mcsf_filter

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_DEGENERATE = 0, 2, 3, 4
MAX_CHANNELS = 8


class UsageError(Exception):
    pass


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        v = 0
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _order(text):
    v = _positive_int(text)
    if v % 2 or v > 64:
        raise argparse.ArgumentTypeError(f"order must be an even integer in 2..64, got {text!r}")
    return v


def _alpha(text):
    # accepts "0.0333" or "1/30"
    try:
        if "/" in text:
            num, den = text.split("/")
            return float(num) / float(den)
        return float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid alpha {text!r}") from None


def _add_filter_options(p, trials_default=200):
    p.add_argument("input", help="PPM/PGM (or PNG) image")
    p.add_argument("--sigma-s", type=float, default=5.0, help="spatial Gaussian width in pixels")
    rng = p.add_mutually_exclusive_group(required=True)
    rng.add_argument("--sigma-r", type=float, help="isotropic range width; C = sigma_r^2 I")
    rng.add_argument("--cov", metavar="FILE", help="range covariance file (d, then d rows)")
    p.add_argument("--order", type=_order, default=10, help="raised-cosine order N (even)")
    p.add_argument("--trials", type=_positive_int, default=trials_default, help="Monte Carlo trials T")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--colorspace", choices=["rgb", "lab"], default="rgb")
    p.add_argument("--conv", choices=["fir", "recursive"], default="recursive",
                   help="convolution engine for mcsf")
    p.add_argument("--boundary", choices=["symmetric", "replicate"], default=None,
                   help="default: symmetric for fir, replicate for recursive")
    p.add_argument("--kernel", choices=["gaussian", "box"], default="gaussian")
    p.add_argument("--box-radius", type=int, default=None, help="box half-width (default ceil(3 sigma_s))")
    p.add_argument("--no-compact", action="store_true", help="run every trial, even duplicates")
    p.add_argument("--threads", type=_positive_int, default=None, help="numba thread count")


class Setup:
    """Parsed filtering configuration bound to one input image."""

    def __init__(self, args, sigma_s=None):
        self.args = args
        self.image = imgio.read_image(args.input)
        if self.image.channels > MAX_CHANNELS:
            raise UsageError(f"at most {MAX_CHANNELS} channels are supported")
        self.lab = args.colorspace == "lab"
        if self.lab:
            self.work = colorspace.rgb_to_lab(self.image)
        else:
            self.work = self.image
        d = self.work.channels
        if args.cov is not None:
            self.cov = kernelmath.read_covariance_file(args.cov)
        else:
            if not args.sigma_r > 0:
                raise UsageError("--sigma-r must be positive")
            self.cov = kernelmath.CovarianceSpec.isotropic(args.sigma_r, d)
        if self.cov.dim != d:
            raise UsageError(f"covariance is {self.cov.dim}-dimensional but the image has {d} channels")
        if args.boundary is not None:
            self.boundary = BoundaryPolicy.parse(args.boundary)
        elif args.conv == "recursive":
            self.boundary = BoundaryPolicy.REPLICATE
        else:
            self.boundary = BoundaryPolicy.SYMMETRIC
        self.set_sigma(args.sigma_s if sigma_s is None else sigma_s)

    def set_sigma(self, sigma_s):
        a = self.args
        if a.kernel == "box":
            radius = a.box_radius if a.box_radius is not None else math.ceil(3 * sigma_s)
            self.kernel = kernelmath.SpatialKernel.box(radius)
        else:
            self.kernel = kernelmath.SpatialKernel.gaussian(sigma_s)
        try:
            self.engine = ConvolutionEngine(a.conv, self.kernel, self.boundary)
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    def params(self, seed=None, order=None, trials=None):
        a = self.args
        return McsfParams.from_cov(self.cov, a.order if order is None else order,
                                   a.trials if trials is None else trials,
                                   a.seed if seed is None else seed)

    def warm_up(self):
        """Compile the JIT kernels on a tiny crop so they stay out of timings."""
        crop = Image(self.work.data[:, :8, :8])
        self.run("mcsf", trials=2, image=crop)
        self.run("direct", image=crop)

    def to_rgb(self, img):
        return colorspace.lab_to_rgb(img) if self.lab else img

    def run(self, method, seed=None, order=None, trials=None, image=None):
        """Run one filter; returns (output in input color space, record dict)."""
        work = self.work if image is None else image
        t0 = time.perf_counter()
        if method == "direct":
            out = direct_bilateral(work, self.kernel, self.cov, self.boundary)
            rec = {"transform_ms": None, "trials_ms": None, "divide_ms": None}
            extra = {"z_min": None, "imag_max": None, "convolutions": None}
        else:
            p = self.params(seed, order, trials)
            res = mcsf_filter(work, self.kernel, self.cov, p, self.engine,
                              compact=not self.args.no_compact)
            out = res.filtered
            rec = {k: res.timings[k] for k in ("transform_ms", "trials_ms", "divide_ms")}
            extra = {"z_min": res.z_min, "imag_max": res.imag_max,
                     "convolutions": count_convolutions(p, work.channels),
                     "convolution_sets_run": res.trials_used}
        rec["total_ms"] = 1e3 * (time.perf_counter() - t0)
        return self.to_rgb(out), {"timings": rec, **extra}


def cmd_filter(args):
    setup = Setup(args)
    out, rec = setup.run(args.method)
    imgio.write_image(out, args.output)
    print(json.dumps({"method": args.method, "output": args.output, **rec}))
    return EXIT_OK


def _fmt_db(m):
    return "-inf" if m == 0.0 else 10.0 * math.log10(m)


def cmd_compare(args):
    setup = Setup(args)
    setup.warm_up()
    cache = {}

    def run(method, seed):
        key = method if method == "direct" else (method, seed)
        if key not in cache:
            cache[key] = setup.run(method, seed=seed)
        return cache[key]

    records = []
    for r in range(args.repeat):
        seed = args.seed + r
        out_a, rec_a = run(args.method_a, seed)
        out_b, rec_b = run(args.method_b, seed)
        ta = rec_a["timings"]["total_ms"]
        tb = rec_b["timings"]["total_ms"]
        m = mse(out_a, out_b)
        records.append({"seed": seed, "mse": m, "mse_db": _fmt_db(m), "a_ms": ta, "b_ms": tb,
                        "speedup": ta / tb if tb > 0 else None})
    if args.aggregate or args.repeat == 1:
        ms = np.array([r["mse"] for r in records])
        ta = np.array([r["a_ms"] for r in records])
        tb = np.array([r["b_ms"] for r in records])
        records = [{"method_a": args.method_a, "method_b": args.method_b, "repeats": args.repeat,
                    "mse": float(ms.mean()), "mse_std": float(ms.std()), "mse_db": _fmt_db(float(ms.mean())),
                    "a_ms": float(ta.mean()), "b_ms": float(tb.mean()),
                    "speedup": float(ta.mean() / tb.mean()) if tb.mean() > 0 else None}]
    if args.format == "json":
        for rec in records:
            print(json.dumps(rec))
    else:
        w = csv.DictWriter(sys.stdout, fieldnames=list(records[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(records)
    return EXIT_OK


def cmd_sweep(args):
    setup = Setup(args)
    setup.warm_up()
    ref, _ = setup.run("direct")
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["N", "T", "mean_mse", "std_mse", "mean_runtime_ms"])
    for N in args.orders:
        for T in args.trials_grid:
            errs, times = [], []
            for r in range(args.repeat):
                out, rec = setup.run("mcsf", seed=args.seed + r, order=N, trials=T)
                errs.append(mse(ref, out))
                times.append(rec["timings"]["total_ms"])
            w.writerow([N, T, repr(float(np.mean(errs))), repr(float(np.std(errs))), repr(float(np.mean(times)))])
            sys.stdout.flush()
    return EXIT_OK


def cmd_bench(args):
    setup = Setup(args)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["sigma_s", "direct_ms", "mcsf_ms"])
    setup.warm_up()
    for s in args.sigma_s_grid:
        setup.set_sigma(s)
        t_mcsf = min(setup.run("mcsf")[1]["timings"]["total_ms"] for _ in range(args.repeat))
        t_direct = "" if args.skip_direct else repr(min(
            setup.run("direct")[1]["timings"]["total_ms"] for _ in range(args.repeat)))
        w.writerow([repr(float(s)), t_direct, repr(t_mcsf)])
        sys.stdout.flush()
    return EXIT_OK


def kernel_table_rows(alpha, N, T, seed, t_max=255):
    t = np.arange(-t_max, t_max + 1, dtype=np.float64)
    params = McsfParams(N=N, T=T, gammas=[alpha / math.sqrt(N)], seed=seed)
    est = sampled_kernel(t[:, None], draw_trials(params, 1), params)
    gauss = kernelmath.gaussian_range(t[:, None], [alpha])
    rc = kernelmath.raised_cosine(t, alpha, N)
    return t, gauss, rc, est.real, est.imag


def cmd_kernel_table(args):
    if args.alpha is None:
        args.alpha = 1.0 / args.sigma_r
    cols = kernel_table_rows(args.alpha, args.order, args.trials, args.seed, args.t_max)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["t", "gaussian", f"raised_cosine_{args.order}", "mc_estimate_re", "mc_estimate_im"])
    for row in zip(*cols):
        w.writerow([int(row[0])] + [repr(float(v)) for v in row[1:]])
    return EXIT_OK


_shown = set()


def _show_warning(message, category, filename, lineno, file=None, line=None):
    if str(message) not in _shown:
        _shown.add(str(message))
        print(f"mcsf: warning: {message}", file=sys.stderr)


def _set_threads(n):
    from ._backend import HAVE_NUMBA

    if not HAVE_NUMBA:
        raise UsageError("--threads needs numba")
    import numba

    if n > numba.config.NUMBA_NUM_THREADS:
        raise UsageError(f"--threads {n} exceeds NUMBA_NUM_THREADS={numba.config.NUMBA_NUM_THREADS}")
    numba.set_num_threads(n)


def build_parser():
    parser = argparse.ArgumentParser(prog="mcsf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("filter", help="filter one image")
    _add_filter_options(p)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--method", choices=["mcsf", "direct"], default="mcsf")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("compare", help="MSE and timing between two methods")
    _add_filter_options(p, trials_default=300)
    p.add_argument("--method-a", choices=["mcsf", "direct"], default="direct")
    p.add_argument("--method-b", choices=["mcsf", "direct"], default="mcsf")
    p.add_argument("--repeat", type=_positive_int, default=1, help="repeat with seeds seed..seed+k-1")
    p.add_argument("--aggregate", action="store_true", help="report the mean over repeats")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="averaged MSE against the direct filter over (N, T) grids")
    _add_filter_options(p)
    p.add_argument("--orders", type=_int_list, default=[10, 20])
    p.add_argument("--trials-grid", type=_int_list, default=[25, 50, 100, 200, 400])
    p.add_argument("--repeat", type=_positive_int, default=20)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench", help="runtime of direct and mcsf across sigma_s")
    _add_filter_options(p, trials_default=300)
    p.add_argument("--sigma-s-grid", type=_float_list, default=[1, 2, 3, 4, 5, 10])
    p.add_argument("--repeat", type=_positive_int, default=1, help="report the minimum of k timings")
    p.add_argument("--skip-direct", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("kernel-table", help="Gaussian vs raised cosine vs Monte Carlo estimate")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--alpha", type=_alpha, default=None, help="e.g. 1/30")
    g.add_argument("--sigma-r", type=float, default=30.0)
    p.add_argument("--order", type=_order, default=20)
    p.add_argument("--trials", type=_positive_int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t-max", type=int, default=255)
    p.set_defaults(func=cmd_kernel_table)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "threads", None):
            _set_threads(args.threads)
        with warnings.catch_warnings():
            warnings.simplefilter("always", ParameterWarning)
            warnings.showwarning = _show_warning
            return args.func(args)
    except UsageError as exc:
        print(f"mcsf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateDenominator as exc:
        print(f"mcsf: numerical degeneracy: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except FileNotFoundError as exc:
        print(f"mcsf: error: no such file: {exc.filename}", file=sys.stderr)
        return EXIT_DATA
    except (McsfError, OSError, ValueError) as exc:
        print(f"mcsf: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
