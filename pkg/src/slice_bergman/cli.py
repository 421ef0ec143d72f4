"""Command line entry point: ``slice-bergman verify | compute | plot``.

Exit codes: 0 success / all checks pass, 1 a verification failed,
2 usage, configuration or input error.
"""

import argparse
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .bergman import (
    DEFAULT_N_R,
    DEFAULT_N_THETA,
    DiskQuadrature,
    SliceMismatchError,
    bergman_inner,
    bergman_inner_closed,
    bergman_norm,
    bergman_norm_closed,
    bergman_project,
    bergman_project_closed,
    kernel_eval,
    kernel_function,
    toeplitz,
    toeplitz_closed,
)
from .bundle import bundle_projection, hl_metric, rho_metric, section
from .plot import render, write_ppm
from .quaternion import E1, Frame, imag
from .series import DEFAULT_DEGREE
from .suites import DEFAULT_SAMPLES, SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

QUANTITIES = ("norm", "inner", "project", "toeplitz", "kernel", "section", "projection", "metric", "rho")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    degree: int = DEFAULT_DEGREE
    n_r: int = DEFAULT_N_R
    n_theta: int = DEFAULT_N_THETA
    samples: int | None = None
    tol: float | None = None
    suites: list = field(default_factory=lambda: list(SUITES))
    inputs: list = field(default_factory=list)
    out: str | None = None

    def validate(self):
        if self.degree < 0:
            raise ConfigError("--degree must be >= 0")
        if self.n_r < self.degree + 1:
            raise ConfigError(f"--n-r must be >= degree + 1 = {self.degree + 1} for exact quadrature")
        if self.n_theta < 2 * self.degree + 2:
            raise ConfigError(f"--n-theta must be >= 2 * degree + 2 = {2 * self.degree + 2}")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("--tol must be positive")
        if self.samples is not None and self.samples < 1:
            raise ConfigError("--samples must be >= 1")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suite(s): {', '.join(unknown)}")

    def quadrature(self):
        return DiskQuadrature(self.n_r, self.n_theta)

    def replay(self):
        d = asdict(self)
        d.pop("out")
        return d


def _common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--degree", type=int, default=DEFAULT_DEGREE, help="degree cap N")
    p.add_argument("--n-r", type=int, default=DEFAULT_N_R, help="radial Gauss nodes")
    p.add_argument("--n-theta", type=int, default=DEFAULT_N_THETA, help="angular nodes")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", default=None, help="output path (stdout when omitted)")
    p.add_argument("--format", choices=["json"], default="json")


def build_parser():
    parser = argparse.ArgumentParser(prog="slice-bergman", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites")
    _common(v)
    v.add_argument("--suite", action="append", choices=SUITES,
                   help="suite to run (repeatable; default all)")
    v.add_argument("--samples", type=int, default=None,
                   help="override per-suite sample counts " + str(DEFAULT_SAMPLES))

    c = sub.add_parser("compute", help="compute one quantity from JSON inputs")
    _common(c)
    c.add_argument("quantity", choices=QUANTITIES)
    c.add_argument("--in", dest="inputs", action="append", default=[], metavar="FILE")
    c.add_argument("--symbol", metavar="FILE", help="Toeplitz symbol (sliced function JSON)")
    c.add_argument("--side", choices=["left", "right"], default="left")
    c.add_argument("--axis", type=float, nargs=3, default=None, metavar=("X", "Y", "Z"),
                   help="slice unit imaginary for norms/inner products (default e1)")
    c.add_argument("--frame", type=float, nargs=6, default=None,
                   metavar=("IX", "IY", "IZ", "JX", "JY", "JZ"))
    c.add_argument("--q", type=float, nargs=4, metavar=("W", "X", "Y", "Z"))
    c.add_argument("--z", type=float, nargs=4, metavar=("W", "X", "Y", "Z"))

    pl = sub.add_parser("plot", help="domain-coloring PPM of a slice restriction")
    _common(pl)
    pl.add_argument("--in", dest="inputs", action="append", default=[], metavar="FILE")
    pl.add_argument("--kernel-q", type=float, nargs=4, default=None, metavar=("W", "X", "Y", "Z"),
                    help="plot the reproducing kernel K_q instead of an input series")
    pl.add_argument("--frame", type=float, nargs=6, default=None,
                    metavar=("IX", "IY", "IZ", "JX", "JY", "JZ"))
    pl.add_argument("--size", type=int, default=256)
    return parser


def _frame(values):
    if values is None:
        return Frame.standard()
    try:
        return Frame.from_vectors(imag(np.array(values[:3])), imag(np.array(values[3:])))
    except ValueError as exc:
        raise ConfigError(f"--frame: {exc}") from None


def _axis(values):
    if values is None:
        return E1
    v = np.asarray(values, dtype=np.float64)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ConfigError("--axis must be non-zero")
    return imag(v / n)


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _need(inputs, count, what):
    if len(inputs) < count:
        raise ConfigError(f"{what} needs {count} --in file(s)")
    return inputs[:count]


def _trimmed(f, eps=1e-13):
    big = np.flatnonzero(np.max(np.abs(f.coeffs), axis=1) > eps)
    n = int(big[-1]) + 1 if big.size else 1
    return [io.quat_to_json(a) for a in f.coeffs[:n]]


def cmd_verify(cfg):
    quad = cfg.quadrature()
    reports = []
    for name in cfg.suites:
        for r in run_suite(name, cfg.seed, cfg.samples, cfg.degree, quad, cfg.tol):
            d = r.to_json()
            d["suite"] = name
            reports.append(d)
    ok = all(r["pass"] for r in reports)
    payload = {"command": "verify", "config": cfg.replay(), "seed": cfg.seed,
               "reports": reports, "pass": ok}
    _emit(io.dumps(payload), cfg.out)
    return EXIT_OK if ok else EXIT_FAIL


def compute(args, cfg):
    """Return the JSON-able result of ``compute``."""
    quad = cfg.quadrature()
    N = cfg.degree
    q = args.quantity
    if q == "norm":
        (p,) = _need(cfg.inputs, 1, q)
        f = io.load(p, io.series_from_json)
        return {"quantity": q, "value": bergman_norm(f, _axis(args.axis), quad),
                "closed_form": bergman_norm_closed(f)}
    if q == "inner":
        pf, pg = _need(cfg.inputs, 2, q)
        f, g = io.load(pf, io.series_from_json), io.load(pg, io.series_from_json)
        return {"quantity": q, "value": io.quat_to_json(bergman_inner(f, g, _axis(args.axis), quad)),
                "closed_form": io.quat_to_json(bergman_inner_closed(f, g))}
    if q == "project":
        (p,) = _need(cfg.inputs, 1, q)
        f = io.load(p, io.sampled_from_json)
        got = bergman_project(f, quad, N)
        return {"quantity": q, "series": _trimmed(got),
                "residual": got.max_coeff_diff(bergman_project_closed(f, N))}
    if q == "toeplitz":
        (p,) = _need(cfg.inputs, 1, q)
        if not args.symbol:
            raise ConfigError("toeplitz needs --symbol")
        f = io.load(p, io.sampled_from_json)
        alpha = io.load(args.symbol, io.sampled_from_json)
        try:
            got = toeplitz(args.side, alpha, f, quad, N)
        except SliceMismatchError as exc:
            raise ConfigError(str(exc)) from None
        return {"quantity": q, "side": args.side, "series": _trimmed(got),
                "residual": got.max_coeff_diff(toeplitz_closed(args.side, alpha, f, N))}
    if q == "kernel":
        if args.q is None:
            raise ConfigError("kernel needs --q")
        qq = np.array(args.q)
        if np.linalg.norm(qq) >= 1.0:
            raise ConfigError("--q must lie in the open unit ball")
        out = {"quantity": q, "q": args.q, "K_q": io.series_to_json(kernel_function(qq, N))}
        if args.z is not None:
            out["value"] = io.quat_to_json(kernel_eval(qq, np.array(args.z), N))
        return out
    if q == "section":
        (p,) = _need(cfg.inputs, 1, q)
        f = io.load(p, io.series_from_json)
        return {"quantity": q, "element": io.hl_to_json(section(f, _frame(args.frame)))}
    if q == "projection":
        (p,) = _need(cfg.inputs, 1, q)
        A = io.load(p, io.hl_from_json)
        return {"quantity": q, "series": io.series_to_json(bundle_projection(A))}
    if q == "metric":
        pa, pb = _need(cfg.inputs, 2, q)
        A, B = io.load(pa, io.hl_from_json), io.load(pb, io.hl_from_json)
        return {"quantity": q, "value": hl_metric(A, B), "quadrature": hl_metric(A, B, quad)}
    if q == "rho":
        pa, pb = _need(cfg.inputs, 2, q)
        fa, fra = io.load(pa, _series_with_frame)
        fb, frb = io.load(pb, _series_with_frame)
        return {"quantity": q, "value": rho_metric(fa, fra, fb, frb, _axis(args.axis), quad)}
    raise ConfigError(f"unknown quantity {q!r}")


def _series_with_frame(x, loc="$"):
    if not isinstance(x, dict) or "series" not in x:
        raise io.ParseError('expected {"series": [...], "frame": {...}}', loc)
    f = io.series_from_json(x["series"], f"{loc}.series")
    fr = io.frame_from_json(x["frame"], f"{loc}.frame") if "frame" in x else Frame.standard()
    return f, fr


def cmd_plot(args, cfg):
    frame = _frame(args.frame)
    if args.kernel_q is not None:
        qq = np.array(args.kernel_q)
        if np.linalg.norm(qq) >= 1.0:
            raise ConfigError("--kernel-q must lie in the open unit ball")
        f = kernel_function(qq, cfg.degree)
    else:
        (p,) = _need(cfg.inputs, 1, "plot")
        f = io.load(p, io.series_from_json)
    if args.size < 1:
        raise ConfigError("--size must be positive")
    if not cfg.out:
        raise ConfigError("plot needs --out")
    img = render(f, frame, args.size)
    try:
        write_ppm(cfg.out, img)
    except OSError as exc:
        raise ConfigError(f"cannot write {cfg.out}: {exc.strerror}") from None
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        seed=args.seed,
        degree=args.degree,
        n_r=args.n_r,
        n_theta=args.n_theta,
        samples=getattr(args, "samples", None),
        tol=args.tol,
        suites=getattr(args, "suite", None) or list(SUITES),
        inputs=getattr(args, "inputs", []),
        out=args.out,
    )
    try:
        cfg.validate()
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "compute":
            _emit(io.dumps(compute(args, cfg)), cfg.out)
            return EXIT_OK
        return cmd_plot(args, cfg)
    except (ConfigError, io.ParseError) as exc:
        print(f"slice-bergman: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
