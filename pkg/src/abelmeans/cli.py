"""Command line front end.

Exit status: 0 success, 2 usage error, 3 unreadable or malformed input,
4 numerical failure.
"""
from __future__ import annotations

import argparse
import math
import sys
import warnings

import numpy as np

from . import phantom as ph
from . import reconstruction as rc
from . import sinogram as sg
from .kernel import KernelParams, phi, profile
from .quadrature import QuadSpec, QuadratureError

EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_NUMERIC = 4

# Below this the kernel peak 1/(2 pi^2 alpha^2) exceeds ~5e10.
TINY_ALPHA = 1e-6


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


def _positive(kind):
    def conv(text):
        v = kind(text)
        if not v > 0 or (kind is float and not math.isfinite(v)):
            raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
        return v
    return conv


class _PieceAction(argparse.Action):
    """Collects ``--disc``/``--rect`` occurrences in command-line order."""

    def __call__(self, parser, namespace, values, option_string=None):
        items = list(getattr(namespace, self.dest) or [])
        items.append((option_string.lstrip("-"), list(values)))
        setattr(namespace, self.dest, items)


def _add_grid(p, n_default=101, span=(-3.0, 3.0)):
    g = p.add_argument_group("grid")
    g.add_argument("--nx", type=_positive(int), default=n_default)
    g.add_argument("--ny", type=_positive(int), default=n_default)
    g.add_argument("--xrange", type=float, nargs=2, default=list(span), metavar=("LO", "HI"))
    g.add_argument("--yrange", type=float, nargs=2, default=list(span), metavar=("LO", "HI"))


def _grid(args) -> rc.ReconGrid:
    try:
        return rc.ReconGrid(tuple(args.xrange), tuple(args.yrange), args.nx, args.ny)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=_positive(int), default=1)
    common.add_argument("--quiet", action="store_true")

    parser = argparse.ArgumentParser(prog="abelmeans", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phantom", parents=[common], help="write a phantom description file")
    p.add_argument("--disc", nargs=4, action=_PieceAction, dest="pieces",
                   metavar=("CX", "CY", "RHO", "AMP"))
    p.add_argument("--rect", nargs=5, action=_PieceAction, dest="pieces",
                   metavar=("CX", "CY", "HX", "HY", "AMP"))
    p.add_argument("--out", required=True)
    p.add_argument("--truth-grid", help="also write exact local averages on the grid as CSV")
    _add_grid(p)

    p = sub.add_parser("sinogram", parents=[common], help="sample projections of a phantom")
    p.add_argument("--phantom", required=True)
    p.add_argument("--npsi", type=_positive(int), required=True)
    p.add_argument("--nt", type=_positive(int), required=True)
    p.add_argument("--tmin", type=float, required=True)
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("reconstruct", parents=[common], help="evaluate A_alpha f on a grid")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--phantom")
    src.add_argument("--sinogram")
    p.add_argument("--truth", help="phantom file used as ground truth for a sinogram source")
    p.add_argument("--alpha", type=_positive(float), required=True)
    p.add_argument("--epsilon-factor", type=_positive(float), default=2.0)
    p.add_argument("--method", choices=rc.METHODS, default="split")
    p.add_argument("--out", required=True, help="grid CSV")
    p.add_argument("--pgm", help="also write an 8-bit ASCII PGM")
    p.add_argument("--report", help="also write the text report here")
    q = p.add_argument_group("quadrature")
    q.add_argument("--npsi", type=_positive(int), default=rc.PSI_RULE.n_panels)
    q.add_argument("--nt-inner", type=_positive(int), default=rc.INNER_RULE.n_panels)
    q.add_argument("--nt-outer", type=_positive(int), default=rc.OUTER_RULE.n_panels)
    q.add_argument("--nt-naive", type=_positive(int), default=rc.NAIVE_RULE.n_panels)
    q.add_argument("--ntheta", type=_positive(int), default=rc.ORACLE_N_THETA)
    _add_grid(p)

    p = sub.add_parser("compare", parents=[common], help="error report between two grids")
    p.add_argument("grid")
    tgt = p.add_mutually_exclusive_group(required=True)
    tgt.add_argument("reference", nargs="?")
    tgt.add_argument("--truth", help="phantom file; compare against exact local averages")
    p.add_argument("--out")

    p = sub.add_parser("kernel-profile", parents=[common], help="tabulate phi_alpha in t")
    p.add_argument("--alpha", type=_positive(float), default=0.2)
    p.add_argument("--x", type=float, nargs=2, default=[0.0, 0.0], metavar=("X1", "X2"))
    p.add_argument("--psi", type=float, default=0.0)
    p.add_argument("--tmin", type=float, default=-1.0)
    p.add_argument("--tmax", type=float, default=1.0)
    p.add_argument("--n", type=_positive(int), default=401)
    p.add_argument("--out", required=True)
    return parser


def _warn(args, msg):
    if not args.quiet:
        print(f"warning: {msg}", file=sys.stderr)


def _say(args, msg):
    if not args.quiet:
        print(msg)


def _load_phantom(path):
    try:
        return ph.read_phantom(path)
    except (OSError, ph.PhantomFormatError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_sinogram(path):
    try:
        return sg.read(path)
    except (OSError, sg.SinogramFormatError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_grid(path):
    try:
        return rc.read_csv(path)
    except (OSError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_phantom(args) -> int:
    # Tokens are written verbatim; parsing them back validates every number.
    lines = ["# abelmeans phantom: disc cx cy rho amp | rect cx cy hx hy amp"]
    lines += [" ".join([kind, *tokens]) for kind, tokens in (args.pieces or [])]
    text = "\n".join(lines) + "\n"
    try:
        phantom = ph.parse_phantom(text)
    except ph.PhantomFormatError as exc:
        raise UsageError(f"bad piece specification: {exc}") from None
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    _say(args, f"wrote {len(phantom.pieces)} piece(s) to {args.out}")
    if args.truth_grid:
        rc.write_csv(rc.truth_grid(phantom, _grid(args)), args.truth_grid)
        _say(args, f"wrote local-average grid to {args.truth_grid}")
    return 0


def cmd_sinogram(args) -> int:
    if args.npsi < 2 or args.nt < 2:
        raise UsageError("--npsi and --nt must be at least 2")
    if not args.tmin < args.tmax:
        raise UsageError("--tmin must be below --tmax")
    phantom = _load_phantom(args.phantom)
    lo, hi = ph.support(phantom, np.arange(args.npsi) * (math.pi / args.npsi))
    if phantom.pieces and (lo.min() < args.tmin or hi.max() > args.tmax):
        _warn(args, f"t range does not cover projections [{lo.min():.6g}, {hi.max():.6g}]")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        s = sg.sample(phantom, args.npsi, args.nt, (args.tmin, args.tmax))
    sg.write(s, args.out)
    _say(args, f"wrote {args.npsi}x{args.nt} sinogram to {args.out}")
    return 0


def cmd_reconstruct(args) -> int:
    params = KernelParams(args.alpha, args.epsilon_factor)
    if args.phantom:
        source = _load_phantom(args.phantom)
        truth = source
    else:
        if args.method == "oracle":
            raise UsageError("--method oracle needs --phantom; a sinogram has no planar form")
        source = _load_sinogram(args.sinogram)
        truth = _load_phantom(args.truth) if args.truth else None
    for name in ("npsi", "nt_inner", "nt_outer", "nt_naive"):
        if name != "npsi" and getattr(args, name) % 2:
            raise UsageError(f"--{name.replace('_', '-')} must be even (simpson rule)")
        if getattr(args, name) < 2:
            raise UsageError(f"--{name.replace('_', '-')} must be at least 2")
    grid = _grid(args)

    psi_rule = QuadSpec("midpoint", args.npsi)
    if args.method == "naive":
        quad = dict(t_rule=QuadSpec("simpson", args.nt_naive), psi_rule=psi_rule)
        width = rc.t_panel_width(source, args.nt_naive, psi_rule)
    elif args.method == "split":
        quad = dict(inner=QuadSpec("simpson", args.nt_inner),
                    outer=QuadSpec("simpson", args.nt_outer), psi_rule=psi_rule)
        width = None
    else:
        quad = dict(n_theta=args.ntheta)
        width = None

    if args.alpha < TINY_ALPHA:
        _warn(args, f"alpha={args.alpha:g}: kernel peak {1 / (2 * math.pi**2 * args.alpha**2):.3g} "
                    "is beyond what fixed-grid quadrature resolves")
    if width is not None and args.alpha < 4 * width:
        _warn(args, f"alpha={args.alpha:g} is below 4 t-panel widths ({width:.3g}); "
                    "the unsplit rule will miss or overweight the kernel peak (try --method split)")

    # Overflow shows up as a non-finite point value, reported with its coordinates.
    with np.errstate(all="ignore"):
        result = rc.reconstruct_grid(source, params, grid, args.method, threads=args.threads, **quad)
    rc.write_csv(result, args.out)
    if args.pgm:
        rc.write_pgm(result, args.pgm)

    lines = []
    if truth is not None:
        rep = rc.compare(result, rc.truth_grid(truth, grid), method=args.method,
                         alpha=args.alpha, reference_name="Sf")
        lines.append(rep.format().rstrip("\n"))
    else:
        v = result.values
        lines += [f"method: {args.method}", f"alpha: {args.alpha!r}", "reference: none",
                  f"min_value: {float(v.min())!r}", f"max_value: {float(v.max())!r}"]
    lines.append(f"epsilon: {params.epsilon!r}")
    lines.append("quadrature: " + " ".join(
        f"{k}={v.rule}:{v.n_panels}" if isinstance(v, QuadSpec) else f"{k}={v}"
        for k, v in sorted(quad.items())))
    text = "\n".join(lines) + "\n"
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    _say(args, text.rstrip("\n"))
    return 0


def cmd_compare(args) -> int:
    grid = _load_grid(args.grid)
    if args.truth:
        ref = rc.truth_grid(_load_phantom(args.truth), grid)
        name = "Sf"
    else:
        ref = _load_grid(args.reference)
        name = args.reference
    try:
        rep = rc.compare(grid, ref, method=args.grid, reference_name=name)
    except rc.GeometryMismatch as exc:
        raise InputError(str(exc)) from None
    text = rep.format()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    _say(args, text.rstrip("\n"))
    return 0


def cmd_kernel_profile(args) -> int:
    if args.n < 2 or not args.tmin < args.tmax:
        raise UsageError("need --n >= 2 and --tmin < --tmax")
    params = KernelParams(args.alpha)
    prof = profile(params, args.x, args.psi)
    t = np.linspace(args.tmin, args.tmax, args.n)
    vals = phi(params, args.x, t, args.psi)
    head = (f"# alpha={args.alpha!r} beta={prof.beta!r} t_max={prof.t_max!r} "
            f"peak_value={prof.peak_value!r} t_min_left={prof.t_min_left!r} "
            f"t_min_right={prof.t_min_right!r} min_value={prof.min_value!r} "
            f"zero_left={prof.zero_crossings[0]!r} zero_right={prof.zero_crossings[1]!r}")
    rows = [head, "t,phi"] + [f"{float(a)!r},{float(b)!r}" for a, b in zip(t, vals)]
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(rows) + "\n")
    _say(args, f"wrote {args.n} samples to {args.out}")
    return 0


COMMANDS = {
    "phantom": cmd_phantom,
    "sinogram": cmd_sinogram,
    "reconstruct": cmd_reconstruct,
    "compare": cmd_compare,
    "kernel-profile": cmd_kernel_profile,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"abelmeans {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"abelmeans {args.command}: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (QuadratureError, FloatingPointError) as exc:
        print(f"abelmeans {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
