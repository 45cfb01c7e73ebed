"""Pointwise and gridded evaluation of the Abel means ``A_alpha f``.

Three independent routes are provided:

``naive``
    Double integral of ``phi * Rf`` with one composite rule in ``t``.
``split``
    Same integrand, but the ``t`` integral is cut at ``beta -/+ eps`` and the
    window around the kernel peak gets its own fine rule.
``oracle``
    Planar convolution ``(h * f)(x)`` in polar coordinates about ``x``.  The
    radial integral along each ray is done exactly (the pieces are constant
    along a ray segment and the radial kernel has an elementary
    antiderivative), leaving a midpoint rule in the angle.  It never touches
    the Radon transform, so it checks the other two routes.

A *source* for the first two routes is anything with ``radon(t, psi)`` and
``support(psi)``: a :class:`~abelmeans.phantom.Phantom` or a
:class:`~abelmeans.sinogram.Sinogram`.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import phantom as _ph
from .kernel import KernelParams, phi_offset, projection
from .quadrature import QuadSpec, QuadratureError, composite_nodes, inner_panels, split_intervals

METHODS = ("naive", "split", "oracle")

PSI_RULE = QuadSpec("midpoint", 180)
INNER_RULE = QuadSpec("simpson", 64)
OUTER_RULE = QuadSpec("simpson", 512)
# The unsplit route gets the tail rule stretched over the whole support.
NAIVE_RULE = QuadSpec("simpson", 512)
ORACLE_N_THETA = 2048


class GeometryMismatch(ValueError):
    """Two grids do not share the same evaluation points."""


# ---------------------------------------------------------------------------
# grids and reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ReconGrid:
    """Cell-centred lattice; ``values[i, j]`` belongs to ``(xs[i], ys[j])``."""

    x_range: tuple[float, float]
    y_range: tuple[float, float]
    nx: int
    ny: int
    values: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError("grid needs nx, ny >= 1")
        for lo, hi in (self.x_range, self.y_range):
            if not hi >= lo:
                raise ValueError("grid ranges must be increasing")
        if self.values is not None:
            v = np.asarray(self.values, dtype=float)
            if v.shape != (self.nx, self.ny):
                raise ValueError(f"values shape {v.shape} != ({self.nx}, {self.ny})")
            object.__setattr__(self, "values", v)

    @property
    def xs(self) -> np.ndarray:
        lo, hi = self.x_range
        return lo + (np.arange(self.nx) + 0.5) * ((hi - lo) / self.nx)

    @property
    def ys(self) -> np.ndarray:
        lo, hi = self.y_range
        return lo + (np.arange(self.ny) + 0.5) * ((hi - lo) / self.ny)

    def points(self) -> list[tuple[float, float]]:
        """Evaluation points in row-major order (x index outer)."""
        xs, ys = self.xs, self.ys
        return [(float(x), float(y)) for x in xs for y in ys]

    def with_values(self, values) -> "ReconGrid":
        return replace(self, values=np.asarray(values, dtype=float).reshape(self.nx, self.ny))


@dataclass(frozen=True)
class ReconReport:
    method: str
    alpha: Optional[float]
    rmse: float
    max_abs_err: float
    min_value: float
    max_value: float
    reference: str

    def format(self) -> str:
        alpha = "n/a" if self.alpha is None else repr(self.alpha)
        return (
            f"method: {self.method}\n"
            f"alpha: {alpha}\n"
            f"reference: {self.reference}\n"
            f"rmse: {self.rmse!r}\n"
            f"max_abs_err: {self.max_abs_err!r}\n"
            f"min_value: {self.min_value!r}\n"
            f"max_value: {self.max_value!r}\n"
        )


# ---------------------------------------------------------------------------
# Radon-domain routes
# ---------------------------------------------------------------------------

def _psi_nodes(psi_rule: QuadSpec):
    return composite_nodes(psi_rule.rule, psi_rule.n_panels, 0.0, math.pi)


def _segment(source, alpha, beta, psi, lo, hi, rule: QuadSpec):
    t, w = composite_nodes(rule.rule, rule.n_panels, lo, hi)
    vals = phi_offset(alpha, beta[:, None] - t) * source.radon(t, psi[:, None])
    return np.sum(w * vals, axis=1)


def _finish(x, per_psi, w_psi) -> float:
    value = float(np.sum(w_psi * per_psi))
    if not math.isfinite(value):
        raise QuadratureError(f"non-finite reconstruction at x=({x[0]!r}, {x[1]!r})")
    return value


def _t_range(source, psi, t_domain):
    # Rf vanishes off the support, so cutting t there is exact.  A fixed
    # t_domain makes the nodes independent of the source, hence the route linear.
    if t_domain is None:
        return source.support(psi)
    lo, hi = map(float, t_domain)
    if not hi > lo:
        raise ValueError(f"invalid t_domain {t_domain}")
    return np.full(psi.shape, lo), np.full(psi.shape, hi)


def abel_naive(source, params: KernelParams, x, *, t_rule: QuadSpec = NAIVE_RULE,
               psi_rule: QuadSpec = PSI_RULE, t_domain=None) -> float:
    """``A_alpha f(x)`` with a single composite rule in ``t``.

    The rule spans each projection's support, or ``t_domain`` when given.
    """
    psi, w_psi = _psi_nodes(psi_rule)
    beta = projection(x, psi)
    lo, hi = _t_range(source, psi, t_domain)
    per_psi = _segment(source, params.alpha, beta, psi, lo, hi, t_rule)
    return _finish(x, per_psi, w_psi)


def abel_split(source, params: KernelParams, x, *, inner: QuadSpec = INNER_RULE,
               outer: QuadSpec = OUTER_RULE, psi_rule: QuadSpec = PSI_RULE,
               t_domain=None) -> float:
    """``A_alpha f(x)`` with the ``t`` integral split at ``beta -/+ epsilon``."""
    psi, w_psi = _psi_nodes(psi_rule)
    beta = projection(x, psi)
    lo, hi = _t_range(source, psi, t_domain)
    eps = params.epsilon
    left, mid, right = split_intervals(beta, eps, lo, hi)
    span = float(np.max(right[1] - left[0]))
    n_in = inner_panels(inner.n_panels, eps, span / outer.n_panels)
    if inner.rule == "simpson":
        n_in += n_in % 2
    inner = replace(inner, n_panels=n_in)
    per_psi = (_segment(source, params.alpha, beta, psi, *left, outer)
               + _segment(source, params.alpha, beta, psi, *mid, inner)
               + _segment(source, params.alpha, beta, psi, *right, outer))
    return _finish(x, per_psi, w_psi)


def t_panel_width(source, n_panels: int, psi_rule: QuadSpec = PSI_RULE) -> float:
    """Widest ``t`` panel a rule with ``n_panels`` panels uses over the supports."""
    psi, _ = _psi_nodes(psi_rule)
    lo, hi = source.support(psi)
    return float(np.max(hi - lo)) / n_panels


# ---------------------------------------------------------------------------
# convolution oracle
# ---------------------------------------------------------------------------

def _ray_segments(piece, x, c, s):
    """Parameter interval ``[r0, r1]`` (r >= 0) of the ray ``x + r (c, s)`` inside ``piece``."""
    if isinstance(piece, _ph.DiscPiece):
        d1 = x[0] - piece.center[0]
        d2 = x[1] - piece.center[1]
        b = d1 * c + d2 * s
        disc = b * b - (d1 * d1 + d2 * d2 - piece.radius**2)
        root = np.sqrt(np.clip(disc, 0.0, None))
        r0, r1 = -b - root, -b + root
        r0 = np.where(disc > 0, r0, 0.0)
        r1 = np.where(disc > 0, r1, 0.0)
    else:
        r0 = np.zeros_like(c)
        r1 = np.full_like(c, np.inf)
        for p0, dk, hk in ((x[0] - piece.center[0], c, piece.half_widths[0]),
                           (x[1] - piece.center[1], s, piece.half_widths[1])):
            par = np.abs(dk) < 1e-15
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                a = (-hk - p0) / dk
                bb = (hk - p0) / dk
            inside = abs(p0) <= hk
            r0 = np.maximum(r0, np.where(par, 0.0 if inside else np.inf, np.minimum(a, bb)))
            r1 = np.minimum(r1, np.where(par, np.inf if inside else -np.inf, np.maximum(a, bb)))
    r0 = np.maximum(r0, 0.0)
    r1 = np.maximum(r1, r0)
    return r0, r1


def _radial_mass(alpha: float, r0, r1):
    """``int_{r0}^{r1} alpha r / (alpha^2 + r^2)^{3/2} dr`` in closed form."""
    return alpha / np.sqrt(alpha * alpha + r0 * r0) - alpha / np.sqrt(alpha * alpha + r1 * r1)


def abel_oracle(phantom: _ph.Phantom, params: KernelParams, x, *,
                n_theta: int = ORACLE_N_THETA) -> float:
    """``(h * f)(x)``: exact along each ray, midpoint rule over ``n_theta`` ray angles."""
    if not isinstance(phantom, _ph.Phantom):
        raise TypeError("the convolution oracle needs an analytic phantom, not sampled data")
    theta = (np.arange(n_theta) + 0.5) * (2.0 * math.pi / n_theta)
    c, s = np.cos(theta), np.sin(theta)
    acc = np.zeros(n_theta)
    for p in phantom.pieces:
        r0, r1 = _ray_segments(p, x, c, s)
        acc += p.amplitude * _radial_mass(params.alpha, r0, r1)
    return _finish(x, acc, 1.0 / n_theta)


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------

def evaluate(source, params: KernelParams, x, method: str, **quad) -> float:
    if method == "naive":
        return abel_naive(source, params, x, **quad)
    if method == "split":
        return abel_split(source, params, x, **quad)
    if method == "oracle":
        return abel_oracle(source, params, x, **quad)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def reconstruct_grid(source, params: KernelParams, grid: ReconGrid, method: str = "split",
                     *, threads: int = 1, **quad) -> ReconGrid:
    """Evaluate ``A_alpha f`` at every grid point.

    Points are independent; with ``threads > 1`` they are farmed out to a
    thread pool, which yields exactly the serial values.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    if method == "oracle" and not isinstance(source, _ph.Phantom):
        raise TypeError("the oracle method needs a phantom source")
    pts = grid.points()

    def one(p):
        try:
            return evaluate(source, params, p, method, **quad)
        except QuadratureError as exc:
            raise QuadratureError(f"point ({p[0]!r}, {p[1]!r}): {exc}") from exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vals = list(pool.map(one, pts))
    else:
        vals = [one(p) for p in pts]
    return grid.with_values(vals)


def truth_grid(phantom: _ph.Phantom, grid: ReconGrid) -> ReconGrid:
    """Exact local averages at the grid points."""
    return grid.with_values([_ph.local_average(phantom, p) for p in grid.points()])


def compare(grid: ReconGrid, reference: ReconGrid, *, method: str = "unknown",
            alpha: Optional[float] = None, reference_name: str = "other-method") -> ReconReport:
    if grid.values is None or reference.values is None:
        raise ValueError("both grids need values")
    if grid.values.shape != reference.values.shape or not (
        np.allclose(grid.xs, reference.xs, rtol=0, atol=1e-12)
        and np.allclose(grid.ys, reference.ys, rtol=0, atol=1e-12)
    ):
        raise GeometryMismatch("grids do not share the same evaluation points")
    diff = grid.values - reference.values
    return ReconReport(
        method=method,
        alpha=alpha,
        rmse=float(np.sqrt(np.mean(diff * diff))),
        max_abs_err=float(np.max(np.abs(diff))),
        min_value=float(np.min(grid.values)),
        max_value=float(np.max(grid.values)),
        reference=reference_name,
    )


# ---------------------------------------------------------------------------
# output formats
# ---------------------------------------------------------------------------

def format_csv(grid: ReconGrid) -> str:
    lines = ["x,y,value"]
    vals = grid.values
    for i, x in enumerate(grid.xs):
        for j, y in enumerate(grid.ys):
            lines.append(f"{float(x)!r},{float(y)!r},{float(vals[i, j])!r}")
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> ReconGrid:
    rows = [ln for ln in text.splitlines() if ln.strip()]
    if not rows or rows[0].replace(" ", "") != "x,y,value":
        raise ValueError("line 1: expected header 'x,y,value'")
    data = []
    for n, ln in enumerate(rows[1:], start=2):
        parts = ln.split(",")
        if len(parts) != 3:
            raise ValueError(f"line {n}: expected 3 fields, found {len(parts)}")
        try:
            data.append([float(p) for p in parts])
        except ValueError:
            raise ValueError(f"line {n}: non-numeric field") from None
    if not data:
        raise ValueError("grid file has no data rows")
    arr = np.array(data)
    xs = np.unique(arr[:, 0])
    ys = np.unique(arr[:, 1])
    nx, ny = len(xs), len(ys)
    if nx * ny != len(arr):
        raise ValueError(f"{len(arr)} rows do not form a {nx}x{ny} lattice")

    def span(c):
        if len(c) == 1:
            return (float(c[0]), float(c[0]))
        d = (c[-1] - c[0]) / (len(c) - 1)
        return (float(c[0] - d / 2), float(c[-1] + d / 2))

    ix = np.searchsorted(xs, arr[:, 0])
    iy = np.searchsorted(ys, arr[:, 1])
    values = np.full((nx, ny), np.nan)
    values[ix, iy] = arr[:, 2]
    return ReconGrid(span(xs), span(ys), nx, ny, values)


def write_csv(grid: ReconGrid, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_csv(grid))


def read_csv(path) -> ReconGrid:
    with open(path, encoding="utf-8") as fh:
        return parse_csv(fh.read())


def format_pgm(grid: ReconGrid) -> str:
    """8-bit ASCII PGM, top row = largest y.  The value mapping goes in the comment."""
    v = grid.values
    vmin, vmax = float(np.min(v)), float(np.max(v))
    scale = 255.0 / (vmax - vmin) if vmax > vmin else 0.0
    gray = np.clip(np.rint((v - vmin) * scale), 0, 255).astype(int)
    lines = [
        "P2",
        f"# gray = round(255 * (value - vmin) / (vmax - vmin)), vmin={vmin!r}, vmax={vmax!r}",
        f"{grid.nx} {grid.ny}",
        "255",
    ]
    for j in range(grid.ny - 1, -1, -1):
        lines.append(" ".join(str(g) for g in gray[:, j]))
    return "\n".join(lines) + "\n"


def write_pgm(grid: ReconGrid, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_pgm(grid))
