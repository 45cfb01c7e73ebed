"""Fixed-grid composite quadrature, including the peak-split t-integral.

All rules are non-adaptive: for a given spec the abscissae, weights and the
order of the final reduction are fixed, so results are bit-reproducible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

RULES = ("midpoint", "simpson")


class QuadratureError(ArithmeticError):
    """An integrand returned a non-finite value."""


@dataclass(frozen=True)
class QuadSpec:
    rule: str = "simpson"
    n_panels: int = 64
    domain: Optional[tuple[float, float]] = None

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}; expected one of {RULES}")
        if self.n_panels < 2:
            raise ValueError("n_panels must be at least 2")
        if self.rule == "simpson" and self.n_panels % 2:
            raise ValueError("simpson needs an even number of panels")
        if self.domain is not None:
            lo, hi = self.domain
            if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
                raise ValueError(f"invalid domain {self.domain}")

    def on(self, lo: float, hi: float) -> "QuadSpec":
        return replace(self, domain=(float(lo), float(hi)))


@dataclass(frozen=True)
class SplitSpec:
    """Fine rule on ``[center - half_width, center + half_width]``, coarse rule on each tail."""

    center: float
    half_width: float
    inner: QuadSpec = QuadSpec("simpson", 64)
    outer: QuadSpec = QuadSpec("simpson", 512)

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError("half_width must be positive")


def _unit_rule(rule: str, n: int):
    """Abscissae on [0, 1] and weights summing to 1."""
    if rule == "midpoint":
        return (np.arange(n) + 0.5) / n, np.full(n, 1.0 / n)
    u = np.arange(n + 1) / n
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return u, w / (3.0 * n)


def composite_nodes(rule: str, n: int, lo, hi):
    """Nodes and weights of a composite rule on ``[lo, hi]``.

    ``lo`` and ``hi`` may be arrays of shape ``(m,)``; the result then has
    shape ``(m, n_nodes)``, one row per interval.  Zero-length intervals get
    zero weights.
    """
    u, w = _unit_rule(rule, n)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    width = hi - lo
    x = lo[..., None] + width[..., None] * u
    return x, width[..., None] * w


def _check_finite(x, y):
    bad = ~np.isfinite(y)
    if bad.any():
        xb = np.asarray(x)[bad].ravel()[0] if np.ndim(x) else x
        raise QuadratureError(f"integrand is not finite at abscissa {xb!r}")


def integrate_1d(f: Callable, spec: QuadSpec) -> float:
    """Composite rule for a vectorised ``f`` over ``spec.domain``."""
    if spec.domain is None:
        raise ValueError("QuadSpec has no domain")
    x, w = composite_nodes(spec.rule, spec.n_panels, *spec.domain)
    y = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    _check_finite(x, y)
    return float(np.sum(w * y))


def split_intervals(center, half_width, lo, hi):
    """The three integration intervals around a peak at ``center``.

    The outer ends are widened when the window pokes out of ``[lo, hi]`` so
    the window is always integrated in full; tails can then be empty.
    """
    a = np.minimum(lo, center - half_width)
    b = np.maximum(hi, center + half_width)
    return ((a, center - half_width),
            (center - half_width, center + half_width),
            (center + half_width, b))


def inner_panels(n_inner: int, half_width: float, outer_width: float) -> int:
    """Panel count for the window so its panels are no wider than ``outer_width``.

    ``outer_width`` is the panel width the tail rule would have over the whole
    range.  A wide window (large ``epsilon``) would otherwise be integrated
    more coarsely than the tails it is meant to refine.
    """
    if outer_width <= 0:
        return n_inner
    need = 2 * math.ceil(half_width / outer_width - 1e-9)
    return max(n_inner, need)


def integrate_split(f: Callable, spec: SplitSpec, tails: tuple[float, float]) -> float:
    """Integrate over ``tails`` as left tail + refined window + right tail."""
    lo, hi = tails
    if not (lo <= spec.center - spec.half_width and spec.center + spec.half_width <= hi):
        raise ValueError("tails must contain the refined window")
    total = 0.0
    left, mid, right = split_intervals(spec.center, spec.half_width, lo, hi)
    outer_width = (hi - lo) / spec.outer.n_panels
    n_in = inner_panels(spec.inner.n_panels, spec.half_width, outer_width)
    inner = replace(spec.inner, n_panels=n_in + n_in % 2 if spec.inner.rule == "simpson" else n_in)
    for (a, b), q in ((left, spec.outer), (mid, inner), (right, spec.outer)):
        if b > a:
            total += integrate_1d(f, q.on(a, b))
    return total


def integrate_2d_polar(f: Callable, r_max: float, n_r: int, n_theta: int, *,
                       r_spacing: str = "uniform", r_min: float = 0.0) -> float:
    """Product midpoint rule for ``int_0^r_max r dr int_0^2pi f(r, theta) dtheta``.

    With ``r_spacing="log"`` the midpoint rule runs in ``log r`` over
    ``[r_min, r_max]`` (``r_min > 0`` required); the disc ``r < r_min`` is
    skipped, so choose ``r_min`` where the integrand's mass is negligible.
    """
    if not r_max > 0:
        raise ValueError("r_max must be positive")
    if n_r < 1 or n_theta < 1:
        raise ValueError("need at least one node in each direction")
    if r_spacing == "uniform":
        r = (np.arange(n_r) + 0.5) * (r_max / n_r)
        wr = r * (r_max / n_r)
    elif r_spacing == "log":
        if not 0 < r_min < r_max:
            raise ValueError("log spacing needs 0 < r_min < r_max")
        du = math.log(r_max / r_min) / n_r
        r = r_min * np.exp((np.arange(n_r) + 0.5) * du)
        wr = r * r * du
    else:
        raise ValueError(f"unknown r_spacing {r_spacing!r}")
    theta = (np.arange(n_theta) + 0.5) * (2.0 * math.pi / n_theta)
    dtheta = 2.0 * math.pi / n_theta

    # Chunk over r to bound memory; each chunk reduces over theta first.
    chunk = max(1, (1 << 20) // n_theta)
    partial = np.empty(n_r)
    for s in range(0, n_r, chunk):
        rr = r[s:s + chunk, None]
        vals = np.broadcast_to(np.asarray(f(rr, theta[None, :]), dtype=float),
                               (rr.shape[0], n_theta))
        _check_finite(np.broadcast_to(rr, vals.shape), vals)
        partial[s:s + chunk] = vals.sum(axis=1)
    return float(np.sum(partial * wr) * dtheta)
