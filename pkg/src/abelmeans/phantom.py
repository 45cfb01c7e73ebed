"""Piecewise-constant test objects built from discs and axis-aligned rectangles.

Every quantity here is closed form: point values, local (circle) averages,
and line integrals along parallel-beam rays.  The line through ``t * n`` with
normal ``n = (cos psi, sin psi)`` is the set ``{x : x . n = t}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence, Union

import numpy as np

# Signed distances within this of zero count as "on the boundary".
BOUNDARY_TOL = 1e-12


class PhantomFormatError(ValueError):
    """Raised for malformed phantom description text."""


@dataclass(frozen=True)
class DiscPiece:
    center: tuple[float, float]
    radius: float
    amplitude: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        if not self.radius > 0:
            raise ValueError(f"disc radius must be positive, got {self.radius}")
        if not math.isfinite(self.amplitude):
            raise ValueError(f"disc amplitude must be finite, got {self.amplitude}")

    def extent(self) -> float:
        return math.hypot(*self.center) + self.radius

    def area(self) -> float:
        return math.pi * self.radius**2


@dataclass(frozen=True)
class RectPiece:
    center: tuple[float, float]
    half_widths: tuple[float, float]
    amplitude: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        hw = (float(self.half_widths[0]), float(self.half_widths[1]))
        object.__setattr__(self, "half_widths", hw)
        if not (hw[0] > 0 and hw[1] > 0):
            raise ValueError(f"rectangle half-widths must be positive, got {hw}")
        if not math.isfinite(self.amplitude):
            raise ValueError(f"rectangle amplitude must be finite, got {self.amplitude}")

    def extent(self) -> float:
        return math.hypot(*self.center) + math.hypot(*self.half_widths)

    def area(self) -> float:
        return 4.0 * self.half_widths[0] * self.half_widths[1]


Piece = Union[DiscPiece, RectPiece]


class PointClass(NamedTuple):
    """Position of a point relative to one piece, and its circle-average weight."""

    tag: str  # interior | edge | corner | exterior
    weight: float


@dataclass(frozen=True)
class Phantom:
    """Finite sum of weighted pieces.  The empty phantom is the zero function."""

    pieces: tuple[Piece, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))

    def __add__(self, other: "Phantom") -> "Phantom":
        return Phantom(self.pieces + other.pieces)

    def scaled(self, factor: float) -> "Phantom":
        out = []
        for p in self.pieces:
            if isinstance(p, DiscPiece):
                out.append(DiscPiece(p.center, p.radius, p.amplitude * factor))
            else:
                out.append(RectPiece(p.center, p.half_widths, p.amplitude * factor))
        return Phantom(tuple(out))

    def extent(self) -> float:
        """Radius about the origin of a disc containing every piece."""
        return max((p.extent() for p in self.pieces), default=0.0)

    def integral(self) -> float:
        return sum(p.amplitude * p.area() for p in self.pieces)

    def value_bounds(self) -> tuple[float, float]:
        """Bounds (min, max) on the function values, allowing for overlaps.

        Sums amplitudes over every subset of pairwise-overlapping pieces
        (bounding circles), so the result can be wider than the true range
        but never narrower.  Exponential in the piece count.
        """
        lo, hi = 0.0, 0.0
        n = len(self.pieces)
        for mask in range(1, 1 << n):
            members = [self.pieces[i] for i in range(n) if mask >> i & 1]
            if all(_overlap(a, b) for i, a in enumerate(members) for b in members[i + 1:]):
                s = sum(p.amplitude for p in members)
                lo, hi = min(lo, s), max(hi, s)
        return lo, hi

    # Convenience forwarding so a Phantom can be used wherever a line-integral
    # source is expected (see reconstruction).
    def radon(self, t, psi):
        return radon(self, t, psi)

    def support(self, psi):
        return support(self, psi)


def _overlap(a: Piece, b: Piece) -> bool:
    ra, rb = a.extent() - math.hypot(*a.center), b.extent() - math.hypot(*b.center)
    return math.dist(a.center, b.center) <= ra + rb


def two_disc_phantom(rho1: float = 2.0, rho2: float = 0.5) -> Phantom:
    """Disc of radius ``rho1`` at the origin plus a disc of radius ``rho2`` at (1, 0)."""
    return Phantom((DiscPiece((0.0, 0.0), rho1, 1.0), DiscPiece((1.0, 0.0), rho2, 1.0)))


def unit_square() -> Phantom:
    """Indicator of the closed square max(|x1|, |x2|) <= 1."""
    return Phantom((RectPiece((0.0, 0.0), (1.0, 1.0), 1.0),))


# ---------------------------------------------------------------------------
# point values and local averages
# ---------------------------------------------------------------------------

def classify(piece: Piece, x) -> PointClass:
    x1, x2 = float(x[0]), float(x[1])
    if isinstance(piece, DiscPiece):
        d = math.hypot(x1 - piece.center[0], x2 - piece.center[1]) - piece.radius
        if abs(d) <= BOUNDARY_TOL:
            return PointClass("edge", 0.5)
        return PointClass("interior", 1.0) if d < 0 else PointClass("exterior", 0.0)

    on = 0
    for xi, ci, hi in zip((x1, x2), piece.center, piece.half_widths):
        d = abs(xi - ci) - hi
        if d > BOUNDARY_TOL:
            return PointClass("exterior", 0.0)
        if d >= -BOUNDARY_TOL:
            on += 1
    return (PointClass("interior", 1.0), PointClass("edge", 0.5), PointClass("corner", 0.25))[on]


def eval(phantom: Phantom, x) -> float:  # noqa: A001 - mirrors the operation name
    """Point value; closed pieces, so boundary points count as inside."""
    return sum(p.amplitude for p in phantom.pieces if classify(p, x).weight > 0)


def eval_array(phantom: Phantom, x1, x2) -> np.ndarray:
    """Vectorised :func:`eval` over broadcastable coordinate arrays."""
    x1, x2 = np.broadcast_arrays(np.asarray(x1, float), np.asarray(x2, float))
    out = np.zeros(x1.shape)
    for p in phantom.pieces:
        if isinstance(p, DiscPiece):
            d = np.hypot(x1 - p.center[0], x2 - p.center[1]) - p.radius
            inside = d <= BOUNDARY_TOL
        else:
            inside = (np.abs(x1 - p.center[0]) - p.half_widths[0] <= BOUNDARY_TOL) & (
                np.abs(x2 - p.center[1]) - p.half_widths[1] <= BOUNDARY_TOL
            )
        out += np.where(inside, p.amplitude, 0.0)
    return out


def local_average(phantom: Phantom, x) -> float:
    """Limit of circle averages at ``x``: 1/2 on edges, 1/4 at rectangle corners."""
    return sum(p.amplitude * classify(p, x).weight for p in phantom.pieces)


def ring_average(phantom: Phantom, x, r: float, n_samples: int = 1024) -> float:
    """Average of the point values over a circle of radius ``r`` about ``x``.

    Sample angles sit at panel midpoints, so axis-aligned edges through ``x``
    are never sampled exactly.
    """
    if not r > 0:
        raise ValueError("ring radius must be positive")
    if n_samples < 8:
        raise ValueError("ring_average needs at least 8 samples")
    theta = (np.arange(n_samples) + 0.5) * (2.0 * np.pi / n_samples)
    vals = eval_array(phantom, x[0] + r * np.cos(theta), x[1] + r * np.sin(theta))
    return float(vals.mean())


# ---------------------------------------------------------------------------
# line integrals
# ---------------------------------------------------------------------------

def _rect_chord(p: RectPiece, t, c, s):
    # Line: x = t*(c, s) + u*(-s, c).  Intersect |x_k - center_k| <= h_k for k = 1, 2.
    u_lo = np.full(np.broadcast(t, c).shape, -np.inf)
    u_hi = np.full_like(u_lo, np.inf)
    for n_k, d_k, ck, hk in ((c, -s, p.center[0], p.half_widths[0]),
                             (s, c, p.center[1], p.half_widths[1])):
        p0 = t * n_k - ck
        parallel = np.abs(d_k) < 1e-15
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            a = (-hk - p0) / d_k
            b = (hk - p0) / d_k
        lo = np.where(parallel, np.where(np.abs(p0) <= hk, -np.inf, np.inf), np.minimum(a, b))
        hi = np.where(parallel, np.where(np.abs(p0) <= hk, np.inf, -np.inf), np.maximum(a, b))
        u_lo = np.maximum(u_lo, lo)
        u_hi = np.minimum(u_hi, hi)
    return np.clip(u_hi - u_lo, 0.0, None)


def radon(phantom: Phantom, t, psi):
    """Line integral along ``{x : x1 cos psi + x2 sin psi = t}``.

    ``t`` and ``psi`` broadcast against each other; a scalar pair returns a float.
    """
    t = np.asarray(t, dtype=float)
    psi = np.asarray(psi, dtype=float)
    c, s = np.cos(psi), np.sin(psi)
    out = np.zeros(np.broadcast(t, psi).shape)
    for p in phantom.pieces:
        if isinstance(p, DiscPiece):
            tau = t - (p.center[0] * c + p.center[1] * s)
            out += (2.0 * p.amplitude) * np.sqrt(np.clip(p.radius**2 - tau * tau, 0.0, None))
        else:
            out += p.amplitude * _rect_chord(p, t, c, s)
    return float(out) if out.ndim == 0 else out


def support(phantom: Phantom, psi):
    """Smallest ``[lo, hi]`` in ``t`` outside which the projection at ``psi`` vanishes."""
    psi = np.asarray(psi, dtype=float)
    c, s = np.cos(psi), np.sin(psi)
    if not phantom.pieces:
        z = np.zeros(psi.shape)
        return z, z.copy()
    lo = np.full(psi.shape, np.inf)
    hi = np.full(psi.shape, -np.inf)
    for p in phantom.pieces:
        mid = p.center[0] * c + p.center[1] * s
        if isinstance(p, DiscPiece):
            w = p.radius
        else:
            w = p.half_widths[0] * np.abs(c) + p.half_widths[1] * np.abs(s)
        lo = np.minimum(lo, mid - w)
        hi = np.maximum(hi, mid + w)
    return lo, hi


# ---------------------------------------------------------------------------
# text format:  "disc cx cy rho amp" / "rect cx cy hx hy amp", '#' comments
# ---------------------------------------------------------------------------

_ARITY = {"disc": 4, "rect": 5}


def parse_phantom(text: str) -> Phantom:
    pieces: list[Piece] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind not in _ARITY:
            raise PhantomFormatError(f"line {lineno}, token 1: unknown piece kind {kind!r}")
        if len(tokens) - 1 != _ARITY[kind]:
            raise PhantomFormatError(
                f"line {lineno}: {kind} expects {_ARITY[kind]} numbers, got {len(tokens) - 1}"
            )
        nums = []
        for pos, tok in enumerate(tokens[1:], start=2):
            try:
                v = float(tok)
            except ValueError:
                raise PhantomFormatError(f"line {lineno}, token {pos}: not a number: {tok!r}") from None
            if not math.isfinite(v):
                raise PhantomFormatError(f"line {lineno}, token {pos}: non-finite value {tok!r}")
            nums.append(v)
        try:
            if kind == "disc":
                pieces.append(DiscPiece((nums[0], nums[1]), nums[2], nums[3]))
            else:
                pieces.append(RectPiece((nums[0], nums[1]), (nums[2], nums[3]), nums[4]))
        except ValueError as exc:
            raise PhantomFormatError(f"line {lineno}: {exc}") from None
    return Phantom(tuple(pieces))


def format_phantom(phantom: Phantom) -> str:
    # repr() gives the shortest decimal that round-trips the double exactly.
    lines = ["# abelmeans phantom: disc cx cy rho amp | rect cx cy hx hy amp"]
    for p in phantom.pieces:
        if isinstance(p, DiscPiece):
            nums = (*p.center, p.radius, p.amplitude)
            lines.append("disc " + " ".join(repr(float(v)) for v in nums))
        else:
            nums = (*p.center, *p.half_widths, p.amplitude)
            lines.append("rect " + " ".join(repr(float(v)) for v in nums))
    return "\n".join(lines) + "\n"


def read_phantom(path) -> Phantom:
    with open(path, encoding="utf-8") as fh:
        return parse_phantom(fh.read())


def write_phantom(phantom: Phantom, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_phantom(phantom))


def pieces_from_specs(discs: Sequence[Sequence[float]] = (),
                      rects: Sequence[Sequence[float]] = ()) -> Phantom:
    out: list[Piece] = [DiscPiece((d[0], d[1]), d[2], d[3]) for d in discs]
    out += [RectPiece((r[0], r[1]), (r[2], r[3]), r[4]) for r in rects]
    return Phantom(tuple(out))
