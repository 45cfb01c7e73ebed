"""Sampled parallel-beam projections and their ``SINOGRAM v1`` text format.

Rows are angles ``psi_i = i * pi / n_psi``; columns are offsets at cell
centres ``t_j = t_min + (j + 1/2) (t_max - t_min) / n_t``.
"""
from __future__ import annotations

import math
import os
import tempfile
import warnings
from dataclasses import dataclass

import numpy as np

from . import phantom as _ph

MAGIC = "SINOGRAM"
VERSION = "v1"


class SinogramFormatError(ValueError):
    """Malformed sinogram file; the message names the offending line."""


@dataclass(frozen=True, eq=False)
class Sinogram:
    t_min: float
    t_max: float
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] < 2 or v.shape[1] < 2:
            raise ValueError(f"sinogram needs at least 2x2 samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("sinogram values must be finite")
        if not self.t_min < self.t_max:
            raise ValueError("t_min must be below t_max")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_psi(self) -> int:
        return self.values.shape[0]

    @property
    def n_t(self) -> int:
        return self.values.shape[1]

    @property
    def dt(self) -> float:
        return (self.t_max - self.t_min) / self.n_t

    @property
    def psi(self) -> np.ndarray:
        return np.arange(self.n_psi) * (math.pi / self.n_psi)

    @property
    def t(self) -> np.ndarray:
        return self.t_min + (np.arange(self.n_t) + 0.5) * self.dt

    def radon(self, t, psi):
        """Interpolated projection: nearest row in ``psi``, linear in ``t``.

        Angles outside ``[0, pi)`` use ``R(t, psi + pi) = R(-t, psi)``.
        Offsets beyond the outermost cell centres read as zero.
        """
        t = np.asarray(t, dtype=float)
        psi = np.asarray(psi, dtype=float)
        n = self.n_psi
        k = np.floor(psi / (math.pi / n) + 0.5).astype(np.int64)
        turns = np.floor_divide(k, n)
        row = k - turns * n
        t = np.where(turns % 2 == 1, -t, t)
        t, row = np.broadcast_arrays(t, row)

        q = (t - self.t_min) / self.dt - 0.5
        j = np.floor(q).astype(np.int64)
        frac = q - j
        v = self.values
        j0 = np.clip(j, 0, self.n_t - 1)
        j1 = np.clip(j + 1, 0, self.n_t - 1)
        lo = np.where((j >= 0) & (j < self.n_t), v[row, j0], 0.0)
        hi = np.where((j + 1 >= 0) & (j + 1 < self.n_t), v[row, j1], 0.0)
        out = lo + frac * (hi - lo)
        # Outside the sampled span the profile is taken as identically zero.
        out = np.where((q < 0) | (q > self.n_t - 1), 0.0, out)
        return float(out) if out.ndim == 0 else out

    def support(self, psi):
        psi = np.asarray(psi, dtype=float)
        return np.full(psi.shape, self.t_min), np.full(psi.shape, self.t_max)

    def __eq__(self, other):
        if not isinstance(other, Sinogram):
            return NotImplemented
        return (self.t_min == other.t_min and self.t_max == other.t_max
                and self.values.shape == other.values.shape
                and bool(np.array_equal(self.values, other.values)))


def sample(phantom: _ph.Phantom, n_psi: int, n_t: int, t_range: tuple[float, float]) -> Sinogram:
    """Tabulate the analytic projections of ``phantom``."""
    if n_psi < 2 or n_t < 2:
        raise ValueError("n_psi and n_t must be at least 2")
    t_min, t_max = float(t_range[0]), float(t_range[1])
    if not t_min < t_max:
        raise ValueError("t_range must be increasing")
    psi = np.arange(n_psi) * (math.pi / n_psi)
    t = t_min + (np.arange(n_t) + 0.5) * ((t_max - t_min) / n_t)
    lo, hi = _ph.support(phantom, psi)
    if phantom.pieces and (lo.min() < t_min or hi.max() > t_max):
        warnings.warn(
            f"t range [{t_min}, {t_max}] does not cover the phantom's projections "
            f"[{lo.min():.6g}, {hi.max():.6g}]; the sinogram is truncated",
            stacklevel=2,
        )
    values = _ph.radon(phantom, t[None, :], psi[:, None])
    return Sinogram(t_min, t_max, np.asarray(values, dtype=float).reshape(n_psi, n_t))


def format_sinogram(s: Sinogram) -> str:
    lines = [f"{MAGIC} {VERSION} {s.n_psi} {s.n_t} {s.t_min!r} {s.t_max!r}"]
    for row in s.values:
        lines.append(" ".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"


def parse_sinogram(text: str) -> Sinogram:
    lines = text.splitlines()
    if not lines:
        raise SinogramFormatError("line 1: empty file, expected SINOGRAM header")
    head = lines[0].split()
    if len(head) != 6 or head[0] != MAGIC or head[1] != VERSION:
        raise SinogramFormatError(
            f"line 1: malformed header {lines[0]!r}; expected "
            f"'{MAGIC} {VERSION} n_psi n_t t_min t_max'"
        )
    try:
        n_psi, n_t = int(head[2]), int(head[3])
        t_min, t_max = float(head[4]), float(head[5])
    except ValueError:
        raise SinogramFormatError(f"line 1: malformed header numbers in {lines[0]!r}") from None
    if n_psi < 2 or n_t < 2 or not t_min < t_max:
        raise SinogramFormatError(f"line 1: invalid dimensions or t range in {lines[0]!r}")

    body = lines[1:]
    while body and not body[-1].strip():
        body.pop()
    if len(body) < n_psi:
        raise SinogramFormatError(
            f"line {len(body) + 2}: missing row {len(body) + 1} of {n_psi} (file truncated)"
        )
    if len(body) > n_psi:
        raise SinogramFormatError(f"line {n_psi + 2}: unexpected extra row; header declares {n_psi}")
    values = np.empty((n_psi, n_t))
    for i, line in enumerate(body):
        cells = line.split()
        if len(cells) != n_t:
            raise SinogramFormatError(f"line {i + 2}: expected {n_t} values, found {len(cells)}")
        for j, c in enumerate(cells):
            try:
                values[i, j] = float(c)
            except ValueError:
                raise SinogramFormatError(
                    f"line {i + 2}, column {j + 1}: non-numeric cell {c!r}"
                ) from None
        if not np.all(np.isfinite(values[i])):
            raise SinogramFormatError(f"line {i + 2}: non-finite value")
    return Sinogram(t_min, t_max, values)


def write(sinogram: Sinogram, path) -> None:
    """Write atomically: a temporary file in the target directory, then rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".sinogram-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(format_sinogram(sinogram))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read(path) -> Sinogram:
    with open(path, encoding="utf-8") as fh:
        return parse_sinogram(fh.read())
