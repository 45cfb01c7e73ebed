"""Abel-means kernels.

``phi`` is the line-domain kernel integrated against the Radon transform,
``h`` its planar counterpart (the reconstruction equals ``h * f``), and ``k``
the one-sided radial kernel that governs convergence to the local average.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_TWO_PI_SQ = 2.0 * math.pi**2


@dataclass(frozen=True)
class KernelParams:
    alpha: float
    epsilon_factor: float = 2.0

    def __post_init__(self):
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be positive and finite, got {self.alpha}")
        if not (self.epsilon_factor > 0 and math.isfinite(self.epsilon_factor)):
            raise ValueError(f"epsilon_factor must be positive, got {self.epsilon_factor}")

    @property
    def epsilon(self) -> float:
        """Half-width of the refined window around the kernel peak."""
        return self.epsilon_factor * self.alpha


@dataclass(frozen=True)
class KernelProfile:
    beta: float
    t_max: float
    peak_value: float
    t_min_left: float
    t_min_right: float
    min_value: float
    zero_crossings: tuple[float, float]


def projection(x, psi):
    """beta = x1 cos(psi) + x2 sin(psi), the peak location of ``phi`` in t."""
    return x[0] * np.cos(psi) + x[1] * np.sin(psi)


def phi_offset(alpha: float, d):
    """``phi`` as a function of the offset ``d = beta - t`` only."""
    a2 = alpha * alpha
    d2 = np.square(d)
    den = a2 + d2
    return (a2 - d2) / (_TWO_PI_SQ * den * den)


def phi(params: KernelParams, x, t, psi):
    """Radon-domain kernel, broadcasting over ``t`` and ``psi``."""
    return phi_offset(params.alpha, projection(x, psi) - t)


def h(params: KernelParams, y):
    """Planar kernel ``alpha / (2 pi (alpha^2 + |y|^2)^{3/2})``.  ``y`` has a trailing axis of length 2."""
    y = np.asarray(y, dtype=float)
    r2 = np.sum(y * y, axis=-1)
    return params.alpha / (2.0 * math.pi * (params.alpha**2 + r2) ** 1.5)


def h_radial(alpha: float, r):
    return alpha / (2.0 * math.pi * (alpha * alpha + np.square(r)) ** 1.5)


def k(params: KernelParams, r):
    """One-sided radial kernel; zero for ``r <= 0``, unit integral over (0, inf)."""
    r = np.asarray(r, dtype=float)
    a = params.alpha
    rp = np.where(r > 0, r, 0.0)
    out = np.where(r > 0, a * rp / (a * a + rp * rp) ** 1.5, 0.0)
    return float(out) if out.ndim == 0 else out


def profile(params: KernelParams, x, psi: float) -> KernelProfile:
    """Closed-form critical points of ``phi`` in t for fixed ``x`` and ``psi``.

    Maximum 1/(2 pi^2 alpha^2) at t = beta, two minima of -1/8 of that at
    beta -/+ alpha*sqrt(3), sign changes at beta -/+ alpha.
    """
    a = params.alpha
    beta = float(projection(x, psi))
    peak = 1.0 / (_TWO_PI_SQ * a * a)
    w = a * math.sqrt(3.0)
    return KernelProfile(
        beta=beta,
        t_max=beta,
        peak_value=peak,
        t_min_left=beta - w,
        t_min_right=beta + w,
        min_value=-peak / 8.0,
        zero_crossings=(beta - a, beta + a),
    )
