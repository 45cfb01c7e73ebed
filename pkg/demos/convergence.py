"""
How the means converge
======================

Three properties of A_alpha f checked with the convolution oracle:
convergence to f at a point, convergence to the local average on a boundary,
and the absence of overshoot.
"""

import math

import numpy as np

from abelmeans import KernelParams, ReconGrid, abel_oracle, abel_split, reconstruct_grid
from abelmeans import phantom as ph

disc = ph.Phantom((ph.DiscPiece((0.0, 0.0), 2.0, 1.0),))

# At the centre of a disc the mean has a closed form, so both routes can be
# checked against it.
print("alpha   exact      oracle     split")
for alpha in (0.8, 0.4, 0.2, 0.1, 0.05):
    p = KernelParams(alpha)
    exact = 1 - alpha / math.sqrt(alpha**2 + 4)
    print(f"{alpha:<6}  {exact:.8f} {abel_oracle(disc, p, (0, 0)):.8f} {abel_split(disc, p, (0, 0)):.8f}")

# On the circle the limit is 1/2, approached from below because the disc is convex.
for alpha in (0.2, 0.1, 0.05, 0.025, 0.0125):
    print(f"alpha={alpha:<7} A f(2, 0) = {abel_oracle(disc, KernelParams(alpha), (2.0, 0.0)):.5f}")

# Uniform convergence on [-1, 1]^2, well inside the disc: the worst point is a
# corner of the square, and the error halves with alpha.
grid = ReconGrid((-1.0, 1.0), (-1.0, 1.0), 9, 9)
for alpha in (0.1, 0.05, 0.025):
    g = reconstruct_grid(disc, KernelParams(alpha), grid, "oracle")
    print(f"alpha={alpha:<6} max |A f - f| on the square = {np.max(np.abs(g.values - 1)):.4f}")

# No overshoot: a 0/1 function stays inside [0, 1] on a grid through both edges.
half = ph.two_disc_phantom().scaled(0.5)
g = reconstruct_grid(half, KernelParams(0.1), ReconGrid((-3, 3), (-3, 3), 33, 33), "oracle")
print(f"range over the grid: [{g.values.min():.6f}, {g.values.max():.6f}]")
