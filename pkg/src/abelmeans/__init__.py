"""Abel-means reconstruction of piecewise-constant images from parallel-beam projections."""
from .kernel import KernelParams, KernelProfile, h, k, phi, profile
from .phantom import DiscPiece, Phantom, RectPiece, local_average, radon, ring_average
from .quadrature import QuadSpec, QuadratureError, SplitSpec, integrate_1d, integrate_2d_polar, integrate_split
from .reconstruction import (
    ReconGrid,
    ReconReport,
    abel_naive,
    abel_oracle,
    abel_split,
    compare,
    reconstruct_grid,
    truth_grid,
)
from .sinogram import Sinogram

__version__ = "0.1.0"
