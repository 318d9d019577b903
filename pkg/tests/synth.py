"""Synthetic greyscale fixtures."""
import numpy as np

from proxgroupoid import RasterImage

# Four 2x2 tiles of a 4x4 image.  A, A2 and A3 share exactly one level (0.83);
# C shares nothing with them.
FOUR_TILES = {
    "A": [[0.83, 0.10], [0.11, 0.12]],
    "A2": [[0.20, 0.83], [0.21, 0.22]],
    "A3": [[0.30, 0.31], [0.83, 0.32]],
    "C": [[0.50, 0.51], [0.52, 0.53]],
}


def mosaic(blocks, name=None):
    """Image assembled from a 2-D list of equally sized blocks."""
    return RasterImage(np.block([[np.asarray(b, dtype=float) for b in row] for row in blocks]), name)


def four_tiles(name="four"):
    t = FOUR_TILES
    return mosaic([[t["A"], t["A2"]], [t["A3"], t["C"]]], name)


def random_image(rng, shape, low=0, high=255, name=None):
    """8-bit-valued image with grey levels in [low, high]."""
    return RasterImage(rng.integers(low, high + 1, shape) / 255, name)
