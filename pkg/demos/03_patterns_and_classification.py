"""
Patterns and classification
===========================

Every tile generates a pattern: itself plus all tiles whose groupoids are
neighbourly with it.  Two images are classified together when a pair of
their patterns is neighbourly and salient.
"""

import numpy as np

from proxgroupoid import (
    RasterImage,
    TileSpec,
    classify,
    generate_pattern,
    make_groupoid,
    patterns_for,
    tile,
)

# Four 2x2 blocks.  Three of them carry a 0.83 pixel, the fourth does not.
blocks = [
    [[.83, .10], [.11, .12]],
    [[.20, .83], [.21, .22]],
    [[.30, .31], [.83, .32]],
    [[.50, .51], [.52, .53]],
]
top = np.hstack([blocks[0], blocks[1]])
bottom = np.hstack([blocks[2], blocks[3]])
img = RasterImage(np.vstack([top, bottom]), "four-tiles")

gs = [make_groupoid(t) for t in tile(img, TileSpec(2, 2))]
pattern = generate_pattern(gs[0], gs)
print("pattern of the first tile:", [m.source.origin for m in pattern])

###############################################################################
# Classification on larger random images

rng = np.random.default_rng(1)
spec = TileSpec(32, 32)


def patterns(image):
    return patterns_for([make_groupoid(t) for t in tile(image, spec)])


x = RasterImage(rng.integers(0, 101, (256, 256)) / 255, "X")
y = RasterImage(rng.integers(160, 256, (256, 256)) / 255, "Y")

same = classify(patterns(x), patterns(x), image_id="X", reference_id="X")
print("X vs X:", same.matched, same.score.fraction)

# Y never shares a quantized level with X.
other = classify(patterns(y), patterns(x), image_id="Y", reference_id="X")
print("Y vs X:", other.matched)
