"""
Groupoids on description sets
=============================

A tile's distinct descriptions form a carrier.  A binary operation on that
carrier gives a groupoid; the min operation is always closed on a
single-probe carrier and every element is regular.
"""

import numpy as np

from proxgroupoid import (
    FeatureVector,
    RasterImage,
    TileSpec,
    custom_op,
    groupoid_on,
    groupoids_neighbourly,
    is_regular_groupoid,
    make_groupoid,
    pseudometric,
    tile,
)

rng = np.random.default_rng(0)
img = RasterImage(rng.choice([0.2, 0.4, 0.6, 0.8], size=(4, 4)), "palette")
tiles = tile(img, TileSpec(2, 2))

g = make_groupoid(tiles[0])
print(g.summary())
print("regular:", is_regular_groupoid(g))

# the operation table is a plain array of carrier indices
print(g.table)

# The pseudometric compares two descriptions level by level.
a, b = FeatureVector.from_levels([63]), FeatureVector.from_levels([83])
print("d(0.63, 0.83) =", pseudometric(a, b))

# Groupoids are neighbourly when some pair of elements matches.
for t in tiles[1:]:
    print(t.origin, groupoids_neighbourly(g, make_groupoid(t)))

###############################################################################
# A non-closed operation: averaging two levels can leave the carrier, so the
# table has undefined (-1) cells and the groupoid is partial.


def average(x, y):
    return FeatureVector.from_levels([(p + q) // 2 for p, q in zip(x.levels, y.levels)])


partial = groupoid_on(g.carrier, custom_op("average", average))
print(type(partial).__name__, partial.total)
print(partial.table)
