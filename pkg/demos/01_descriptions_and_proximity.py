"""
Descriptions and nearness
=========================

Two regions can be far apart in the plane and still look alike.  Here we
build a tiny image, describe each pixel by its quantized intensity and
compare spatial nearness with descriptive nearness.
"""

import numpy as np

from proxgroupoid import (
    RasterImage,
    descriptions_of,
    descriptive_closure,
    descriptive_intersection,
    descriptively_near,
    image_space,
    near,
)

# a 2x4 image; the left and right halves share the value 0.83
pixels = np.array([[0.83, 0.10, 0.50, 0.83],
                   [0.11, 0.12, 0.51, 0.52]])
space = image_space(RasterImage(pixels, "toy"))

# point ids are row * width + col
left = space.region([0, 1, 4, 5])
right = space.region([2, 3, 6, 7])

print("left descriptions :", [v.levels for v in descriptions_of(left)])
print("right descriptions:", [v.levels for v in descriptions_of(right)])

# No shared pixel, so they are not spatially near ...
print("near:", near(left, right))
# ... but both contain a pixel described by level 83.
print("descriptively near:", descriptively_near(left, right))
print("descriptive intersection:", sorted(descriptive_intersection(left, right).ids))

# The descriptive closure of a single bright pixel picks up its look-alike.
print("cl_phi({0}):", sorted(descriptive_closure(space.region([0])).ids))
