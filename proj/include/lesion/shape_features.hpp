#pragma once

#include "lesion/raster.hpp"

namespace lesion {

/**
 * Reflection asymmetry in [0, 1]: the mask is mirrored about each principal axis of its
 * second moments (through the centroid, reflected pixels rounded to the grid) and each axis scores
 * |m XOR mirror| / (2|m|). The result is the mean of the two axis scores.
 */
double asymmetry(const BinaryMask& m);

/// Isoperimetric quotient L^2 / (4 pi A) with L the traced 8-connected contour length.
double compactness(const BinaryMask& m);

/// Var(r) / mean(r)^2 of centroid-to-boundary-pixel distances. Needs at least 8 boundary pixels.
double radial_variance(const BinaryMask& m);

/// Largest distance between two boundary pixel centres (convex hull, exhaustive over hull vertices).
double feret_diameter(const BinaryMask& m);

}  // namespace lesion
