#pragma once

#include <cstddef>
#include <vector>

#include "lesion/raster.hpp"

namespace lesion {

enum class SeShape { Disk, Square, Line };

/**
 * @brief Flat structuring element stored as offsets from its center (origin included).
 */
class StructuringElement {
public:
    /// All offsets with dx^2 + dy^2 <= r^2. Radius 1 is the 4-connected plus.
    static StructuringElement disk(int radius);
    /// (2r+1) x (2r+1) box.
    static StructuringElement square(int radius);
    /// Digital segment of odd `length` through the origin at `angle_deg` (counter-clockwise on screen).
    static StructuringElement line(int length, double angle_deg);

    SeShape shape() const { return shape_; }
    const std::vector<PixelPos>& offsets() const { return offsets_; }

private:
    StructuringElement(SeShape shape, std::vector<PixelPos> offsets);

    SeShape shape_;
    std::vector<PixelPos> offsets_;
};

/// Binary dilation; out-of-image samples replicate the nearest border pixel.
BinaryMask dilate(const BinaryMask& m, const StructuringElement& se);
/// Binary erosion with the same replicate padding.
BinaryMask erode(const BinaryMask& m, const StructuringElement& se);

/// Deletes, per pass, every foreground pixel with exactly one 8-neighbour in the foreground.
BinaryMask remove_spurs(const BinaryMask& m, int iterations);
BinaryMask remove_spurs_to_fixed_point(const BinaryMask& m);

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b);
/// a AND NOT b
BinaryMask mask_subtract(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_complement(const BinaryMask& a);

/// Component labels (1-based, 0 = background), numbered in order of their first pixel.
std::vector<int> label_components(const BinaryMask& m, int connectivity, int* count = nullptr);

/// Keeps the component with the most pixels; ties go to the one that starts earliest in row-major order.
BinaryMask largest_component(const BinaryMask& m, int connectivity);

/// Sets every background pixel that is not 4-connected to the image border.
BinaryMask fill_holes(const BinaryMask& m);

std::size_t area(const BinaryMask& m);
/// Number of foreground pixels with at least one background 4-neighbour (outside counts as background).
std::size_t perimeter(const BinaryMask& m);
Point2 centroid(const BinaryMask& m);

/// Foreground pixels that count towards perimeter(), in row-major order.
std::vector<PixelPos> boundary_pixels(const BinaryMask& m);

/// Length of the traced outer 8-connected contour of every component, diagonal steps weighted sqrt(2).
double traced_contour_length(const BinaryMask& m);

struct BoundingBox {
    int x0 = 0, y0 = 0, x1 = -1, y1 = -1;  // inclusive
    int width() const { return x1 - x0 + 1; }
    int height() const { return y1 - y0 + 1; }
};
BoundingBox bounding_box(const BinaryMask& m);

// Grayscale (single-channel) flat morphology with replicate-padded borders.
RasterImage gray_dilate(const RasterImage& gray, const StructuringElement& se);
RasterImage gray_erode(const RasterImage& gray, const StructuringElement& se);
RasterImage gray_close(const RasterImage& gray, const StructuringElement& se);

}  // namespace lesion
