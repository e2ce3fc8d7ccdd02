#pragma once

#include <vector>

#include "lesion/raster.hpp"

namespace lesion {

/// Real-valued single-channel field, row-major.
struct ScalarField {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    ScalarField() = default;
    ScalarField(int w, int h, double fill = 0.0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }

    /// Bilinear interpolation; coordinates are clamped into the field.
    double sample(double x, double y) const;
};

ScalarField to_field(const RasterImage& gray);

/// Normalized 1-D Gaussian taps with radius ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur with replicate borders.
ScalarField gaussian_blur(const ScalarField& f, double sigma);

/// |grad f| from central differences (one-sided at the borders).
ScalarField gradient_magnitude(const ScalarField& f);

/// Otsu threshold over an 8-bit histogram; pixels <= threshold form the dark class.
/// Returns -1 when the histogram has a single occupied bin.
int otsu_threshold(const RasterImage& gray);

/// Pixels of `gray` at or below `threshold`.
BinaryMask threshold_at_most(const RasterImage& gray, int threshold);

/// Rounds a field into an 8-bit image (clamped).
RasterImage field_to_image(const ScalarField& f);

}  // namespace lesion
