#pragma once

#include <array>
#include <vector>

#include "lesion/raster.hpp"

namespace lesion {

/// Normalized symmetric gray-level co-occurrence matrix.
struct GlcmMatrix {
    int levels = 0;
    PixelPos offset;
    std::vector<double> entries;  // levels x levels, row-major

    double at(int i, int j) const { return entries[static_cast<std::size_t>(i) * levels + j]; }
};

/// Gray level of `v` after uniform quantization of [0, 255] into `levels` bins.
inline int quantize_level(std::uint8_t v, int levels) { return v * levels / 256; }

/**
 * @brief Co-occurrence of quantized levels for pairs (p, p + offset) with both pixels in the mask.
 *
 * Each pair is counted in both directions. Throws InsufficientSupport with fewer than 2 pairs and
 * std::invalid_argument for levels outside [2, 256] or a zero offset.
 */
GlcmMatrix glcm(const RasterImage& gray, const BinaryMask& m, PixelPos offset, int levels = 16);

struct GlcmStats {
    double mean = 0.0;
    double variance = 0.0;
    double correlation = 0.0;
    double homogeneity = 0.0;
    double contrast = 0.0;
    double energy = 0.0;
    double entropy = 0.0;
    double dissimilarity = 0.0;
    double kurtosis = 0.0;
    double skewness = 0.0;
    double max_probability = 0.0;

    static constexpr std::size_t kCount = 11;
    static const std::array<const char*, kCount>& names();
    std::array<double, kCount> values() const;
};

/**
 * Haralick-style statistics. Mean, variance, skewness and kurtosis describe the marginal level
 * distribution (kurtosis is not excess-corrected). Homogeneity is sum p / (1 + |i - j|); entropy is
 * in bits. A zero-variance marginal gives correlation 1 and skewness = kurtosis = 0.
 */
GlcmStats glcm_stats(const GlcmMatrix& g);

struct Coarseness {
    double mean = 0.0;
    double std = 0.0;
};

/**
 * Tamura coarseness over the masked pixels. For k = 1..5 the local mean over a 2^k window is
 * differenced across the pixel horizontally and vertically; the k with the largest response wins
 * (ties to the smaller k). Scales whose windows leave the image are skipped. Returns mean and
 * population deviation of 2^k. Needs a 32x32 bounding box.
 */
Coarseness coarseness(const RasterImage& gray, const BinaryMask& m);

}  // namespace lesion
