#pragma once

#include "lesion/raster.hpp"

namespace lesion {

struct SimilarityConfig {
    double dynamic_range = 255.0;
    double k1 = 0.01;
    double k2 = 0.03;
    int window = 11;
    double window_sigma = 1.5;

    double c1() const { return (k1 * dynamic_range) * (k1 * dynamic_range); }
    double c2() const { return (k2 * dynamic_range) * (k2 * dynamic_range); }
    void validate() const;
};

struct SimilarityReport {
    double ssim_pct = 0.0;
    double jaccard_pct = 0.0;
    double dice_pct = 0.0;
};

/**
 * Mean SSIM in percent. Local statistics use a normalized Gaussian window (replicate borders),
 * every pixel contributes, and the result is clamped at -100.
 */
double ssim(const RasterImage& a, const RasterImage& b, const SimilarityConfig& cfg = {});

/// Percentage |a∩b| / |a∪b|; two empty masks score 100.
double jaccard(const BinaryMask& a, const BinaryMask& b);

/// Percentage 2|a∩b| / (|a|+|b|); two empty masks score 100.
double dice(const BinaryMask& a, const BinaryMask& b);

/// All three measures, masks rendered at {0, 255} for SSIM.
SimilarityReport compare_masks(const BinaryMask& computed, const BinaryMask& truth, const SimilarityConfig& cfg = {});

}  // namespace lesion
