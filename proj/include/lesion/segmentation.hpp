#pragma once

#include <string>

#include "lesion/raster.hpp"
#include "lesion/snake.hpp"
#include "lesion/watershed.hpp"

namespace lesion {

enum class MaskMethod { Watershed, Snake, Merged };

const char* to_string(MaskMethod m);
/// Accepts "watershed", "snake" or "merged"; throws std::invalid_argument otherwise.
MaskMethod parse_mask_method(const std::string& s);

/// Intersection of the two masks before smoothing.
BinaryMask merge_core(const BinaryMask& watershed, const BinaryMask& snake);

/**
 * @brief Combines the watershed and active-contour masks.
 *
 * The core is their intersection; it is dilated by a radius-1 disk, cleared of spurs, reduced
 * to the largest 8-connected component and hole-filled. Throws SegmentationDisagreement when the
 * masks do not overlap.
 */
BinaryMask merge_masks(const BinaryMask& watershed, const BinaryMask& snake);

struct SegmentationConfig {
    WatershedConfig watershed;
    SnakeConfig snake;
};

struct SegmentationResult {
    BinaryMask watershed;
    BinaryMask snake;
    BinaryMask merged;

    const BinaryMask& by_method(MaskMethod m) const;
};

/// Runs both segmenters on the grayscale of `img` and merges them.
SegmentationResult segment_lesion(const RasterImage& img, const SegmentationConfig& cfg);

}  // namespace lesion
