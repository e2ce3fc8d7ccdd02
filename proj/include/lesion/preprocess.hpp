#pragma once

#include <vector>

#include "lesion/raster.hpp"

namespace lesion {

struct PreprocessConfig {
    bool sharpen_enabled = true;
    bool hair_removal_enabled = true;
    /// Hair removal runs before sharpening unless this is set.
    bool sharpen_first = false;
    int hair_line_length = 9;
    std::vector<double> hair_angles{0.0, 45.0, 90.0, 135.0};
    int hair_threshold = 20;
    int inpaint_radius = 3;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

/// 3x3 sharpening [[0,-1,0],[-1,5,-1],[0,-1,0]] per channel, replicate borders, clamped to [0,255].
RasterImage sharpen(const RasterImage& img);

struct HairRemovalResult {
    RasterImage image;
    BinaryMask hair_mask;
};

/**
 * @brief Morphological hair removal.
 *
 * Dark thin structures are found as the largest positive response of directional gray closings
 * (line elements at each configured angle) over the grayscale image. Responses above the threshold
 * form the hair mask, grown by a radius-1 disk. Each hair pixel is then replaced per channel by the
 * mean of the non-hair pixels within the inpainting radius, the radius growing until at least one
 * such pixel exists. Pixels outside the mask are copied unchanged.
 *
 * Throws DegenerateHairMask when every pixel is classified as hair.
 */
HairRemovalResult remove_hair(const RasterImage& img, const PreprocessConfig& cfg);

/// Closing-based response max_angle(close(gray) - gray) used by remove_hair.
RasterImage hair_response(const RasterImage& gray, const PreprocessConfig& cfg);

/// Applies hair removal and sharpening in the configured order.
RasterImage preprocess(const RasterImage& img, const PreprocessConfig& cfg, BinaryMask* hair_mask = nullptr);

}  // namespace lesion
