#pragma once

#include <span>
#include <vector>

#include "lesion/raster.hpp"

namespace lesion {

struct WatershedConfig {
    double gaussian_sigma = 2.0;
    int marker_erosion = 5;
    int connectivity = 8;

    void validate() const;
};

/// Label given to divide pixels (and to pixels no basin could reach).
inline constexpr int kDivideLabel = 0;

/**
 * @brief Marker-controlled immersion flooding over an integer relief.
 *
 * Pixels are flooded in order of (priority, arrival). A pixel enters the hierarchical queue when a
 * neighbour is labelled, with priority max(own level, level being flooded). When it leaves the
 * queue it takes the label of its labelled neighbours if they agree, otherwise it becomes a divide
 * pixel and does not propagate. Neighbours are always visited in the fixed order
 * (-1,-1),(0,-1),(1,-1),(-1,0),(1,0),(-1,1),(0,1),(1,1) (4-connectivity keeps the axis subset),
 * and marker pixels seed the queue in row-major order.
 *
 * @param levels  non-negative elevation per pixel, row-major
 * @param markers 0 for unlabelled pixels, a positive basin label otherwise
 * @return one label per pixel: a basin label or kDivideLabel
 */
std::vector<int> flood_from_markers(std::span<const int> levels, std::span<const int> markers, int width,
                                    int height, int connectivity);

struct WatershedStages {
    std::vector<int> levels;   // quantized gradient relief, 0..255
    std::vector<int> markers;  // 1 = lesion, 2 = background
    std::vector<int> labels;   // flooding output
    BinaryMask mask;           // final lesion mask
};

/// Full marker-controlled watershed with intermediate stages kept for inspection.
WatershedStages watershed_segment_detailed(const RasterImage& gray, const WatershedConfig& cfg);

/**
 * @brief Lesion mask from a single-channel image.
 *
 * Gaussian smoothing, central-difference gradient, Otsu dark region (largest component) eroded into
 * the lesion marker, eroded complement plus the image border ring as the background marker, then
 * flooding. The lesion basin is dilated by a radius-1 disk, cleared of spurs, reduced to its largest
 * component and hole-filled. Throws NoLesionFound when no dark region exists.
 */
BinaryMask watershed_segment(const RasterImage& gray, const WatershedConfig& cfg);

/// Largest dark component of the Otsu-thresholded, Gaussian-smoothed image (shared with snake init).
BinaryMask otsu_dark_region(const RasterImage& gray, double sigma);

}  // namespace lesion
