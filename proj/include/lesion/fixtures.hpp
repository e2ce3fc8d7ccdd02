#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "lesion/dataset.hpp"
#include "lesion/raster.hpp"

namespace lesion {

struct SyntheticLesion {
    RasterImage image;
    BinaryMask truth;
};

/**
 * @brief Deterministic 128x128 synthetic dermoscopy-like image.
 *
 * Benign lesions are near-round with a uniform brown tone. Malignant ones have a lobed border and
 * are mottled with dark and blue-gray blobs at least 10 px across. Both sit on lightly textured skin.
 * The truth mask is the analytic lesion shape.
 */
SyntheticLesion make_synthetic_lesion(bool malignant, std::uint64_t seed, int size = 128);

/// Writes images/<id>.png, masks/<id>_mask.png and manifest.csv under `dir`; returns the records.
std::vector<DatasetRecord> write_fixture_corpus(const std::filesystem::path& dir, int benign, int malignant,
                                                std::uint64_t seed);

}  // namespace lesion
