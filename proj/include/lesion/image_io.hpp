#pragma once

#include <filesystem>

#include "lesion/raster.hpp"

namespace lesion {

/// Loads an 8-bit PNG or an uncompressed BMP (1/8/24/32 bpp), detected from the file signature.
/// Gray sources give 1 channel, color sources 3; alpha is dropped.
RasterImage load_image(const std::filesystem::path& path);

/// Writes PNG or BMP depending on the extension (.png / .bmp, case-insensitive).
void save_image(const RasterImage& img, const std::filesystem::path& path);

/// Mask files are single-channel with foreground 255 and background 0.
BinaryMask load_mask(const std::filesystem::path& path);
void save_mask(const BinaryMask& m, const std::filesystem::path& path);

}  // namespace lesion
