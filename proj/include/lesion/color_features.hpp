#pragma once

#include <array>

#include "lesion/raster.hpp"

namespace lesion {

enum class ColorChannel { R, G, B, H, S, V, L, Gray };

inline constexpr std::size_t kColorChannelCount = 8;

/// Lower-case channel names in canonical order: r, g, b, h, s, v, l, gray.
const std::array<const char*, kColorChannelCount>& color_channel_names();

/**
 * Per-pixel value of `channel` on a 0..255 scale. Hue is mapped from degrees onto [0, 256) (0 for
 * achromatic pixels), S and V are the HSV components, L* is CIELAB lightness (sRGB, D65) times 2.55,
 * and gray is the rounded luma.
 */
double channel_value(std::uint8_t r, std::uint8_t g, std::uint8_t b, ColorChannel channel);

struct ChannelStats {
    double variance = 0.0;
    double entropy = 0.0;
    double skewness = 0.0;
};

/**
 * @brief Variance, 256-bin histogram entropy (bits) and skewness for each of the 8 channels.
 *
 * Moments are population moments; skewness is m3 / m2^1.5 and is 0 when the variance is 0.
 * Hue is circular: values are centred on their circular mean and wrapped into [-128, 128) before the
 * moments are taken.
 */
std::array<ChannelStats, kColorChannelCount> color_stats(const RasterImage& rgb, const BinaryMask& m);

}  // namespace lesion
