#include "lesion/raster.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace lesion {

namespace {

void check_shape(int width, int height, int channels) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("raster dimensions must be positive, got " + std::to_string(width) +
                                    "x" + std::to_string(height));
    }
    if (channels != 1 && channels != 3) {
        throw std::invalid_argument("raster must have 1 or 3 channels, got " + std::to_string(channels));
    }
}

}  // namespace

RasterImage::RasterImage(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
    check_shape(width, height, channels);
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

RasterImage::RasterImage(int width, int height, int channels, std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
    check_shape(width, height, channels);
    if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
        throw std::invalid_argument("raster data length does not match width*height*channels");
    }
}

BinaryMask::BinaryMask(int width, int height, bool fill) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("mask dimensions must be positive");
    }
    bits_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
    count_ = fill ? static_cast<std::ptrdiff_t>(bits_.size()) : 0;
}

RasterImage to_grayscale(const RasterImage& img) {
    if (img.channels() == 1) {
        return img;
    }
    RasterImage out(img.width(), img.height(), 1);
    auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
        // Fixed-point weights; +500 rounds half up.
        const unsigned v = 299u * src[3 * i] + 587u * src[3 * i + 1] + 114u * src[3 * i + 2] + 500u;
        dst[i] = static_cast<std::uint8_t>(std::min(255u, v / 1000u));
    }
    return out;
}

RasterImage mask_to_image(const BinaryMask& m) {
    RasterImage out(m.width(), m.height(), 1);
    auto dst = out.data();
    auto bits = m.bits();
    for (std::size_t i = 0; i < bits.size(); ++i) {
        dst[i] = bits[i] ? 255 : 0;
    }
    return out;
}

BinaryMask image_to_mask(const RasterImage& img) {
    BinaryMask m(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            if (img.at(x, y, 0) >= 128) {
                m.set(x, y, true);
            }
        }
    }
    return m;
}

}  // namespace lesion
