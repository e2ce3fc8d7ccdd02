#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lesion {

struct PixelPos {
    int x = 0;
    int y = 0;
    friend bool operator==(const PixelPos&, const PixelPos&) = default;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point2&, const Point2&) = default;
};

/**
 * @brief 8-bit pixel grid with 1 (gray) or 3 (RGB) interleaved channels, row-major.
 */
class RasterImage {
public:
    RasterImage(int width, int height, int channels, std::uint8_t fill = 0);
    RasterImage(int width, int height, int channels, std::vector<std::uint8_t> data);

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

    std::uint8_t at(int x, int y, int c = 0) const {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }
    std::uint8_t& at(int x, int y, int c = 0) {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }

    std::span<const std::uint8_t> data() const { return data_; }
    std::span<std::uint8_t> data() { return data_; }

    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    friend bool operator==(const RasterImage&, const RasterImage&) = default;

private:
    int width_;
    int height_;
    int channels_;
    std::vector<std::uint8_t> data_;
};

/**
 * @brief One boolean per pixel. The foreground count is maintained on every write,
 * so count() is O(1).
 */
class BinaryMask {
public:
    BinaryMask(int width, int height, bool fill = false);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return bits_.size(); }

    bool get(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
    bool get_index(std::size_t i) const { return bits_[i] != 0; }
    /// Out-of-bounds reads are background.
    bool get_or_background(int x, int y) const { return contains(x, y) && get(x, y); }

    void set(int x, int y, bool v) { set_index(static_cast<std::size_t>(y) * width_ + x, v); }
    void set_index(std::size_t i, bool v) {
        const bool old = bits_[i] != 0;
        if (old != v) {
            bits_[i] = v ? 1 : 0;
            count_ += v ? 1 : -1;
        }
    }

    std::size_t count() const { return static_cast<std::size_t>(count_); }
    bool empty() const { return count_ == 0; }

    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
    bool same_shape(const BinaryMask& o) const { return width_ == o.width_ && height_ == o.height_; }

    std::span<const std::uint8_t> bits() const { return bits_; }

    friend bool operator==(const BinaryMask& a, const BinaryMask& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.bits_ == b.bits_;
    }

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> bits_;
    std::ptrdiff_t count_ = 0;
};

/// Luma conversion round(0.299 R + 0.587 G + 0.114 B). Single-channel input passes through.
RasterImage to_grayscale(const RasterImage& img);

/// Mask rendered as a gray image with foreground 255 and background 0.
RasterImage mask_to_image(const BinaryMask& m);

/// Pixels with intensity >= 128 become foreground (channel 0 is used).
BinaryMask image_to_mask(const RasterImage& img);

}  // namespace lesion
