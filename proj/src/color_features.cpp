#include "lesion/color_features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lesion/error.hpp"

namespace lesion {

namespace {

double srgb_to_linear(std::uint8_t v) {
    const double c = v / 255.0;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
    constexpr double d = 6.0 / 29.0;
    return t > d * d * d ? std::cbrt(t) : t / (3.0 * d * d) + 4.0 / 29.0;
}

ChannelStats moments_and_entropy(const std::vector<double>& centred, const std::vector<double>& raw) {
    ChannelStats s;
    std::array<std::size_t, 256> hist{};
    for (double v : raw) {
        ++hist[static_cast<std::size_t>(std::clamp(std::floor(v), 0.0, 255.0))];
    }
    const auto n = static_cast<double>(raw.size());
    for (std::size_t c : hist) {
        if (c > 0) {
            const double p = static_cast<double>(c) / n;
            s.entropy -= p * std::log2(p);
        }
    }
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    if (*lo == *hi) {
        return s;
    }
    double mean = 0.0;
    for (double v : centred) {
        mean += v;
    }
    mean /= n;
    double m2 = 0.0;
    double m3 = 0.0;
    for (double v : centred) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    s.variance = m2;
    s.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    return s;
}

std::vector<double> wrap_hue(const std::vector<double>& hue) {
    double sx = 0.0;
    double sy = 0.0;
    for (double h : hue) {
        const double a = h * 2.0 * std::numbers::pi / 256.0;
        sx += std::cos(a);
        sy += std::sin(a);
    }
    double centre = std::atan2(sy, sx) * 256.0 / (2.0 * std::numbers::pi);
    if (centre < 0.0) {
        centre += 256.0;
    }
    std::vector<double> out;
    out.reserve(hue.size());
    for (double h : hue) {
        double d = h - centre;
        if (d >= 128.0) {
            d -= 256.0;
        } else if (d < -128.0) {
            d += 256.0;
        }
        out.push_back(d);
    }
    return out;
}

}  // namespace

const std::array<const char*, kColorChannelCount>& color_channel_names() {
    static const std::array<const char*, kColorChannelCount> n = {"r", "g", "b", "h", "s", "v", "l", "gray"};
    return n;
}

double channel_value(std::uint8_t r, std::uint8_t g, std::uint8_t b, ColorChannel channel) {
    const int mx = std::max({r, g, b});
    const int mn = std::min({r, g, b});
    switch (channel) {
        case ColorChannel::R:
            return r;
        case ColorChannel::G:
            return g;
        case ColorChannel::B:
            return b;
        case ColorChannel::H: {
            if (mx == mn) {
                return 0.0;
            }
            const double c = mx - mn;
            double deg;
            if (mx == r) {
                deg = 60.0 * ((g - b) / c);
            } else if (mx == g) {
                deg = 60.0 * ((b - r) / c + 2.0);
            } else {
                deg = 60.0 * ((r - g) / c + 4.0);
            }
            if (deg < 0.0) {
                deg += 360.0;
            }
            const double h = deg * 256.0 / 360.0;
            return h >= 256.0 ? h - 256.0 : h;
        }
        case ColorChannel::S:
            return mx == 0 ? 0.0 : 255.0 * (mx - mn) / mx;
        case ColorChannel::V:
            return mx;
        case ColorChannel::L: {
            const double y = 0.2126729 * srgb_to_linear(r) + 0.7151522 * srgb_to_linear(g) +
                             0.0721750 * srgb_to_linear(b);
            return 2.55 * (116.0 * lab_f(y) - 16.0);
        }
        case ColorChannel::Gray:
            return (299 * r + 587 * g + 114 * b + 500) / 1000;
    }
    throw std::invalid_argument("unknown color channel");
}

std::array<ChannelStats, kColorChannelCount> color_stats(const RasterImage& rgb, const BinaryMask& m) {
    if (rgb.channels() != 3) {
        throw std::invalid_argument("color_stats expects an RGB image");
    }
    if (rgb.width() != m.width() || rgb.height() != m.height()) {
        throw DimensionMismatch("color_stats: image and mask dimensions differ");
    }
    if (m.empty()) {
        throw EmptyMaskError("color_stats of an empty mask");
    }
    std::array<std::vector<double>, kColorChannelCount> values;
    for (auto& v : values) {
        v.reserve(m.count());
    }
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (!m.get(x, y)) {
                continue;
            }
            for (std::size_t c = 0; c < kColorChannelCount; ++c) {
                values[c].push_back(
                    channel_value(rgb.at(x, y, 0), rgb.at(x, y, 1), rgb.at(x, y, 2), static_cast<ColorChannel>(c)));
            }
        }
    }
    std::array<ChannelStats, kColorChannelCount> out;
    for (std::size_t c = 0; c < kColorChannelCount; ++c) {
        if (static_cast<ColorChannel>(c) == ColorChannel::H) {
            out[c] = moments_and_entropy(wrap_hue(values[c]), values[c]);
        } else {
            out[c] = moments_and_entropy(values[c], values[c]);
        }
    }
    return out;
}

}  // namespace lesion
