#include "lesion/filters.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace lesion {

double ScalarField::sample(double x, double y) const {
    x = std::clamp(x, 0.0, static_cast<double>(width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(height - 1));
    const int x0 = std::min(static_cast<int>(std::floor(x)), width - 1);
    const int y0 = std::min(static_cast<int>(std::floor(y)), height - 1);
    const int x1 = std::min(x0 + 1, width - 1);
    const int y1 = std::min(y0 + 1, height - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const double top = at(x0, y0) * (1.0 - fx) + at(x1, y0) * fx;
    const double bot = at(x0, y1) * (1.0 - fx) + at(x1, y1) * fx;
    return top * (1.0 - fy) + bot * fy;
}

ScalarField to_field(const RasterImage& gray) {
    if (gray.channels() != 1) {
        throw std::invalid_argument("to_field expects a single-channel image");
    }
    ScalarField f(gray.width(), gray.height());
    auto src = gray.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
        f.values[i] = src[i];
    }
    return f;
}

std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("gaussian sigma must be > 0");
    }
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(2 * static_cast<std::size_t>(radius) + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
        k[static_cast<std::size_t>(i + radius)] = v;
        sum += v;
    }
    for (double& v : k) {
        v /= sum;
    }
    return k;
}

ScalarField gaussian_blur(const ScalarField& f, double sigma) {
    const auto k = gaussian_kernel(sigma);
    const int r = static_cast<int>(k.size() / 2);
    ScalarField tmp(f.width, f.height);
    ScalarField out(f.width, f.height);
    for (int y = 0; y < f.height; ++y) {
        for (int x = 0; x < f.width; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i) {
                acc += k[static_cast<std::size_t>(i + r)] * f.at(std::clamp(x + i, 0, f.width - 1), y);
            }
            tmp.at(x, y) = acc;
        }
    }
    for (int y = 0; y < f.height; ++y) {
        for (int x = 0; x < f.width; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i) {
                acc += k[static_cast<std::size_t>(i + r)] * tmp.at(x, std::clamp(y + i, 0, f.height - 1));
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

ScalarField gradient_magnitude(const ScalarField& f) {
    ScalarField g(f.width, f.height);
    for (int y = 0; y < f.height; ++y) {
        for (int x = 0; x < f.width; ++x) {
            const int xl = std::max(x - 1, 0);
            const int xr = std::min(x + 1, f.width - 1);
            const int yu = std::max(y - 1, 0);
            const int yd = std::min(y + 1, f.height - 1);
            const double gx = xr > xl ? (f.at(xr, y) - f.at(xl, y)) / (xr - xl) : 0.0;
            const double gy = yd > yu ? (f.at(x, yd) - f.at(x, yu)) / (yd - yu) : 0.0;
            g.at(x, y) = std::sqrt(gx * gx + gy * gy);
        }
    }
    return g;
}

int otsu_threshold(const RasterImage& gray) {
    if (gray.channels() != 1) {
        throw std::invalid_argument("otsu_threshold expects a single-channel image");
    }
    std::array<double, 256> hist{};
    for (auto v : gray.data()) {
        hist[v] += 1.0;
    }
    const double total = static_cast<double>(gray.pixel_count());
    const auto occupied = std::count_if(hist.begin(), hist.end(), [](double c) { return c > 0.0; });
    if (occupied < 2) {
        return -1;
    }
    double sum_all = 0.0;
    for (int i = 0; i < 256; ++i) {
        sum_all += i * hist[static_cast<std::size_t>(i)];
    }
    double w0 = 0.0;
    double sum0 = 0.0;
    double best = -1.0;
    int best_t = -1;
    for (int t = 0; t < 255; ++t) {
        w0 += hist[static_cast<std::size_t>(t)];
        sum0 += t * hist[static_cast<std::size_t>(t)];
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0) {
            continue;
        }
        const double m0 = sum0 / w0;
        const double m1 = (sum_all - sum0) / w1;
        const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
        if (between > best) {
            best = between;
            best_t = t;
        }
    }
    return best_t;
}

BinaryMask threshold_at_most(const RasterImage& gray, int threshold) {
    BinaryMask m(gray.width(), gray.height());
    auto src = gray.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (static_cast<int>(src[i]) <= threshold) {
            m.set_index(i, true);
        }
    }
    return m;
}

RasterImage field_to_image(const ScalarField& f) {
    RasterImage out(f.width, f.height, 1);
    auto dst = out.data();
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        dst[i] = static_cast<std::uint8_t>(std::clamp(std::lround(f.values[i]), 0L, 255L));
    }
    return out;
}

}  // namespace lesion
