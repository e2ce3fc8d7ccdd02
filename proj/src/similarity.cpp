#include "lesion/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lesion/error.hpp"
#include "lesion/filters.hpp"

namespace lesion {

namespace {

std::vector<double> window_taps(const SimilarityConfig& cfg) {
    const int r = cfg.window / 2;
    std::vector<double> k(static_cast<std::size_t>(cfg.window));
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
        const double v = std::exp(-(i * i) / (2.0 * cfg.window_sigma * cfg.window_sigma));
        k[static_cast<std::size_t>(i + r)] = v;
        sum += v;
    }
    for (double& v : k) {
        v /= sum;
    }
    return k;
}

ScalarField separable(const ScalarField& f, const std::vector<double>& k) {
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

void require_same(const BinaryMask& a, const BinaryMask& b, const char* op) {
    if (!a.same_shape(b)) {
        throw DimensionMismatch(std::string(op) + ": mask dimensions differ");
    }
}

std::size_t intersection(const BinaryMask& a, const BinaryMask& b) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.pixel_count(); ++i) {
        n += (a.get_index(i) && b.get_index(i)) ? 1 : 0;
    }
    return n;
}

}  // namespace

void SimilarityConfig::validate() const {
    if (window < 3 || window % 2 == 0) {
        throw std::invalid_argument("SSIM window must be odd and >= 3");
    }
    if (!(window_sigma > 0.0) || !(c1() > 0.0) || !(c2() > 0.0)) {
        throw std::invalid_argument("SSIM stabilizers and window sigma must be > 0");
    }
}

double ssim(const RasterImage& a, const RasterImage& b, const SimilarityConfig& cfg) {
    cfg.validate();
    if (a.channels() != 1 || b.channels() != 1) {
        throw std::invalid_argument("ssim expects single-channel images");
    }
    if (a.width() != b.width() || a.height() != b.height()) {
        throw DimensionMismatch("ssim: image dimensions differ");
    }
    const ScalarField x = to_field(a);
    const ScalarField y = to_field(b);
    ScalarField xx(x.width, x.height), yy(x.width, x.height), xy(x.width, x.height);
    for (std::size_t i = 0; i < x.values.size(); ++i) {
        xx.values[i] = x.values[i] * x.values[i];
        yy.values[i] = y.values[i] * y.values[i];
        xy.values[i] = x.values[i] * y.values[i];
    }
    const auto k = window_taps(cfg);
    const ScalarField mx = separable(x, k);
    const ScalarField my = separable(y, k);
    const ScalarField sxx = separable(xx, k);
    const ScalarField syy = separable(yy, k);
    const ScalarField sxy = separable(xy, k);

    const double c1 = cfg.c1();
    const double c2 = cfg.c2();
    double total = 0.0;
    for (std::size_t i = 0; i < x.values.size(); ++i) {
        const double mux = mx.values[i];
        const double muy = my.values[i];
        const double vx = sxx.values[i] - mux * mux;
        const double vy = syy.values[i] - muy * muy;
        const double cov = sxy.values[i] - mux * muy;
        total += ((2.0 * mux * muy + c1) * (2.0 * cov + c2)) / ((mux * mux + muy * muy + c1) * (vx + vy + c2));
    }
    const double pct = 100.0 * total / static_cast<double>(x.values.size());
    return std::max(pct, -100.0);
}

double jaccard(const BinaryMask& a, const BinaryMask& b) {
    require_same(a, b, "jaccard");
    const std::size_t common = intersection(a, b);
    const std::size_t only_a = a.count() - common;
    const std::size_t only_b = b.count() - common;
    const std::size_t denom = common + only_a + only_b;
    if (denom == 0) {
        return 100.0;
    }
    return 100.0 * static_cast<double>(common) / static_cast<double>(denom);
}

double dice(const BinaryMask& a, const BinaryMask& b) {
    require_same(a, b, "dice");
    const std::size_t denom = a.count() + b.count();
    if (denom == 0) {
        return 100.0;
    }
    return 100.0 * 2.0 * static_cast<double>(intersection(a, b)) / static_cast<double>(denom);
}

SimilarityReport compare_masks(const BinaryMask& computed, const BinaryMask& truth, const SimilarityConfig& cfg) {
    return {ssim(mask_to_image(computed), mask_to_image(truth), cfg), jaccard(computed, truth), dice(computed, truth)};
}

}  // namespace lesion
