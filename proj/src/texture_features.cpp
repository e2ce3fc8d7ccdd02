#include "lesion/texture_features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lesion/error.hpp"
#include "lesion/morphology.hpp"

namespace lesion {

namespace {

constexpr int kMaxCoarsenessScale = 5;

class IntegralImage {
public:
    explicit IntegralImage(const RasterImage& gray)
        : w_(gray.width()), h_(gray.height()), sum_(static_cast<std::size_t>(w_ + 1) * (h_ + 1), 0) {
        for (int y = 0; y < h_; ++y) {
            std::int64_t row = 0;
            for (int x = 0; x < w_; ++x) {
                row += gray.at(x, y);
                at(x + 1, y + 1) = at(x + 1, y) + row;
            }
        }
    }

    /// Mean over [x0, x1] x [y0, y1]; the window must lie inside the image.
    double window_mean(int x0, int y0, int x1, int y1) const {
        const std::int64_t s = at(x1 + 1, y1 + 1) - at(x0, y1 + 1) - at(x1 + 1, y0) + at(x0, y0);
        return static_cast<double>(s) / static_cast<double>((x1 - x0 + 1) * (y1 - y0 + 1));
    }

    /// Mean of the 2*half square window whose centre is (x, y).
    double local_mean(int x, int y, int half) const {
        return window_mean(x - half, y - half, x + half - 1, y + half - 1);
    }

    /// True when both window pairs at this scale lie inside the image.
    bool scale_fits(int x, int y, int half) const {
        const int reach = 2 * half;
        return x - reach >= 0 && y - reach >= 0 && x + reach - 1 < w_ && y + reach - 1 < h_;
    }

private:
    std::int64_t& at(int x, int y) { return sum_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }
    std::int64_t at(int x, int y) const { return sum_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }

    int w_;
    int h_;
    std::vector<std::int64_t> sum_;
};

}  // namespace

GlcmMatrix glcm(const RasterImage& gray, const BinaryMask& m, PixelPos offset, int levels) {
    if (levels < 2 || levels > 256) {
        throw std::invalid_argument("glcm levels must be in [2, 256]");
    }
    if (offset.x == 0 && offset.y == 0) {
        throw std::invalid_argument("glcm offset must be nonzero");
    }
    if (gray.channels() != 1) {
        throw std::invalid_argument("glcm expects a single-channel image");
    }
    if (gray.width() != m.width() || gray.height() != m.height()) {
        throw DimensionMismatch("glcm: image and mask dimensions differ");
    }
    const auto n = static_cast<std::size_t>(levels);
    std::vector<std::uint64_t> counts(n * n, 0);
    std::uint64_t pairs = 0;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            const int qx = x + offset.x;
            const int qy = y + offset.y;
            if (!m.get(x, y) || !m.get_or_background(qx, qy)) {
                continue;
            }
            const auto a = static_cast<std::size_t>(quantize_level(gray.at(x, y), levels));
            const auto b = static_cast<std::size_t>(quantize_level(gray.at(qx, qy), levels));
            ++counts[a * n + b];
            ++counts[b * n + a];
            ++pairs;
        }
    }
    if (pairs < 2) {
        throw InsufficientSupport("glcm: fewer than 2 co-occurring pixel pairs inside the mask");
    }
    GlcmMatrix g;
    g.levels = levels;
    g.offset = offset;
    g.entries.resize(n * n);
    const auto total = static_cast<double>(2 * pairs);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        g.entries[i] = static_cast<double>(counts[i]) / total;
    }
    return g;
}

const std::array<const char*, GlcmStats::kCount>& GlcmStats::names() {
    static const std::array<const char*, kCount> n = {"mean",   "variance",      "correlation", "homogeneity",
                                                      "contrast", "energy",      "entropy",     "dissimilarity",
                                                      "kurtosis", "skewness",    "max_probability"};
    return n;
}

std::array<double, GlcmStats::kCount> GlcmStats::values() const {
    return {mean,    variance,      correlation, homogeneity, contrast,       energy,
            entropy, dissimilarity, kurtosis,    skewness,    max_probability};
}

GlcmStats glcm_stats(const GlcmMatrix& g) {
    const int L = g.levels;
    if (L < 2 || g.entries.size() != static_cast<std::size_t>(L) * L) {
        throw std::invalid_argument("glcm_stats: malformed matrix");
    }
    std::vector<double> marginal(static_cast<std::size_t>(L), 0.0);
    GlcmStats s;
    for (int i = 0; i < L; ++i) {
        for (int j = 0; j < L; ++j) {
            const double p = g.at(i, j);
            marginal[static_cast<std::size_t>(i)] += p;
            const double d = std::abs(i - j);
            s.contrast += d * d * p;
            s.dissimilarity += d * p;
            s.homogeneity += p / (1.0 + d);
            s.energy += p * p;
            if (p > 0.0) {
                s.entropy -= p * std::log2(p);
            }
            s.max_probability = std::max(s.max_probability, p);
        }
    }
    for (int i = 0; i < L; ++i) {
        s.mean += i * marginal[static_cast<std::size_t>(i)];
    }
    double m3 = 0.0;
    double m4 = 0.0;
    for (int i = 0; i < L; ++i) {
        const double d = i - s.mean;
        const double p = marginal[static_cast<std::size_t>(i)];
        s.variance += d * d * p;
        m3 += d * d * d * p;
        m4 += d * d * d * d * p;
    }
    if (s.variance > 0.0) {
        // Symmetric matrix: row and column marginals coincide.
        double cov = 0.0;
        for (int i = 0; i < L; ++i) {
            for (int j = 0; j < L; ++j) {
                cov += (i - s.mean) * (j - s.mean) * g.at(i, j);
            }
        }
        s.correlation = cov / s.variance;
        s.skewness = m3 / std::pow(s.variance, 1.5);
        s.kurtosis = m4 / (s.variance * s.variance);
    } else {
        s.correlation = 1.0;
    }
    return s;
}

Coarseness coarseness(const RasterImage& gray, const BinaryMask& m) {
    if (gray.channels() != 1) {
        throw std::invalid_argument("coarseness expects a single-channel image");
    }
    if (gray.width() != m.width() || gray.height() != m.height()) {
        throw DimensionMismatch("coarseness: image and mask dimensions differ");
    }
    const BoundingBox box = bounding_box(m);
    if (box.width() < 32 || box.height() < 32) {
        throw InsufficientSupport("coarseness needs a mask bounding box of at least 32x32");
    }
    const IntegralImage integral(gray);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (!m.get(x, y)) {
                continue;
            }
            int best_k = 1;
            double best = -1.0;
            for (int k = 1; k <= kMaxCoarsenessScale; ++k) {
                const int half = 1 << (k - 1);
                // Clipped windows bias the response, so scales leaving the image are not considered.
                if (!integral.scale_fits(x, y, half)) {
                    break;
                }
                const double eh =
                    std::abs(integral.local_mean(x + half, y, half) - integral.local_mean(x - half, y, half));
                const double ev =
                    std::abs(integral.local_mean(x, y + half, half) - integral.local_mean(x, y - half, half));
                const double e = std::max(eh, ev);
                if (e > best) {
                    best = e;
                    best_k = k;
                }
            }
            const double size = static_cast<double>(1 << best_k);
            sum += size;
            sum_sq += size * size;
        }
    }
    const auto n = static_cast<double>(m.count());
    Coarseness c;
    c.mean = sum / n;
    c.std = std::sqrt(std::max(0.0, sum_sq / n - c.mean * c.mean));
    return c;
}

}  // namespace lesion
