#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "../test_support.hpp"
#include "lesion/color_features.hpp"
#include "lesion/error.hpp"
#include "lesion/features.hpp"
#include "lesion/fixtures.hpp"
#include "lesion/morphology.hpp"
#include "lesion/shape_features.hpp"
#include "lesion/texture_features.hpp"

using namespace lesion;
using lesion::testing::disk_mask;
using lesion::testing::glcm_oracle;
using lesion::testing::random_image;
using lesion::testing::random_mask;
using lesion::testing::rect_mask;

namespace {

std::vector<PixelPos> boundary_oracle(const BinaryMask& m) {
    std::vector<PixelPos> out;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (m.get(x, y) && (!m.get_or_background(x - 1, y) || !m.get_or_background(x + 1, y) ||
                                !m.get_or_background(x, y - 1) || !m.get_or_background(x, y + 1))) {
                out.push_back({x, y});
            }
        }
    }
    return out;
}

Point2 mean_position(const BinaryMask& m) {
    double sx = 0, sy = 0, n = 0;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (m.get(x, y)) {
                sx += x;
                sy += y;
                ++n;
            }
        }
    }
    return {sx / n, sy / n};
}

// XOR ratio for a reflection across an axis-aligned line through the centroid.
double axis_flip_ratio(const BinaryMask& m, bool vertical_axis) {
    const Point2 c = mean_position(m);
    std::set<std::pair<long, long>> original;
    std::set<std::pair<long, long>> mirrored;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (m.get(x, y)) {
                original.insert({x, y});
                mirrored.insert(vertical_axis ? std::pair{std::lround(2 * c.x - x), static_cast<long>(y)}
                                              : std::pair{static_cast<long>(x), std::lround(2 * c.y - y)});
            }
        }
    }
    std::size_t xor_count = 0;
    for (const auto& p : original) {
        xor_count += mirrored.count(p) == 0 ? 1 : 0;
    }
    for (const auto& p : mirrored) {
        xor_count += original.count(p) == 0 ? 1 : 0;
    }
    return static_cast<double>(xor_count) / (2.0 * static_cast<double>(m.count()));
}

BinaryMask ellipse_mask(int w, int h, double cx, double cy, double a, double b) {
    BinaryMask m(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            m.set(x, y, std::pow((x - cx) / a, 2) + std::pow((y - cy) / b, 2) <= 1.0);
        }
    }
    return m;
}

BinaryMask rotate90(const BinaryMask& m) {
    BinaryMask r(m.height(), m.width());
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            r.set(m.height() - 1 - y, x, m.get(x, y));
        }
    }
    return r;
}

BinaryMask translate(const BinaryMask& m, int dx, int dy) {
    BinaryMask r(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (m.get(x, y) && r.contains(x + dx, y + dy)) {
                r.set(x + dx, y + dy, true);
            }
        }
    }
    return r;
}

GlcmMatrix make_glcm(int levels, std::vector<std::tuple<int, int, double>> cells) {
    GlcmMatrix g;
    g.levels = levels;
    g.offset = {1, 0};
    g.entries.assign(static_cast<std::size_t>(levels * levels), 0.0);
    for (auto [i, j, p] : cells) {
        g.entries[static_cast<std::size_t>(i * levels + j)] = p;
    }
    return g;
}

struct MomentOracle {
    double variance, entropy, skewness;
};

MomentOracle moments(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double mean = 0;
    for (double x : v) {
        mean += x / n;
    }
    double m2 = 0, m3 = 0;
    for (double x : v) {
        m2 += (x - mean) * (x - mean) / n;
        m3 += (x - mean) * (x - mean) * (x - mean) / n;
    }
    std::map<int, int> hist;
    for (double x : v) {
        ++hist[static_cast<int>(std::floor(x))];
    }
    double h = 0;
    for (auto [bin, c] : hist) {
        h -= c / n * std::log2(c / n);
    }
    return {m2, h, m2 > 0 ? m3 / std::pow(m2, 1.5) : 0.0};
}

}  // namespace

TEST(Asymmetry, DiskIsNearlySymmetric) {
    EXPECT_LT(asymmetry(disk_mask(64, 64, 31.0, 32.0, 20.0)), 0.02);
}

TEST(Asymmetry, HalfDiskMatchesReflectOracle) {
    BinaryMask half = disk_mask(64, 64, 32, 32, 20);
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 32; ++x) {
            half.set(x, y, false);
        }
    }
    const double expect = 0.5 * (axis_flip_ratio(half, true) + axis_flip_ratio(half, false));
    EXPECT_NEAR(asymmetry(half), expect, 1e-12);
    EXPECT_GT(asymmetry(half), 4 * asymmetry(disk_mask(64, 64, 32, 32, 20)));
}

TEST(Asymmetry, SelfReflectingMaskIsZero) {
    EXPECT_EQ(asymmetry(rect_mask(30, 30, 5, 8, 24, 17)), 0.0);
    EXPECT_THROW(asymmetry(BinaryMask(5, 5)), EmptyMaskError);
}

TEST(Compactness, DiskNearOne) {
    EXPECT_NEAR(compactness(disk_mask(90, 90, 45, 45, 32)), 1.0, 0.15);
}

TEST(Compactness, SquareNearFourOverPi) {
    const double n = 50;
    EXPECT_NEAR(compactness(rect_mask(60, 60, 5, 5, 54, 54)), (4 * n - 4) * (4 * n - 4) / (4 * std::numbers::pi * n * n),
                0.1 * 4 / std::numbers::pi);
}

TEST(Compactness, LineExceedsSquareOfSameArea) {
    const BinaryMask line = rect_mask(20, 3, 1, 1, 16, 1);     // 1 x 16
    const BinaryMask square = rect_mask(20, 20, 2, 2, 5, 5);   // 4 x 4
    EXPECT_GT(compactness(line), compactness(square));
    EXPECT_THROW(compactness(BinaryMask(4, 4)), EmptyMaskError);
}

TEST(RadialVariance, DiskIsSmall) { EXPECT_LT(radial_variance(disk_mask(80, 80, 40, 40, 25)), 0.01); }

TEST(RadialVariance, EllipseMatchesBoundaryOracle) {
    const BinaryMask e = ellipse_mask(100, 60, 49.5, 29.5, 40, 20);
    const auto b = boundary_oracle(e);
    const Point2 c = mean_position(e);
    double mean = 0;
    for (const auto& p : b) {
        mean += std::hypot(p.x - c.x, p.y - c.y) / static_cast<double>(b.size());
    }
    double var = 0;
    for (const auto& p : b) {
        var += std::pow(std::hypot(p.x - c.x, p.y - c.y) - mean, 2) / static_cast<double>(b.size());
    }
    EXPECT_NEAR(radial_variance(e), var / (mean * mean), 1e-12);
}

TEST(RadialVariance, ScaleInvariant) {
    const double small = radial_variance(ellipse_mask(100, 60, 49.5, 29.5, 40, 20));
    const double big = radial_variance(ellipse_mask(200, 120, 99.5, 59.5, 80, 40));
    EXPECT_NEAR(big, small, 0.05 * small);
    BinaryMask tiny(5, 5);
    tiny.set(2, 2, true);
    EXPECT_THROW(radial_variance(tiny), InsufficientSupport);
}

TEST(Feret, Examples) {
    BinaryMask one(5, 5);
    one.set(2, 2, true);
    EXPECT_EQ(feret_diameter(one), 0.0);
    EXPECT_DOUBLE_EQ(feret_diameter(rect_mask(20, 3, 2, 1, 13, 1)), 11.0);
    for (double r : {6.0, 13.0, 25.0}) {
        const BinaryMask d = disk_mask(64, 64, 31.6, 32.2, r);
        const auto b = boundary_oracle(d);
        double best = 0;
        for (const auto& p : b) {
            for (const auto& q : b) {
                best = std::max(best, std::hypot(p.x - q.x, p.y - q.y));
            }
        }
        EXPECT_DOUBLE_EQ(feret_diameter(d), best);
        EXPECT_NEAR(feret_diameter(d), 2 * r, 1.5);
    }
}

TEST(Feret, AtLeastBoundingBoxSideOnRandomBlobs) {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 40; ++t) {
        const BinaryMask m = largest_component(random_mask(rng, 20, 20, 0.55), 8);
        if (m.empty()) {
            continue;
        }
        const BoundingBox box = bounding_box(m);
        EXPECT_GE(feret_diameter(m), std::max(box.width(), box.height()) - 1);
    }
}

TEST(ShapeFeatures, TranslationAndRotationInvariance) {
    const BinaryMask base = ellipse_mask(80, 80, 38.3, 40.1, 22, 13);
    const BinaryMask moved = translate(base, 7, -5);
    EXPECT_DOUBLE_EQ(asymmetry(moved), asymmetry(base));
    EXPECT_DOUBLE_EQ(compactness(moved), compactness(base));
    EXPECT_NEAR(radial_variance(moved), radial_variance(base), 1e-12);
    const BinaryMask turned = rotate90(base);
    EXPECT_NEAR(compactness(turned), compactness(base), 0.05 * compactness(base));
    EXPECT_NEAR(radial_variance(turned), radial_variance(base), 0.05 * radial_variance(base));
    EXPECT_NEAR(asymmetry(turned), asymmetry(base), 0.05 * std::max(asymmetry(base), 0.02));
}

TEST(Glcm, ConstantRegionIsPointMass) {
    const RasterImage img(8, 8, 1, 77);
    const BinaryMask m = rect_mask(8, 8, 1, 1, 6, 6);
    const GlcmMatrix g = glcm(img, m, {1, 0}, 16);
    const int lvl = quantize_level(77, 16);
    EXPECT_EQ(g.at(lvl, lvl), 1.0);
    const GlcmStats s = glcm_stats(g);
    EXPECT_EQ(s.contrast, 0.0);
    EXPECT_EQ(s.energy, 1.0);
    EXPECT_EQ(s.homogeneity, 1.0);
    EXPECT_EQ(s.entropy, 0.0);
    EXPECT_EQ(s.mean, lvl);
    EXPECT_EQ(s.correlation, 1.0);
    EXPECT_EQ(s.skewness, 0.0);
    EXPECT_EQ(s.kurtosis, 0.0);
}

TEST(Glcm, TwoByTwoHandCount) {
    // Columns of dark and light: every horizontal pair is (dark, light).
    const RasterImage img(2, 2, 1, std::vector<std::uint8_t>{0, 255, 0, 255});
    const GlcmMatrix g = glcm(img, BinaryMask(2, 2, true), {1, 0}, 2);
    EXPECT_EQ(g.at(0, 1), 0.5);
    EXPECT_EQ(g.at(1, 0), 0.5);
    EXPECT_EQ(g.at(0, 0), 0.0);
    EXPECT_EQ(g.at(1, 1), 0.0);
}

TEST(Glcm, CheckerboardHasEmptyDiagonal) {
    RasterImage img(4, 4, 1);
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 4; ++x) {
            img.at(x, y) = (x + y) % 2 == 0 ? 0 : 255;
        }
    }
    const GlcmMatrix g = glcm(img, BinaryMask(4, 4, true), {1, 0}, 2);
    EXPECT_EQ(g.entries, glcm_oracle(img, BinaryMask(4, 4, true), {1, 0}, 2));
    EXPECT_EQ(g.at(0, 0), 0.0);
    EXPECT_EQ(g.at(1, 1), 0.0);
    EXPECT_EQ(g.at(0, 1), 0.5);
}

TEST(Glcm, RandomSmallMatchesPairEnumeration) {
    std::mt19937_64 rng(42);
    int checked = 0;
    for (int t = 0; t < 200; ++t) {
        const int w = 2 + static_cast<int>(rng() % 5);
        const int h = 2 + static_cast<int>(rng() % 5);
        const RasterImage img = random_image(rng, w, h);
        const BinaryMask m = random_mask(rng, w, h, 0.75);
        const int levels = t % 2 == 0 ? 16 : 4;
        for (PixelPos off : glcm_offsets(1)) {
            try {
                const GlcmMatrix g = glcm(img, m, off, levels);
                EXPECT_EQ(g.entries, glcm_oracle(img, m, off, levels));
                double sum = 0;
                for (int i = 0; i < levels; ++i) {
                    for (int j = 0; j < levels; ++j) {
                        sum += g.at(i, j);
                        EXPECT_EQ(g.at(i, j), g.at(j, i));
                    }
                }
                EXPECT_NEAR(sum, 1.0, 1e-9);
                ++checked;
            } catch (const InsufficientSupport&) {
            }
        }
    }
    EXPECT_GT(checked, 300);
}

TEST(Glcm, Errors) {
    const RasterImage img(4, 4, 1, 10);
    BinaryMask lone(4, 4);
    lone.set(1, 1, true);
    lone.set(2, 1, true);
    EXPECT_THROW(glcm(img, lone, {1, 0}, 16), InsufficientSupport);
    EXPECT_THROW(glcm(img, BinaryMask(4, 4, true), {0, 0}, 16), std::invalid_argument);
    EXPECT_THROW(glcm(img, BinaryMask(4, 4, true), {1, 0}, 1), std::invalid_argument);
}

TEST(GlcmStats, CheckerboardClosedForm) {
    const GlcmStats s = glcm_stats(make_glcm(2, {{0, 1, 0.5}, {1, 0, 0.5}}));
    EXPECT_DOUBLE_EQ(s.contrast, 1.0);
    EXPECT_DOUBLE_EQ(s.correlation, -1.0);
    EXPECT_DOUBLE_EQ(s.energy, 0.5);
    EXPECT_DOUBLE_EQ(s.mean, 0.5);
    EXPECT_DOUBLE_EQ(s.dissimilarity, 1.0);
    EXPECT_DOUBLE_EQ(s.max_probability, 0.5);
}

TEST(GlcmStats, PointMassAndUniform) {
    const GlcmStats p = glcm_stats(make_glcm(8, {{5, 5, 1.0}}));
    EXPECT_EQ(p.mean, 5.0);
    EXPECT_EQ(p.contrast, 0.0);
    EXPECT_EQ(p.energy, 1.0);
    EXPECT_EQ(p.entropy, 0.0);
    for (int k : {2, 4, 16}) {
        std::vector<std::tuple<int, int, double>> cells;
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                cells.emplace_back(i, j, 1.0 / (k * k));
            }
        }
        EXPECT_NEAR(glcm_stats(make_glcm(k, cells)).entropy, 2 * std::log2(k), 1e-12);
    }
}

TEST(Coarseness, ConstantTiesToSmallestWindow) {
    const Coarseness c = coarseness(RasterImage(64, 64, 1, 90), rect_mask(64, 64, 10, 10, 53, 53));
    EXPECT_EQ(c.mean, 2.0);
    EXPECT_EQ(c.std, 0.0);
}

TEST(Coarseness, WideStripesAreCoarser) {
    const auto stripes = [](int period) {
        RasterImage img(96, 96, 1);
        for (int y = 0; y < 96; ++y) {
            for (int x = 0; x < 96; ++x) {
                img.at(x, y) = (x / (period / 2)) % 2 == 0 ? 30 : 220;
            }
        }
        return img;
    };
    const BinaryMask m = rect_mask(96, 96, 16, 16, 79, 79);
    const Coarseness fine = coarseness(stripes(2), m);
    const Coarseness coarse = coarseness(stripes(16), m);
    EXPECT_GT(coarse.mean, fine.mean);
    EXPECT_GE(fine.std, 0.0);
    EXPECT_GE(coarse.std, 0.0);
    EXPECT_THROW(coarseness(stripes(2), rect_mask(96, 96, 0, 0, 20, 40)), InsufficientSupport);
}

TEST(ColorStats, UniformRegionIsDegenerate) {
    RasterImage img(10, 10, 3);
    for (int y = 0; y < 10; ++y) {
        for (int x = 0; x < 10; ++x) {
            img.at(x, y, 0) = 140;
            img.at(x, y, 1) = 90;
            img.at(x, y, 2) = 60;
        }
    }
    for (const auto& s : color_stats(img, BinaryMask(10, 10, true))) {
        EXPECT_EQ(s.variance, 0.0);
        EXPECT_EQ(s.entropy, 0.0);
        EXPECT_EQ(s.skewness, 0.0);
    }
}

TEST(ColorStats, TwoValuedHalfSplit) {
    RasterImage img(8, 8, 3);
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
            const std::uint8_t v = x < 4 ? 40 : 200;
            for (int c = 0; c < 3; ++c) {
                img.at(x, y, c) = v;
            }
        }
    }
    const auto s = color_stats(img, BinaryMask(8, 8, true));
    for (auto ch : {ColorChannel::R, ColorChannel::G, ColorChannel::B, ColorChannel::V, ColorChannel::Gray}) {
        EXPECT_EQ(s[static_cast<std::size_t>(ch)].entropy, 1.0);
        EXPECT_NEAR(s[static_cast<std::size_t>(ch)].skewness, 0.0, 1e-12);
    }
}

TEST(ColorStats, GradientPatchMatchesMomentOracle) {
    RasterImage img(8, 8, 3);
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
            img.at(x, y, 0) = static_cast<std::uint8_t>(150 + 9 * x);
            img.at(x, y, 1) = static_cast<std::uint8_t>(60 + 7 * y);
            img.at(x, y, 2) = static_cast<std::uint8_t>(40 + 3 * x + 2 * y);
        }
    }
    const BinaryMask m = rect_mask(8, 8, 0, 0, 7, 7);
    std::array<std::vector<double>, 8> v;
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
            const double r = img.at(x, y, 0), g = img.at(x, y, 1), b = img.at(x, y, 2);
            const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
            // Red dominates everywhere, so hue = 60 (g - b) / (mx - mn) degrees, no wrap.
            const double hue = 60.0 * (g - b) / (mx - mn) * 256.0 / 360.0;
            const auto lin = [](double c) {
                c /= 255.0;
                return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
            };
            const double Y = 0.2126729 * lin(r) + 0.7151522 * lin(g) + 0.0721750 * lin(b);
            const double fy = Y > std::pow(6.0 / 29.0, 3) ? std::cbrt(Y) : Y / (3 * std::pow(6.0 / 29.0, 2)) + 4.0 / 29.0;
            v[0].push_back(r);
            v[1].push_back(g);
            v[2].push_back(b);
            v[3].push_back(hue);
            v[4].push_back(255.0 * (mx - mn) / mx);
            v[5].push_back(mx);
            v[6].push_back(2.55 * (116.0 * fy - 16.0));
            v[7].push_back(std::round(0.299 * r + 0.587 * g + 0.114 * b));
        }
    }
    const auto got = color_stats(img, m);
    for (std::size_t c = 0; c < 8; ++c) {
        const MomentOracle want = moments(v[c]);
        SCOPED_TRACE(color_channel_names()[c]);
        EXPECT_NEAR(got[c].variance, want.variance, 1e-9 * std::max(1.0, want.variance));
        EXPECT_NEAR(got[c].entropy, want.entropy, 1e-9);
        EXPECT_NEAR(got[c].skewness, want.skewness, 1e-9 * std::max(1.0, std::abs(want.skewness)));
    }
}

TEST(ColorStats, SmallRandomMasksMatchTwoPassMoments) {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 30; ++t) {
        const RasterImage img = random_image(rng, 8, 8, 3);
        const BinaryMask m = random_mask(rng, 8, 8, 0.6);
        if (m.count() < 2) {
            continue;
        }
        std::vector<double> red;
        for (int y = 0; y < 8; ++y) {
            for (int x = 0; x < 8; ++x) {
                if (m.get(x, y)) {
                    red.push_back(img.at(x, y, 0));
                }
            }
        }
        const MomentOracle want = moments(red);
        const ChannelStats got = color_stats(img, m)[0];
        EXPECT_NEAR(got.variance, want.variance, 1e-9 * std::max(1.0, want.variance));
        EXPECT_NEAR(got.skewness, want.skewness, 1e-9 * std::max(1.0, std::abs(want.skewness)));
    }
}

TEST(ColorStats, HueIsCircular) {
    // Hues just either side of red: a linear treatment would see a huge spread.
    RasterImage img(2, 1, 3);
    img.at(0, 0, 0) = 200;
    img.at(0, 0, 1) = 20;
    img.at(0, 0, 2) = 10;  // hue slightly above 0
    img.at(1, 0, 0) = 200;
    img.at(1, 0, 1) = 10;
    img.at(1, 0, 2) = 20;  // hue slightly below 256
    const auto s = color_stats(img, BinaryMask(2, 1, true));
    EXPECT_LT(s[static_cast<std::size_t>(ColorChannel::H)].variance, 100.0);
    EXPECT_THROW(color_stats(img, BinaryMask(2, 1)), EmptyMaskError);
}

TEST(FeatureRegistry, CanonicalLayout) {
    const auto& names = feature_names();
    EXPECT_EQ(names.size(), 73u);
    EXPECT_EQ(kGlcmFeatureCount + kCoarsenessFeatureCount, 46u);
    EXPECT_EQ(names[0], "asymmetry");
    EXPECT_EQ(names[1], "compactness");
    EXPECT_EQ(names[2], "ulnar_variance");
    EXPECT_EQ(names[3], "glcm_mean_0");
    EXPECT_EQ(names[3 + 11], "glcm_mean_45");
    EXPECT_EQ(names[46], "glcm_max_probability_135");
    EXPECT_EQ(names[47], "coarseness_mean");
    EXPECT_EQ(names[48], "coarseness_std");
    EXPECT_EQ(names[49], "r_variance");
    EXPECT_EQ(names[57], "r_entropy");
    EXPECT_EQ(names[72], "gray_skewness");
    std::set<std::string> unique(names.begin(), names.end());
    EXPECT_EQ(unique.size(), 73u);
    EXPECT_EQ(feature_index("coarseness_std"), 48u);
    EXPECT_THROW(feature_index("diameter"), std::out_of_range);
    const auto offsets = glcm_offsets(1);
    EXPECT_EQ(offsets[0], (PixelPos{1, 0}));
    EXPECT_EQ(offsets[1], (PixelPos{1, 1}));
    EXPECT_EQ(offsets[2], (PixelPos{0, 1}));
    EXPECT_EQ(offsets[3], (PixelPos{-1, 1}));
}

TEST(AssembleFeatures, SeventyThreeFiniteAndDeterministic) {
    for (bool malignant : {false, true}) {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const SyntheticLesion s = make_synthetic_lesion(malignant, seed);
            const FeatureResult a = assemble_features(s.image, s.truth);
            const FeatureResult b = assemble_features(s.image, s.truth);
            EXPECT_EQ(a.features.values.size(), 73u);
            for (double v : a.features.values) {
                EXPECT_TRUE(std::isfinite(v));
            }
            EXPECT_EQ(a.features, b.features);
            EXPECT_EQ(a.features.get("compactness"), compactness(s.truth));
            EXPECT_EQ(a.measurements.diameter_px, feret_diameter(s.truth));
            EXPECT_FALSE(a.measurements.diameter_mm.has_value());
        }
    }
}

TEST(AssembleFeatures, BlockOrderMatchesConstituents) {
    const SyntheticLesion s = make_synthetic_lesion(true, 9);
    FeatureConfig cfg;
    cfg.mm_per_pixel = 0.05;
    const FeatureResult r = assemble_features(s.image, s.truth, cfg);
    const RasterImage gray = to_grayscale(s.image);
    const auto offsets = glcm_offsets(1);
    for (std::size_t o = 0; o < 4; ++o) {
        const auto stats = glcm_stats(glcm(gray, s.truth, offsets[o], 16)).values();
        for (std::size_t k = 0; k < 11; ++k) {
            EXPECT_EQ(r.features[kGlcmFeatureBegin + o * 11 + k], stats[k]);
        }
    }
    const Coarseness c = coarseness(gray, s.truth);
    EXPECT_EQ(r.features[kCoarsenessFeatureBegin], c.mean);
    EXPECT_EQ(r.features[kCoarsenessFeatureBegin + 1], c.std);
    const auto color = color_stats(s.image, s.truth);
    for (std::size_t ch = 0; ch < 8; ++ch) {
        EXPECT_EQ(r.features[kColorFeatureBegin + ch], color[ch].variance);
        EXPECT_EQ(r.features[kColorFeatureBegin + 8 + ch], color[ch].entropy);
        EXPECT_EQ(r.features[kColorFeatureBegin + 16 + ch], color[ch].skewness);
    }
    ASSERT_TRUE(r.measurements.diameter_mm.has_value());
    EXPECT_DOUBLE_EQ(*r.measurements.diameter_mm, 0.05 * r.measurements.diameter_px);
}

TEST(AssembleFeatures, SmallMaskPropagatesError) {
    const SyntheticLesion s = make_synthetic_lesion(false, 4);
    EXPECT_THROW(assemble_features(s.image, rect_mask(128, 128, 60, 60, 70, 70)), InsufficientSupport);
    EXPECT_THROW(assemble_features(s.image, BinaryMask(128, 128)), EmptyMaskError);
}

TEST(FeatureCsv, RoundTripIsExact) {
    std::vector<FeatureRow> rows;
    for (std::uint64_t seed : {5u, 6u}) {
        const SyntheticLesion s = make_synthetic_lesion(seed % 2 == 1, seed);
        rows.push_back({"case_" + std::to_string(seed), assemble_features(s.image, s.truth).features});
    }
    std::stringstream buf;
    write_features_csv(buf, rows);
    const std::string header = buf.str().substr(0, buf.str().find('\n'));
    EXPECT_EQ(header.rfind("id,asymmetry,compactness,ulnar_variance,glcm_mean_0", 0), 0u);
    const auto back = read_features_csv(buf);
    ASSERT_EQ(back.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(back[i].id, rows[i].id);
        EXPECT_EQ(back[i].features, rows[i].features);
    }
}
