#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "../test_support.hpp"
#include "lesion/error.hpp"
#include "lesion/morphology.hpp"
#include "lesion/preprocess.hpp"

using namespace lesion;

namespace {

RasterImage convolve_oracle(const RasterImage& img) {
    static const int k[3][3] = {{0, -1, 0}, {-1, 5, -1}, {0, -1, 0}};
    RasterImage out(img.width(), img.height(), img.channels());
    for (int c = 0; c < img.channels(); ++c) {
        for (int y = 0; y < img.height(); ++y) {
            for (int x = 0; x < img.width(); ++x) {
                int acc = 0;
                for (int j = -1; j <= 1; ++j) {
                    for (int i = -1; i <= 1; ++i) {
                        const int sx = std::clamp(x + i, 0, img.width() - 1);
                        const int sy = std::clamp(y + j, 0, img.height() - 1);
                        acc += k[j + 1][i + 1] * img.at(sx, sy, c);
                    }
                }
                out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(acc, 0, 255));
            }
        }
    }
    return out;
}

RasterImage hair_line_image() {
    RasterImage img(15, 15, 3, 200);
    for (int x = 0; x < 15; ++x) {
        for (int c = 0; c < 3; ++c) {
            img.at(x, 7, c) = 0;
        }
    }
    return img;
}

}  // namespace

TEST(Sharpen, ConstantUnchanged) {
    const RasterImage img(6, 5, 3, 123);
    EXPECT_EQ(sharpen(img), img);
}

TEST(Sharpen, ImpulseClamps) {
    RasterImage img(3, 3, 1, 0);
    img.at(1, 1) = 255;
    const RasterImage s = sharpen(img);
    EXPECT_EQ(s.at(1, 1), 255);
    EXPECT_EQ(s.at(0, 1), 0);
    EXPECT_EQ(s.at(2, 1), 0);
    EXPECT_EQ(s.at(1, 0), 0);
    EXPECT_EQ(s.at(1, 2), 0);
}

TEST(Sharpen, StepEdgeOvershoot) {
    RasterImage img(6, 4, 1, 0);
    for (int y = 0; y < 4; ++y) {
        for (int x = 3; x < 6; ++x) {
            img.at(x, y) = 100;
        }
    }
    const RasterImage s = sharpen(img);
    EXPECT_EQ(s, convolve_oracle(img));
    for (int y = 0; y < 4; ++y) {
        EXPECT_EQ(s.at(2, y), 0);
        EXPECT_EQ(s.at(3, y), 200);
    }
}

TEST(Sharpen, RandomMatchesConvolutionOracle) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        const RasterImage img = lesion::testing::random_image(rng, 9, 7, t % 2 == 0 ? 1 : 3);
        EXPECT_EQ(sharpen(img), convolve_oracle(img));
    }
}

TEST(Sharpen, ChangesOnlyNearDiscontinuities) {
    RasterImage img(20, 20, 1, 50);
    for (int y = 5; y < 12; ++y) {
        for (int x = 6; x < 14; ++x) {
            img.at(x, y) = 90;
        }
    }
    const RasterImage s = sharpen(img);
    for (int y = 0; y < 20; ++y) {
        for (int x = 0; x < 20; ++x) {
            bool near_edge = false;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int sx = std::clamp(x + dx, 0, 19);
                    const int sy = std::clamp(y + dy, 0, 19);
                    near_edge = near_edge || img.at(sx, sy) != img.at(x, y);
                }
            }
            if (!near_edge) {
                EXPECT_EQ(s.at(x, y), img.at(x, y));
            }
        }
    }
}

TEST(RemoveHair, HairlessUniformIsIdentity) {
    const RasterImage img(20, 20, 3, 180);
    const auto r = remove_hair(img, PreprocessConfig{});
    EXPECT_EQ(r.image, img);
    EXPECT_TRUE(r.hair_mask.empty());
}

TEST(RemoveHair, DarkLineIsInpainted) {
    const RasterImage img = hair_line_image();
    const auto r = remove_hair(img, PreprocessConfig{});
    for (int x = 0; x < 15; ++x) {
        EXPECT_TRUE(r.hair_mask.get(x, 7));
        for (int c = 0; c < 3; ++c) {
            EXPECT_NEAR(r.image.at(x, 7, c), 200, 2);
        }
    }
    // Closing with vertical and diagonal lines raises exactly row 7; the mask is that row dilated by disk 1.
    BinaryMask expect(15, 15);
    for (int x = 0; x < 15; ++x) {
        expect.set(x, 7, true);
    }
    EXPECT_EQ(r.hair_mask, dilate(expect, StructuringElement::disk(1)));
}

TEST(RemoveHair, DisabledThresholdLeavesImage) {
    PreprocessConfig cfg;
    cfg.hair_threshold = 254;
    const RasterImage img = hair_line_image();
    const auto r = remove_hair(img, cfg);
    EXPECT_TRUE(r.hair_mask.empty());
    EXPECT_EQ(r.image, img);
}

TEST(RemoveHair, BrightLineOnDarkIsIgnored) {
    RasterImage img(15, 15, 3, 30);
    for (int y = 0; y < 15; ++y) {
        for (int c = 0; c < 3; ++c) {
            img.at(6, y, c) = 250;
        }
    }
    EXPECT_TRUE(remove_hair(img, PreprocessConfig{}).hair_mask.empty());
}

TEST(RemoveHair, OnlyMaskedPixelsChangeAndSecondPassShrinks) {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> pos(2, 37);
    for (int t = 0; t < 10; ++t) {
        RasterImage img(40, 40, 3, 190);
        for (auto& v : img.data()) {
            v = static_cast<std::uint8_t>(185 + rng() % 10);
        }
        const int row = pos(rng);
        const int col = pos(rng);
        for (int i = 0; i < 40; ++i) {
            for (int c = 0; c < 3; ++c) {
                img.at(i, row, c) = 20;
                img.at(col, i, c) = 25;
            }
        }
        const auto first = remove_hair(img, PreprocessConfig{});
        for (int y = 0; y < 40; ++y) {
            for (int x = 0; x < 40; ++x) {
                if (!first.hair_mask.get(x, y)) {
                    for (int c = 0; c < 3; ++c) {
                        EXPECT_EQ(first.image.at(x, y, c), img.at(x, y, c));
                    }
                }
            }
        }
        const auto second = remove_hair(first.image, PreprocessConfig{});
        EXPECT_LE(second.hair_mask.count(), first.hair_mask.count());
    }
}

TEST(RemoveHair, FullCoverageIsDegenerate) {
    RasterImage img(9, 9, 1, 200);
    for (int y = 0; y < 9; y += 2) {
        for (int x = 0; x < 9; ++x) {
            img.at(x, y) = 0;
        }
    }
    PreprocessConfig cfg;
    cfg.hair_angles = {0.0, 90.0};
    cfg.hair_line_length = 3;
    EXPECT_THROW(remove_hair(img, cfg), DegenerateHairMask);
}

TEST(PreprocessConfig, Validation) {
    PreprocessConfig cfg;
    cfg.hair_line_length = 8;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.hair_threshold = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.inpaint_radius = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Preprocess, OrderIsConfigurable) {
    const RasterImage img = hair_line_image();
    PreprocessConfig hair_first;
    PreprocessConfig sharpen_first;
    sharpen_first.sharpen_first = true;
    const RasterImage a = preprocess(img, hair_first);
    EXPECT_EQ(a, sharpen(remove_hair(img, hair_first).image));
    const RasterImage b = preprocess(img, sharpen_first);
    EXPECT_EQ(b, remove_hair(sharpen(img), sharpen_first).image);
}
