#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "../test_support.hpp"
#include "lesion/error.hpp"
#include "lesion/image_io.hpp"
#include "lesion/morphology.hpp"
#include "lesion/raster.hpp"

using namespace lesion;
using lesion::testing::random_mask;
using lesion::testing::rect_mask;

namespace {

bool subset(const BinaryMask& a, const BinaryMask& b) {
    for (std::size_t i = 0; i < a.pixel_count(); ++i) {
        if (a.get_index(i) && !b.get_index(i)) {
            return false;
        }
    }
    return true;
}

BinaryMask dilate_oracle(const BinaryMask& m, const StructuringElement& se) {
    BinaryMask out(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            for (const auto& o : se.offsets()) {
                if (m.get(std::clamp(x - o.x, 0, m.width() - 1), std::clamp(y - o.y, 0, m.height() - 1))) {
                    out.set(x, y, true);
                }
            }
        }
    }
    return out;
}

int neighbours8(const BinaryMask& m, int x, int y) {
    int n = 0;
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            if ((dx != 0 || dy != 0) && m.get_or_background(x + dx, y + dy)) {
                ++n;
            }
        }
    }
    return n;
}

}  // namespace

TEST(Grayscale, UniformWhite) {
    const RasterImage g = to_grayscale(RasterImage(3, 2, 3, 255));
    for (auto v : g.data()) {
        EXPECT_EQ(v, 255);
    }
}

TEST(Grayscale, UniformRed) {
    RasterImage img(2, 2, 3, 0);
    for (int y = 0; y < 2; ++y) {
        for (int x = 0; x < 2; ++x) {
            img.at(x, y, 0) = 255;
        }
    }
    const RasterImage g = to_grayscale(img);
    EXPECT_EQ(g.channels(), 1);
    EXPECT_EQ(g.at(0, 0), 76);
    EXPECT_EQ(g.at(1, 1), 76);
}

TEST(Grayscale, GreenPixel) {
    RasterImage img(2, 1, 3, 0);
    img.at(1, 0, 1) = 255;
    const RasterImage g = to_grayscale(img);
    EXPECT_EQ(g.at(0, 0), 0);
    EXPECT_EQ(g.at(1, 0), 150);
}

TEST(Grayscale, SingleChannelPassThrough) {
    std::mt19937_64 rng(1);
    const RasterImage img = lesion::testing::random_image(rng, 5, 4, 1);
    EXPECT_EQ(to_grayscale(img), img);
}

TEST(RasterImage, RejectsBadShape) {
    EXPECT_ANY_THROW(RasterImage(0, 3, 1));
    EXPECT_ANY_THROW(RasterImage(3, 3, 2));
    EXPECT_ANY_THROW(RasterImage(2, 2, 1, std::vector<std::uint8_t>(3)));
}

TEST(BinaryMask, CountTracksEdits) {
    BinaryMask m(4, 4);
    m.set(1, 1, true);
    m.set(1, 1, true);
    m.set(2, 3, true);
    EXPECT_EQ(m.count(), 2u);
    m.set(1, 1, false);
    EXPECT_EQ(m.count(), 1u);
}

TEST(Dilate, EmptyStaysEmpty) {
    EXPECT_TRUE(dilate(BinaryMask(7, 7), StructuringElement::disk(2)).empty());
}

TEST(Dilate, SinglePixelDiskOneIsPlus) {
    BinaryMask m(5, 5);
    m.set(2, 2, true);
    const BinaryMask d = dilate(m, StructuringElement::disk(1));
    EXPECT_EQ(d.count(), 5u);
    for (auto [x, y] : {std::pair{2, 2}, {1, 2}, {3, 2}, {2, 1}, {2, 3}}) {
        EXPECT_TRUE(d.get(x, y));
    }
}

TEST(Dilate, Block3x3MatchesSweepOracle) {
    const auto se = StructuringElement::disk(1);
    const BinaryMask full(3, 3, true);
    EXPECT_EQ(dilate(full, se), dilate_oracle(full, se));
    const BinaryMask centred = rect_mask(7, 7, 2, 2, 4, 4);
    const BinaryMask d = dilate(centred, se);
    EXPECT_EQ(d, dilate_oracle(centred, se));
    EXPECT_EQ(d.count(), 21u);  // 5x5 minus the four corners
}

TEST(Dilate, RandomMatchesSweepOracle) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        const BinaryMask m = random_mask(rng, 9, 7, 0.15);
        for (const auto& se : {StructuringElement::disk(1), StructuringElement::disk(2), StructuringElement::square(1),
                               StructuringElement::line(5, 45.0)}) {
            EXPECT_EQ(dilate(m, se), dilate_oracle(m, se));
        }
    }
}

TEST(Dilate, ExtensiveMonotoneTranslationInvariant) {
    std::mt19937_64 rng(4);
    const auto se = StructuringElement::disk(2);
    for (int t = 0; t < 40; ++t) {
        const BinaryMask a = random_mask(rng, 20, 20, 0.1);
        const BinaryMask b = mask_or(a, random_mask(rng, 20, 20, 0.1));
        EXPECT_TRUE(subset(a, dilate(a, se)));
        EXPECT_TRUE(subset(dilate(a, se), dilate(b, se)));
        EXPECT_GE(area(dilate(a, se)), area(a));

        BinaryMask small(20, 20);
        BinaryMask shifted(20, 20);
        for (int y = 6; y < 12; ++y) {
            for (int x = 6; x < 12; ++x) {
                small.set(x, y, a.get(x, y));
                shifted.set(x + 3, y + 2, a.get(x, y));
            }
        }
        const BinaryMask ds = dilate(small, se);
        const BinaryMask dt = dilate(shifted, se);
        for (int y = 0; y < 17; ++y) {
            for (int x = 0; x < 17; ++x) {
                EXPECT_EQ(ds.get(x, y), dt.get(x + 3, y + 2));
            }
        }
    }
}

TEST(RemoveSpurs, SolidBlockUnchanged) {
    const BinaryMask m = rect_mask(5, 5, 1, 1, 3, 3);
    EXPECT_EQ(remove_spurs(m, 1), m);
}

TEST(RemoveSpurs, LineLosesBothEnds) {
    const BinaryMask line = rect_mask(7, 3, 1, 1, 5, 1);
    const BinaryMask r = remove_spurs(line, 1);
    EXPECT_EQ(r, rect_mask(7, 3, 2, 1, 4, 1));
}

TEST(RemoveSpurs, EmptyStaysEmpty) {
    EXPECT_TRUE(remove_spurs(BinaryMask(4, 4), 3).empty());
    EXPECT_ANY_THROW(remove_spurs(BinaryMask(4, 4), 0));
}

TEST(RemoveSpurs, OneIterationMatchesNeighbourOracle) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        const BinaryMask m = random_mask(rng, 10, 8, 0.35);
        BinaryMask expect = m;
        for (int y = 0; y < m.height(); ++y) {
            for (int x = 0; x < m.width(); ++x) {
                if (m.get(x, y) && neighbours8(m, x, y) == 1) {
                    expect.set(x, y, false);
                }
            }
        }
        EXPECT_EQ(remove_spurs(m, 1), expect);
    }
}

TEST(RemoveSpurs, AntiExtensiveAndFixedPoint) {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 40; ++t) {
        const BinaryMask m = random_mask(rng, 16, 16, 0.3);
        const BinaryMask r = remove_spurs_to_fixed_point(m);
        EXPECT_TRUE(subset(r, m));
        EXPECT_EQ(remove_spurs(r, 1), r);
    }
}

TEST(MaskOps, SetSemantics) {
    BinaryMask a(3, 1), b(3, 1);
    a.set(0, 0, true);
    a.set(1, 0, true);
    b.set(1, 0, true);
    b.set(2, 0, true);
    const BinaryMask both = mask_and(a, b);
    EXPECT_EQ(both.count(), 1u);
    EXPECT_TRUE(both.get(1, 0));
    const BinaryMask diff = mask_subtract(a, b);
    EXPECT_EQ(diff.count(), 1u);
    EXPECT_TRUE(diff.get(0, 0));
    EXPECT_TRUE(mask_and(a, mask_complement(a)).empty());
    EXPECT_EQ(mask_subtract(a, BinaryMask(3, 1)), a);
}

TEST(MaskOps, DimensionMismatchThrows) {
    EXPECT_THROW(mask_and(BinaryMask(3, 3), BinaryMask(3, 4)), DimensionMismatch);
    EXPECT_THROW(mask_subtract(BinaryMask(3, 3), BinaryMask(4, 3)), DimensionMismatch);
}

TEST(MaskOps, SubtractIsDisjointFromSubtrahend) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; ++t) {
        const BinaryMask a = random_mask(rng, 12, 9);
        const BinaryMask b = random_mask(rng, 12, 9);
        EXPECT_TRUE(mask_and(mask_subtract(a, b), b).empty());
    }
}

TEST(LargestComponent, KeepsBiggerBlob) {
    BinaryMask m = rect_mask(12, 6, 0, 0, 4, 1);  // area 10
    m.set(8, 4, true);
    m.set(9, 4, true);
    m.set(10, 4, true);
    const BinaryMask r = largest_component(m, 8);
    EXPECT_EQ(r, rect_mask(12, 6, 0, 0, 4, 1));
}

TEST(LargestComponent, SingleBlobUnchangedAndTieBreak) {
    const BinaryMask blob = rect_mask(6, 6, 1, 1, 3, 2);
    EXPECT_EQ(largest_component(blob, 4), blob);
    BinaryMask tie(6, 6);
    tie.set(4, 0, true);
    tie.set(5, 0, true);
    tie.set(0, 3, true);
    tie.set(1, 3, true);
    const BinaryMask r = largest_component(tie, 4);
    EXPECT_TRUE(r.get(4, 0));
    EXPECT_FALSE(r.get(0, 3));
    EXPECT_TRUE(largest_component(BinaryMask(4, 4), 8).empty());
}

TEST(LargestComponent, NeverGrows) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 30; ++t) {
        const BinaryMask m = random_mask(rng, 15, 15, 0.4);
        const BinaryMask r = largest_component(m, 4);
        EXPECT_LE(area(r), area(m));
        EXPECT_TRUE(subset(r, m));
    }
}

TEST(Measures, ThreeByThreeBlock) {
    const BinaryMask m = rect_mask(3, 3, 0, 0, 2, 2);
    EXPECT_EQ(area(m), 9u);
    EXPECT_EQ(perimeter(m), 8u);
    EXPECT_EQ(centroid(m), (Point2{1.0, 1.0}));
}

TEST(Measures, SinglePixelAndTenBlock) {
    BinaryMask one(3, 3);
    one.set(1, 1, true);
    EXPECT_EQ(area(one), 1u);
    EXPECT_EQ(perimeter(one), 1u);

    const BinaryMask ten = rect_mask(14, 14, 2, 2, 11, 11);
    std::size_t boundary = 0;
    for (int y = 0; y < 14; ++y) {
        for (int x = 0; x < 14; ++x) {
            if (ten.get(x, y) && (!ten.get_or_background(x - 1, y) || !ten.get_or_background(x + 1, y) ||
                                  !ten.get_or_background(x, y - 1) || !ten.get_or_background(x, y + 1))) {
                ++boundary;
            }
        }
    }
    EXPECT_EQ(boundary, 36u);
    EXPECT_EQ(perimeter(ten), boundary);
}

TEST(Measures, EmptyMaskErrors) {
    EXPECT_THROW(perimeter(BinaryMask(3, 3)), EmptyMaskError);
    EXPECT_THROW(centroid(BinaryMask(3, 3)), EmptyMaskError);
    EXPECT_EQ(area(BinaryMask(3, 3)), 0u);
}

TEST(FillHoles, FillsEnclosedBackground) {
    BinaryMask ring = rect_mask(7, 7, 1, 1, 5, 5);
    ring.set(3, 3, false);
    EXPECT_EQ(fill_holes(ring), rect_mask(7, 7, 1, 1, 5, 5));
}

TEST(Purity, RepeatedCallsBitIdentical) {
    std::mt19937_64 rng(9);
    const BinaryMask m = random_mask(rng, 20, 20, 0.3);
    EXPECT_EQ(dilate(m, StructuringElement::disk(2)), dilate(m, StructuringElement::disk(2)));
    EXPECT_EQ(remove_spurs_to_fixed_point(m), remove_spurs_to_fixed_point(m));
    EXPECT_EQ(largest_component(m, 8), largest_component(m, 8));
}

TEST(ImageIo, MaskPngRoundTripIsBitExact) {
    std::mt19937_64 rng(10);
    const auto dir = std::filesystem::temp_directory_path() / "lesion_io_test";
    std::filesystem::create_directories(dir);
    const BinaryMask m = random_mask(rng, 31, 17);
    save_mask(m, dir / "m.png");
    EXPECT_EQ(load_mask(dir / "m.png"), m);
    const RasterImage rgb = lesion::testing::random_image(rng, 13, 11, 3);
    save_image(rgb, dir / "rgb.png");
    EXPECT_EQ(load_image(dir / "rgb.png"), rgb);
    save_image(rgb, dir / "rgb.bmp");
    EXPECT_EQ(load_image(dir / "rgb.bmp"), rgb);
    const RasterImage png_mask = load_image(dir / "m.png");
    EXPECT_EQ(png_mask.channels(), 1);
    for (std::size_t i = 0; i < m.pixel_count(); ++i) {
        EXPECT_EQ(png_mask.data()[i], m.get_index(i) ? 255 : 0);
    }
    std::filesystem::remove_all(dir);
}

TEST(ImageIo, UnknownFormatIsDataError) {
    const auto p = std::filesystem::temp_directory_path() / "lesion_not_an_image.png";
    {
        std::FILE* f = std::fopen(p.c_str(), "wb");
        std::fputs("hello", f);
        std::fclose(f);
    }
    EXPECT_THROW(load_image(p), DataError);
    std::filesystem::remove(p);
}
