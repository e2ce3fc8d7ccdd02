#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lesion/raster.hpp"
#include "lesion/texture_features.hpp"

namespace lesion {

inline constexpr std::size_t kShapeFeatureCount = 3;
inline constexpr std::size_t kGlcmOffsetCount = 4;
inline constexpr std::size_t kGlcmFeatureCount = GlcmStats::kCount * kGlcmOffsetCount;
inline constexpr std::size_t kCoarsenessFeatureCount = 2;
inline constexpr std::size_t kColorFeatureCount = 24;
inline constexpr std::size_t kFeatureCount =
    kShapeFeatureCount + kGlcmFeatureCount + kCoarsenessFeatureCount + kColorFeatureCount;

inline constexpr std::size_t kGlcmFeatureBegin = kShapeFeatureCount;
inline constexpr std::size_t kCoarsenessFeatureBegin = kGlcmFeatureBegin + kGlcmFeatureCount;
inline constexpr std::size_t kColorFeatureBegin = kCoarsenessFeatureBegin + kCoarsenessFeatureCount;

/// Canonical feature names, in vector order.
const std::array<std::string, kFeatureCount>& feature_names();

/// Position of `name` in the canonical order; throws std::out_of_range for unknown names.
std::size_t feature_index(std::string_view name);

/// FNV-1a over the canonical names; model files record it to detect registry drift.
std::uint64_t feature_registry_hash();

/// GLCM offsets in canonical order, scaled by `distance`: (d,0), (d,d), (0,d), (-d,d).
std::array<PixelPos, kGlcmOffsetCount> glcm_offsets(int distance = 1);

struct FeatureVector {
    std::array<double, kFeatureCount> values{};

    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
    double get(std::string_view name) const { return values[feature_index(name)]; }
    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct LesionMeasurements {
    double diameter_px = 0.0;
    std::optional<double> diameter_mm;
};

struct FeatureConfig {
    int glcm_levels = 16;
    int glcm_distance = 1;
    /// Physical calibration; when set, diameter_mm is reported.
    std::optional<double> mm_per_pixel;

    void validate() const;
};

struct FeatureResult {
    FeatureVector features;
    LesionMeasurements measurements;
};

/// Shape, GLCM, coarseness and color features of the masked region of an RGB image.
FeatureResult assemble_features(const RasterImage& rgb, const BinaryMask& m, const FeatureConfig& cfg = {});

struct FeatureRow {
    std::string id;
    FeatureVector features;
};

/// CSV with header "id,<73 names>"; values printed round-trip exact.
void write_features_csv(std::ostream& out, const std::vector<FeatureRow>& rows);
/// Reads what write_features_csv produced. Throws DataError on a header or arity mismatch.
std::vector<FeatureRow> read_features_csv(std::istream& in);

}  // namespace lesion
