#include "lesion/features.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lesion/color_features.hpp"
#include "lesion/error.hpp"
#include "lesion/shape_features.hpp"

namespace lesion {

namespace {

constexpr std::array<const char*, kGlcmOffsetCount> kAngleNames = {"0", "45", "90", "135"};

std::array<std::string, kFeatureCount> build_names() {
    std::array<std::string, kFeatureCount> n;
    std::size_t i = 0;
    n[i++] = "asymmetry";
    n[i++] = "compactness";
    n[i++] = "ulnar_variance";
    for (const char* angle : kAngleNames) {
        for (const char* stat : GlcmStats::names()) {
            n[i++] = std::string("glcm_") + stat + "_" + angle;
        }
    }
    n[i++] = "coarseness_mean";
    n[i++] = "coarseness_std";
    for (const char* stat : {"variance", "entropy", "skewness"}) {
        for (const char* ch : color_channel_names()) {
            n[i++] = std::string(ch) + "_" + stat;
        }
    }
    return n;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

}  // namespace

const std::array<std::string, kFeatureCount>& feature_names() {
    static const auto names = build_names();
    return names;
}

std::size_t feature_index(std::string_view name) {
    const auto& names = feature_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) {
            return i;
        }
    }
    throw std::out_of_range("unknown feature: " + std::string(name));
}

std::uint64_t feature_registry_hash() {
    std::uint64_t h = 14695981039346656037ULL;
    for (const auto& name : feature_names()) {
        for (char c : name) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ULL;
        }
        h ^= static_cast<unsigned char>(',');
        h *= 1099511628211ULL;
    }
    return h;
}

std::array<PixelPos, kGlcmOffsetCount> glcm_offsets(int distance) {
    return {PixelPos{distance, 0}, PixelPos{distance, distance}, PixelPos{0, distance}, PixelPos{-distance, distance}};
}

void FeatureConfig::validate() const {
    if (glcm_levels < 2 || glcm_levels > 256) {
        throw std::invalid_argument("glcm_levels must be in [2, 256]");
    }
    if (glcm_distance < 1) {
        throw std::invalid_argument("glcm_distance must be >= 1");
    }
    if (mm_per_pixel && !(*mm_per_pixel > 0.0)) {
        throw std::invalid_argument("mm_per_pixel must be > 0");
    }
}

FeatureResult assemble_features(const RasterImage& rgb, const BinaryMask& m, const FeatureConfig& cfg) {
    cfg.validate();
    if (rgb.channels() != 3) {
        throw std::invalid_argument("assemble_features expects an RGB image");
    }
    if (rgb.width() != m.width() || rgb.height() != m.height()) {
        throw DimensionMismatch("assemble_features: image and mask dimensions differ");
    }
    if (m.empty()) {
        throw EmptyMaskError("assemble_features: empty mask");
    }
    FeatureResult r;
    auto& v = r.features.values;
    v[0] = asymmetry(m);
    v[1] = compactness(m);
    v[2] = radial_variance(m);

    const RasterImage gray = to_grayscale(rgb);
    std::size_t i = kGlcmFeatureBegin;
    for (const PixelPos& off : glcm_offsets(cfg.glcm_distance)) {
        for (double s : glcm_stats(glcm(gray, m, off, cfg.glcm_levels)).values()) {
            v[i++] = s;
        }
    }
    const Coarseness c = coarseness(gray, m);
    v[kCoarsenessFeatureBegin] = c.mean;
    v[kCoarsenessFeatureBegin + 1] = c.std;

    const auto colors = color_stats(rgb, m);
    for (std::size_t ch = 0; ch < kColorChannelCount; ++ch) {
        v[kColorFeatureBegin + ch] = colors[ch].variance;
        v[kColorFeatureBegin + kColorChannelCount + ch] = colors[ch].entropy;
        v[kColorFeatureBegin + 2 * kColorChannelCount + ch] = colors[ch].skewness;
    }
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
        if (!std::isfinite(v[k])) {
            throw ProcessingError("non-finite feature " + feature_names()[k]);
        }
    }

    r.measurements.diameter_px = feret_diameter(m);
    if (cfg.mm_per_pixel) {
        r.measurements.diameter_mm = r.measurements.diameter_px * *cfg.mm_per_pixel;
    }
    return r;
}

void write_features_csv(std::ostream& out, const std::vector<FeatureRow>& rows) {
    out << "id";
    for (const auto& name : feature_names()) {
        out << ',' << name;
    }
    out << '\n';
    for (const auto& row : rows) {
        out << row.id;
        for (double v : row.features.values) {
            out << ',' << format_double(v);
        }
        out << '\n';
    }
}

std::vector<FeatureRow> read_features_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("feature CSV is empty");
    }
    const auto header = split_csv_line(line);
    if (header.size() != kFeatureCount + 1 || header[0] != "id") {
        throw DataError("feature CSV header has the wrong arity");
    }
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        if (header[i + 1] != feature_names()[i]) {
            throw DataError("feature CSV column " + header[i + 1] + " does not match " + feature_names()[i]);
        }
    }
    std::vector<FeatureRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != kFeatureCount + 1) {
            throw DataError("feature CSV row for '" + (cells.empty() ? std::string() : cells[0]) + "' has wrong arity");
        }
        FeatureRow row;
        row.id = cells[0];
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            try {
                row.features.values[i] = std::stod(cells[i + 1]);
            } catch (const std::exception&) {
                throw DataError("feature CSV: bad number '" + cells[i + 1] + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace lesion
