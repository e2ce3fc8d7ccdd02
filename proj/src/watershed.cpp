#include "lesion/watershed.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "lesion/error.hpp"
#include "lesion/filters.hpp"
#include "lesion/morphology.hpp"

namespace lesion {

namespace {

constexpr std::array<PixelPos, 8> kOrder8{{{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}};
constexpr std::array<PixelPos, 4> kOrder4{{{0, -1}, {-1, 0}, {1, 0}, {0, 1}}};

constexpr int kUnvisited = -1;

// Erodes with the largest radius <= max_radius that leaves something behind.
BinaryMask erode_nonempty(const BinaryMask& m, int max_radius) {
    for (int r = max_radius; r >= 1; --r) {
        BinaryMask e = erode(m, StructuringElement::disk(r));
        if (!e.empty()) {
            return e;
        }
    }
    return m;
}

}  // namespace

void WatershedConfig::validate() const {
    if (!(gaussian_sigma > 0.0)) {
        throw std::invalid_argument("watershed gaussian_sigma must be > 0");
    }
    if (marker_erosion < 1) {
        throw std::invalid_argument("watershed marker_erosion must be >= 1");
    }
    if (connectivity != 4 && connectivity != 8) {
        throw std::invalid_argument("watershed connectivity must be 4 or 8");
    }
}

std::vector<int> flood_from_markers(std::span<const int> levels, std::span<const int> markers, int width,
                                    int height, int connectivity) {
    const std::size_t n = static_cast<std::size_t>(width) * height;
    if (levels.size() != n || markers.size() != n) {
        throw DimensionMismatch("flood_from_markers: levels/markers do not match width*height");
    }
    if (connectivity != 4 && connectivity != 8) {
        throw std::invalid_argument("flood_from_markers: connectivity must be 4 or 8");
    }
    const std::span<const PixelPos> nbrs =
        connectivity == 8 ? std::span<const PixelPos>(kOrder8) : std::span<const PixelPos>(kOrder4);

    int max_level = 0;
    for (int v : levels) {
        if (v < 0) {
            throw std::invalid_argument("flood_from_markers: levels must be non-negative");
        }
        max_level = std::max(max_level, v);
    }

    std::vector<int> labels(n, kUnvisited);
    std::vector<std::uint8_t> queued(n, 0);
    std::vector<std::deque<int>> buckets(static_cast<std::size_t>(max_level) + 1);
    int current = 0;

    auto push_neighbours = [&](int idx, int floor_level) {
        const int x = idx % width;
        const int y = idx / width;
        for (const auto& d : nbrs) {
            const int nx = x + d.x;
            const int ny = y + d.y;
            if (nx < 0 || ny < 0 || nx >= width || ny >= height) {
                continue;
            }
            const int ni = ny * width + nx;
            if (labels[static_cast<std::size_t>(ni)] != kUnvisited || queued[static_cast<std::size_t>(ni)]) {
                continue;
            }
            queued[static_cast<std::size_t>(ni)] = 1;
            const int prio = std::max(levels[static_cast<std::size_t>(ni)], floor_level);
            buckets[static_cast<std::size_t>(prio)].push_back(ni);
        }
    };

    for (std::size_t i = 0; i < n; ++i) {
        if (markers[i] > 0) {
            labels[i] = markers[i];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (markers[i] > 0) {
            push_neighbours(static_cast<int>(i), 0);
        }
    }

    while (true) {
        while (current <= max_level && buckets[static_cast<std::size_t>(current)].empty()) {
            ++current;
        }
        if (current > max_level) {
            break;
        }
        const int idx = buckets[static_cast<std::size_t>(current)].front();
        buckets[static_cast<std::size_t>(current)].pop_front();

        const int x = idx % width;
        const int y = idx / width;
        int label = kUnvisited;
        bool conflict = false;
        for (const auto& d : nbrs) {
            const int nx = x + d.x;
            const int ny = y + d.y;
            if (nx < 0 || ny < 0 || nx >= width || ny >= height) {
                continue;
            }
            const int l = labels[static_cast<std::size_t>(ny * width + nx)];
            if (l <= 0) {
                continue;
            }
            if (label == kUnvisited) {
                label = l;
            } else if (l != label) {
                conflict = true;
            }
        }
        if (conflict || label == kUnvisited) {
            labels[static_cast<std::size_t>(idx)] = kDivideLabel;
            continue;
        }
        labels[static_cast<std::size_t>(idx)] = label;
        push_neighbours(idx, current);
    }

    for (int& l : labels) {
        if (l == kUnvisited) {
            l = kDivideLabel;
        }
    }
    return labels;
}

BinaryMask otsu_dark_region(const RasterImage& gray, double sigma) {
    if (gray.channels() != 1) {
        throw std::invalid_argument("otsu_dark_region expects a single-channel image");
    }
    const RasterImage smooth = field_to_image(gaussian_blur(to_field(gray), sigma));
    const int t = otsu_threshold(smooth);
    if (t < 0) {
        throw NoLesionFound("no dark region: image intensity is uniform");
    }
    BinaryMask dark = largest_component(threshold_at_most(smooth, t), 8);
    if (dark.empty()) {
        throw NoLesionFound("no dark region below the Otsu threshold");
    }
    return dark;
}

WatershedStages watershed_segment_detailed(const RasterImage& gray, const WatershedConfig& cfg) {
    cfg.validate();
    if (gray.channels() != 1) {
        throw std::invalid_argument("watershed_segment expects a single-channel image");
    }
    const int w = gray.width();
    const int h = gray.height();

    const ScalarField grad = gradient_magnitude(gaussian_blur(to_field(gray), cfg.gaussian_sigma));
    const double gmax = *std::max_element(grad.values.begin(), grad.values.end());
    WatershedStages st{{}, {}, {}, BinaryMask(w, h)};
    st.levels.resize(grad.values.size(), 0);
    if (gmax > 0.0) {
        for (std::size_t i = 0; i < grad.values.size(); ++i) {
            st.levels[i] = static_cast<int>(std::lround(255.0 * grad.values[i] / gmax));
        }
    }

    const BinaryMask dark = otsu_dark_region(gray, cfg.gaussian_sigma);
    const BinaryMask inner = erode_nonempty(dark, cfg.marker_erosion);
    BinaryMask outer = erode_nonempty(mask_complement(dark), cfg.marker_erosion);
    for (int x = 0; x < w; ++x) {
        for (int y : {0, h - 1}) {
            if (!dark.get(x, y)) {
                outer.set(x, y, true);
            }
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x : {0, w - 1}) {
            if (!dark.get(x, y)) {
                outer.set(x, y, true);
            }
        }
    }
    st.markers.assign(static_cast<std::size_t>(w) * h, 0);
    for (std::size_t i = 0; i < st.markers.size(); ++i) {
        if (inner.get_index(i)) {
            st.markers[i] = 1;
        } else if (outer.get_index(i)) {
            st.markers[i] = 2;
        }
    }

    st.labels = flood_from_markers(st.levels, st.markers, w, h, cfg.connectivity);
    BinaryMask basin(w, h);
    for (std::size_t i = 0; i < st.labels.size(); ++i) {
        if (st.labels[i] == 1) {
            basin.set_index(i, true);
        }
    }
    BinaryMask smooth = remove_spurs_to_fixed_point(dilate(basin, StructuringElement::disk(1)));
    st.mask = fill_holes(largest_component(smooth, 8));
    if (st.mask.empty()) {
        throw NoLesionFound("watershed produced an empty lesion basin");
    }
    return st;
}

BinaryMask watershed_segment(const RasterImage& gray, const WatershedConfig& cfg) {
    return watershed_segment_detailed(gray, cfg).mask;
}

}  // namespace lesion
