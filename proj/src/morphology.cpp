#include "lesion/morphology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numbers>
#include <stdexcept>

#include "lesion/error.hpp"

namespace lesion {

namespace {

constexpr std::array<PixelPos, 4> kN4{{{0, -1}, {-1, 0}, {1, 0}, {0, 1}}};
constexpr std::array<PixelPos, 8> kN8{{{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}};

void require_same_shape(const BinaryMask& a, const BinaryMask& b, const char* op) {
    if (!a.same_shape(b)) {
        throw DimensionMismatch(std::string(op) + ": incompatible masks (" + std::to_string(a.width()) + "x" +
                                std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                                std::to_string(b.height()) + ")");
    }
}

void require_gray(const RasterImage& img, const char* op) {
    if (img.channels() != 1) {
        throw std::invalid_argument(std::string(op) + " expects a single-channel image");
    }
}

int clampi(int v, int lo, int hi) { return std::min(std::max(v, lo), hi); }

template <typename Pred>
BinaryMask combine(const BinaryMask& a, const BinaryMask& b, Pred pred) {
    BinaryMask out(a.width(), a.height());
    for (std::size_t i = 0; i < a.pixel_count(); ++i) {
        if (pred(a.get_index(i), b.get_index(i))) {
            out.set_index(i, true);
        }
    }
    return out;
}

}  // namespace

StructuringElement::StructuringElement(SeShape shape, std::vector<PixelPos> offsets)
    : shape_(shape), offsets_(std::move(offsets)) {
    if (offsets_.empty()) {
        throw std::invalid_argument("structuring element must not be empty");
    }
}

StructuringElement StructuringElement::disk(int radius) {
    if (radius < 0) {
        throw std::invalid_argument("disk radius must be >= 0");
    }
    std::vector<PixelPos> off;
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            if (dx * dx + dy * dy <= radius * radius) {
                off.push_back({dx, dy});
            }
        }
    }
    return {SeShape::Disk, std::move(off)};
}

StructuringElement StructuringElement::square(int radius) {
    if (radius < 0) {
        throw std::invalid_argument("square radius must be >= 0");
    }
    std::vector<PixelPos> off;
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            off.push_back({dx, dy});
        }
    }
    return {SeShape::Square, std::move(off)};
}

StructuringElement StructuringElement::line(int length, double angle_deg) {
    if (length < 1 || length % 2 == 0) {
        throw std::invalid_argument("line length must be odd and positive");
    }
    const double rad = angle_deg * std::numbers::pi / 180.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    const int half = length / 2;
    std::vector<PixelPos> off;
    for (int t = -half; t <= half; ++t) {
        // Screen y grows downward, so a counter-clockwise angle flips the sine.
        PixelPos p{static_cast<int>(std::lround(t * c)), static_cast<int>(std::lround(-t * s))};
        if (std::find(off.begin(), off.end(), p) == off.end()) {
            off.push_back(p);
        }
    }
    return {SeShape::Line, std::move(off)};
}

BinaryMask dilate(const BinaryMask& m, const StructuringElement& se) {
    BinaryMask out(m.width(), m.height());
    if (m.empty()) {
        return out;
    }
    const int w = m.width();
    const int h = m.height();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (const auto& o : se.offsets()) {
                if (m.get(clampi(x - o.x, 0, w - 1), clampi(y - o.y, 0, h - 1))) {
                    out.set(x, y, true);
                    break;
                }
            }
        }
    }
    return out;
}

BinaryMask erode(const BinaryMask& m, const StructuringElement& se) {
    BinaryMask out(m.width(), m.height());
    const int w = m.width();
    const int h = m.height();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!m.get(x, y)) {
                continue;
            }
            bool keep = true;
            for (const auto& o : se.offsets()) {
                if (!m.get(clampi(x + o.x, 0, w - 1), clampi(y + o.y, 0, h - 1))) {
                    keep = false;
                    break;
                }
            }
            if (keep) {
                out.set(x, y, true);
            }
        }
    }
    return out;
}

namespace {

// One parallel spur pass; returns the number of deleted pixels.
std::size_t spur_pass(const BinaryMask& in, BinaryMask& out) {
    out = in;
    std::size_t removed = 0;
    for (int y = 0; y < in.height(); ++y) {
        for (int x = 0; x < in.width(); ++x) {
            if (!in.get(x, y)) {
                continue;
            }
            int n = 0;
            for (const auto& d : kN8) {
                n += in.get_or_background(x + d.x, y + d.y) ? 1 : 0;
            }
            if (n == 1) {
                out.set(x, y, false);
                ++removed;
            }
        }
    }
    return removed;
}

}  // namespace

BinaryMask remove_spurs(const BinaryMask& m, int iterations) {
    if (iterations < 1) {
        throw std::invalid_argument("remove_spurs: iterations must be >= 1");
    }
    BinaryMask cur = m;
    BinaryMask next = m;
    for (int it = 0; it < iterations; ++it) {
        if (spur_pass(cur, next) == 0) {
            break;
        }
        std::swap(cur, next);
    }
    return cur;
}

BinaryMask remove_spurs_to_fixed_point(const BinaryMask& m) {
    BinaryMask cur = m;
    BinaryMask next = m;
    while (spur_pass(cur, next) != 0) {
        std::swap(cur, next);
    }
    return cur;
}

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b) {
    require_same_shape(a, b, "mask_and");
    return combine(a, b, [](bool p, bool q) { return p && q; });
}

BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b) {
    require_same_shape(a, b, "mask_or");
    return combine(a, b, [](bool p, bool q) { return p || q; });
}

BinaryMask mask_subtract(const BinaryMask& a, const BinaryMask& b) {
    require_same_shape(a, b, "mask_subtract");
    return combine(a, b, [](bool p, bool q) { return p && !q; });
}

BinaryMask mask_complement(const BinaryMask& a) {
    BinaryMask out(a.width(), a.height());
    for (std::size_t i = 0; i < a.pixel_count(); ++i) {
        out.set_index(i, !a.get_index(i));
    }
    return out;
}

std::vector<int> label_components(const BinaryMask& m, int connectivity, int* count) {
    if (connectivity != 4 && connectivity != 8) {
        throw std::invalid_argument("connectivity must be 4 or 8");
    }
    const int w = m.width();
    const int h = m.height();
    std::vector<int> labels(m.pixel_count(), 0);
    int next = 0;
    std::deque<PixelPos> queue;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * w + x;
            if (!m.get_index(idx) || labels[idx] != 0) {
                continue;
            }
            ++next;
            labels[idx] = next;
            queue.push_back({x, y});
            while (!queue.empty()) {
                const PixelPos p = queue.front();
                queue.pop_front();
                auto visit = [&](const PixelPos& d) {
                    const int nx = p.x + d.x;
                    const int ny = p.y + d.y;
                    if (!m.contains(nx, ny)) {
                        return;
                    }
                    const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
                    if (m.get_index(ni) && labels[ni] == 0) {
                        labels[ni] = next;
                        queue.push_back({nx, ny});
                    }
                };
                if (connectivity == 4) {
                    std::for_each(kN4.begin(), kN4.end(), visit);
                } else {
                    std::for_each(kN8.begin(), kN8.end(), visit);
                }
            }
        }
    }
    if (count != nullptr) {
        *count = next;
    }
    return labels;
}

BinaryMask largest_component(const BinaryMask& m, int connectivity) {
    int n = 0;
    const auto labels = label_components(m, connectivity, &n);
    BinaryMask out(m.width(), m.height());
    if (n == 0) {
        return out;
    }
    std::vector<std::size_t> sizes(static_cast<std::size_t>(n) + 1, 0);
    for (int l : labels) {
        ++sizes[static_cast<std::size_t>(l)];
    }
    // Labels are assigned in row-major order of first pixel, so strict '>' keeps the earliest on ties.
    int best = 1;
    for (int l = 2; l <= n; ++l) {
        if (sizes[static_cast<std::size_t>(l)] > sizes[static_cast<std::size_t>(best)]) {
            best = l;
        }
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == best) {
            out.set_index(i, true);
        }
    }
    return out;
}

BinaryMask fill_holes(const BinaryMask& m) {
    const int w = m.width();
    const int h = m.height();
    std::vector<std::uint8_t> outside(m.pixel_count(), 0);
    std::deque<PixelPos> queue;
    auto seed = [&](int x, int y) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        if (!m.get_index(i) && !outside[i]) {
            outside[i] = 1;
            queue.push_back({x, y});
        }
    };
    for (int x = 0; x < w; ++x) {
        seed(x, 0);
        seed(x, h - 1);
    }
    for (int y = 0; y < h; ++y) {
        seed(0, y);
        seed(w - 1, y);
    }
    while (!queue.empty()) {
        const PixelPos p = queue.front();
        queue.pop_front();
        for (const auto& d : kN4) {
            const int nx = p.x + d.x;
            const int ny = p.y + d.y;
            if (m.contains(nx, ny)) {
                seed(nx, ny);
            }
        }
    }
    BinaryMask out(w, h);
    for (std::size_t i = 0; i < outside.size(); ++i) {
        if (!outside[i]) {
            out.set_index(i, true);
        }
    }
    return out;
}

std::size_t area(const BinaryMask& m) { return m.count(); }

std::vector<PixelPos> boundary_pixels(const BinaryMask& m) {
    std::vector<PixelPos> out;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (!m.get(x, y)) {
                continue;
            }
            for (const auto& d : kN4) {
                if (!m.get_or_background(x + d.x, y + d.y)) {
                    out.push_back({x, y});
                    break;
                }
            }
        }
    }
    return out;
}

std::size_t perimeter(const BinaryMask& m) {
    if (m.empty()) {
        throw EmptyMaskError("perimeter of an empty mask");
    }
    return boundary_pixels(m).size();
}

Point2 centroid(const BinaryMask& m) {
    if (m.empty()) {
        throw EmptyMaskError("centroid of an empty mask");
    }
    double sx = 0.0;
    double sy = 0.0;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (m.get(x, y)) {
                sx += x;
                sy += y;
            }
        }
    }
    const double n = static_cast<double>(m.count());
    return {sx / n, sy / n};
}

double traced_contour_length(const BinaryMask& m) {
    // Moore-neighbour tracing, clockwise on screen starting east.
    static constexpr std::array<PixelPos, 8> dirs{{{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};
    auto dir_index = [](int dx, int dy) {
        for (int k = 0; k < 8; ++k) {
            if (dirs[k].x == dx && dirs[k].y == dy) {
                return k;
            }
        }
        return -1;
    };

    int n = 0;
    const auto labels = label_components(m, 8, &n);
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(n) + 1, 0);
    double total = 0.0;
    const int w = m.width();
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < w; ++x) {
            const int lab = labels[static_cast<std::size_t>(y) * w + x];
            if (lab == 0 || seen[static_cast<std::size_t>(lab)]) {
                continue;
            }
            seen[static_cast<std::size_t>(lab)] = 1;

            const PixelPos start{x, y};
            // The west neighbour of the first pixel in raster order is background.
            const int start_back = 4;
            PixelPos cur = start;
            int back = start_back;
            double length = 0.0;
            const std::size_t guard = 4 * m.pixel_count() + 8;
            for (std::size_t step = 0; step < guard; ++step) {
                int found = -1;
                for (int k = 1; k <= 8; ++k) {
                    const int d = (back + k) % 8;
                    if (m.get_or_background(cur.x + dirs[d].x, cur.y + dirs[d].y)) {
                        found = d;
                        break;
                    }
                }
                if (found < 0) {
                    break;  // isolated pixel
                }
                const PixelPos next{cur.x + dirs[found].x, cur.y + dirs[found].y};
                const int prev = (found + 7) % 8;
                const PixelPos back_pos{cur.x + dirs[prev].x, cur.y + dirs[prev].y};
                length += (found % 2 == 0) ? 1.0 : std::numbers::sqrt2;
                cur = next;
                back = dir_index(back_pos.x - cur.x, back_pos.y - cur.y);
                if (cur == start && back == start_back) {
                    break;
                }
            }
            total += length;
        }
    }
    return total;
}

BoundingBox bounding_box(const BinaryMask& m) {
    if (m.empty()) {
        throw EmptyMaskError("bounding box of an empty mask");
    }
    BoundingBox b{m.width(), m.height(), -1, -1};
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (m.get(x, y)) {
                b.x0 = std::min(b.x0, x);
                b.y0 = std::min(b.y0, y);
                b.x1 = std::max(b.x1, x);
                b.y1 = std::max(b.y1, y);
            }
        }
    }
    return b;
}

namespace {

template <typename Pick>
RasterImage gray_rank(const RasterImage& gray, const StructuringElement& se, std::uint8_t init, Pick pick) {
    RasterImage out(gray.width(), gray.height(), 1);
    for (int y = 0; y < gray.height(); ++y) {
        for (int x = 0; x < gray.width(); ++x) {
            std::uint8_t v = init;
            for (const auto& o : se.offsets()) {
                const int sx = std::clamp(x + o.x, 0, gray.width() - 1);
                const int sy = std::clamp(y + o.y, 0, gray.height() - 1);
                v = pick(v, gray.at(sx, sy));
            }
            out.at(x, y) = v;
        }
    }
    return out;
}

}  // namespace

RasterImage gray_dilate(const RasterImage& gray, const StructuringElement& se) {
    require_gray(gray, "gray_dilate");
    return gray_rank(gray, se, 0, [](std::uint8_t a, std::uint8_t b) { return std::max(a, b); });
}

RasterImage gray_erode(const RasterImage& gray, const StructuringElement& se) {
    require_gray(gray, "gray_erode");
    return gray_rank(gray, se, 255, [](std::uint8_t a, std::uint8_t b) { return std::min(a, b); });
}

RasterImage gray_close(const RasterImage& gray, const StructuringElement& se) {
    return gray_erode(gray_dilate(gray, se), se);
}

}  // namespace lesion
