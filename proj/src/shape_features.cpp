#include "lesion/shape_features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>
#include <vector>

#include "lesion/error.hpp"
#include "lesion/morphology.hpp"

namespace lesion {

namespace {

void require_nonempty(const BinaryMask& m, const char* what) {
    if (m.empty()) {
        throw EmptyMaskError(std::string(what) + " of an empty mask");
    }
}

std::int64_t key(std::int64_t x, std::int64_t y) { return (x << 32) ^ (y & 0xFFFFFFFF); }

double mirror_score(const BinaryMask& m, Point2 c, double ux, double uy) {
    // Reflection about the line through c with unit direction u: p' = c + (2uu^T - I)(p - c).
    const double r00 = 2.0 * ux * ux - 1.0;
    const double r01 = 2.0 * ux * uy;
    const double r11 = 2.0 * uy * uy - 1.0;
    std::unordered_set<std::int64_t> mirrored;
    mirrored.reserve(m.count() * 2);
    std::size_t mirrored_in_mask = 0;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (!m.get(x, y)) {
                continue;
            }
            const double dx = x - c.x;
            const double dy = y - c.y;
            const auto mx = static_cast<std::int64_t>(std::lround(c.x + r00 * dx + r01 * dy));
            const auto my = static_cast<std::int64_t>(std::lround(c.y + r01 * dx + r11 * dy));
            if (mirrored.insert(key(mx, my)).second && m.get_or_background(static_cast<int>(mx), static_cast<int>(my))) {
                ++mirrored_in_mask;
            }
        }
    }
    // |m XOR R| = |m| + |R| - 2|m ∩ R|
    const double xor_count = static_cast<double>(m.count()) + static_cast<double>(mirrored.size()) -
                             2.0 * static_cast<double>(mirrored_in_mask);
    return xor_count / (2.0 * static_cast<double>(m.count()));
}

struct Vec {
    std::int64_t x, y;
};

std::int64_t cross(const Vec& o, const Vec& a, const Vec& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

double asymmetry(const BinaryMask& m) {
    require_nonempty(m, "asymmetry");
    const Point2 c = centroid(m);
    double mu20 = 0.0;
    double mu02 = 0.0;
    double mu11 = 0.0;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (m.get(x, y)) {
                const double dx = x - c.x;
                const double dy = y - c.y;
                mu20 += dx * dx;
                mu02 += dy * dy;
                mu11 += dx * dy;
            }
        }
    }
    const double theta = 0.5 * std::atan2(2.0 * mu11, mu20 - mu02);
    const double ux = std::cos(theta);
    const double uy = std::sin(theta);
    const double major = mirror_score(m, c, ux, uy);
    const double minor = mirror_score(m, c, -uy, ux);
    return 0.5 * (major + minor);
}

double compactness(const BinaryMask& m) {
    require_nonempty(m, "compactness");
    const double len = traced_contour_length(m);
    return len * len / (4.0 * std::numbers::pi * static_cast<double>(m.count()));
}

double radial_variance(const BinaryMask& m) {
    require_nonempty(m, "radial_variance");
    const auto boundary = boundary_pixels(m);
    if (boundary.size() < 8) {
        throw InsufficientSupport("radial_variance needs at least 8 boundary pixels");
    }
    const Point2 c = centroid(m);
    std::vector<double> r;
    r.reserve(boundary.size());
    for (const auto& p : boundary) {
        r.push_back(std::hypot(p.x - c.x, p.y - c.y));
    }
    double mean = 0.0;
    for (double v : r) {
        mean += v;
    }
    mean /= static_cast<double>(r.size());
    if (!(mean > 0.0)) {
        throw InsufficientSupport("radial_variance: boundary collapses onto the centroid");
    }
    double var = 0.0;
    for (double v : r) {
        var += (v - mean) * (v - mean);
    }
    var /= static_cast<double>(r.size());
    return var / (mean * mean);
}

double feret_diameter(const BinaryMask& m) {
    require_nonempty(m, "feret_diameter");
    const auto boundary = boundary_pixels(m);
    std::vector<Vec> pts;
    pts.reserve(boundary.size());
    for (const auto& p : boundary) {
        pts.push_back({p.x, p.y});
    }
    std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    if (pts.size() == 1) {
        return 0.0;
    }
    // Andrew's monotone chain
    std::vector<Vec> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) {
            --k;
        }
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) {
            --k;
        }
        hull[k++] = pts[i];
    }
    hull.resize(k > 1 ? k - 1 : k);

    std::int64_t best = 0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        for (std::size_t j = i + 1; j < hull.size(); ++j) {
            const std::int64_t dx = hull[i].x - hull[j].x;
            const std::int64_t dy = hull[i].y - hull[j].y;
            best = std::max(best, dx * dx + dy * dy);
        }
    }
    return std::sqrt(static_cast<double>(best));
}

}  // namespace lesion
