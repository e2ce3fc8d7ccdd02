#include "lesion/snake.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lesion/error.hpp"
#include "lesion/morphology.hpp"
#include "lesion/watershed.hpp"

namespace lesion {

namespace {

constexpr double kMinArea = 10.0;

double dist(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool has_consecutive_duplicates(const std::vector<Point2>& p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == p[(i + 1) % p.size()]) {
            return true;
        }
    }
    return false;
}

double shoelace(const std::vector<Point2>& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Point2& a = p[i];
        const Point2& b = p[(i + 1) % p.size()];
        s += a.x * b.y - b.x * a.y;
    }
    return 0.5 * s;
}

std::vector<Point2> resample_uniform(const std::vector<Point2>& p) {
    const std::size_t n = p.size();
    std::vector<double> cum(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        cum[i + 1] = cum[i] + dist(p[i], p[(i + 1) % n]);
    }
    const double total = cum[n];
    std::vector<Point2> out;
    out.reserve(n);
    std::size_t seg = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double target = total * static_cast<double>(k) / static_cast<double>(n);
        while (seg + 1 < n && cum[seg + 1] <= target) {
            ++seg;
        }
        const double len = cum[seg + 1] - cum[seg];
        const double t = len > 0.0 ? (target - cum[seg]) / len : 0.0;
        const Point2& a = p[seg];
        const Point2& b = p[(seg + 1) % n];
        out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
    return out;
}

}  // namespace

void EnergyWeights::validate() const {
    if (alpha < 0.0 || beta < 0.0 || w_img < 0.0) {
        throw std::invalid_argument("snake weights alpha, beta and w_img must be >= 0");
    }
}

SnakeContour::SnakeContour(std::vector<Point2> points) : points_(std::move(points)) {
    if (points_.size() < 8) {
        throw DegenerateContour("snake contour needs at least 8 points, got " + std::to_string(points_.size()));
    }
    if (has_consecutive_duplicates(points_)) {
        throw DegenerateContour("snake contour has consecutive duplicate points");
    }
}

void SnakeContour::check_bounds(int width, int height) const {
    for (const auto& p : points_) {
        if (!(p.x >= 0.0 && p.y >= 0.0 && p.x <= width - 1 && p.y <= height - 1)) {
            throw std::out_of_range("snake point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                                    ") lies outside the image");
        }
    }
}

double SnakeContour::area() const { return std::abs(shoelace(points_)); }

SnakeContour SnakeContour::circle(Point2 center, double radius, std::size_t n) {
    std::vector<Point2> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        pts.push_back({center.x + radius * std::cos(t), center.y - radius * std::sin(t)});
    }
    return SnakeContour(std::move(pts));
}

EdgeField EdgeField::from_gray(const RasterImage& gray, double sigma) {
    ScalarField g = gradient_magnitude(gaussian_blur(to_field(gray), sigma));
    const double gmax = *std::max_element(g.values.begin(), g.values.end());
    if (gmax > 0.0) {
        for (double& v : g.values) {
            v /= gmax;
        }
    }
    return {std::move(g)};
}

SnakeEnergyTerms snake_energy_terms(const SnakeContour& c, const EdgeField& edges) {
    c.check_bounds(edges.width(), edges.height());
    const auto& p = c.points();
    const std::size_t n = p.size();

    double dsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        dsum += dist(p[i], p[(i + n - 1) % n]);
    }
    const double dbar = dsum / static_cast<double>(n);
    if (!(dbar > 0.0)) {
        throw DegenerateContour("snake contour has zero length");
    }
    const double dbar2 = dbar * dbar;

    SnakeEnergyTerms t;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& prev = p[(i + n - 1) % n];
        const Point2& cur = p[i];
        const Point2& next = p[(i + 1) % n];
        const double rel = (dist(cur, prev) - dbar) / dbar;
        t.continuity += rel * rel;
        const double cx = prev.x - 2.0 * cur.x + next.x;
        const double cy = prev.y - 2.0 * cur.y + next.y;
        t.curvature += (cx * cx + cy * cy) / (dbar2 * dbar2);
        const double g = edges.strength.sample(cur.x, cur.y);
        t.image -= g * g;
    }
    // Equivalent-circle radius times N/2: one vertex moving inward by 1 px lowers it by about 1/2.
    t.constraint = 0.5 * static_cast<double>(n) * std::sqrt(std::abs(shoelace(p)) / std::numbers::pi);
    return t;
}

double snake_energy(const SnakeContour& c, const EdgeField& edges, const EnergyWeights& w) {
    return snake_energy_terms(c, edges).total(w);
}

double snake_energy(const SnakeContour& c, const RasterImage& gray, const EnergyWeights& w) {
    return snake_energy(c, EdgeField::from_gray(gray, 2.0), w);
}

void SnakeConfig::validate() const {
    weights.validate();
    if (max_iter < 1) {
        throw std::invalid_argument("snake max_iter must be >= 1");
    }
    if (!(tol > 0.0 && tol < 1.0)) {
        throw std::invalid_argument("snake tol must lie in (0, 1)");
    }
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("snake sigma must be > 0");
    }
    if (resample_every < 1) {
        throw std::invalid_argument("snake resample_every must be >= 1");
    }
    if (!(point_spacing > 0.0)) {
        throw std::invalid_argument("snake point_spacing must be > 0");
    }
}

SnakeResult snake_evolve(const RasterImage& gray, const SnakeContour& init, const SnakeConfig& cfg) {
    cfg.validate();
    if (gray.channels() != 1) {
        throw std::invalid_argument("snake expects a single-channel image");
    }
    const int w = gray.width();
    const int h = gray.height();
    init.check_bounds(w, h);
    const EdgeField edges = EdgeField::from_gray(gray, cfg.sigma);

    std::vector<Point2> pts = init.points();
    const std::size_t n = pts.size();
    auto energy_of = [&](const std::vector<Point2>& q) {
        return snake_energy_terms(SnakeContour(q), edges).total(cfg.weights);
    };

    SnakeResult res{init, BinaryMask(w, h), 0, false, {}};
    double energy = energy_of(pts);
    res.energy_trace.push_back(energy);

    for (int it = 1; it <= cfg.max_iter; ++it) {
        const double before = energy;
        std::size_t moved = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 orig = pts[i];
            const Point2& prev = pts[(i + n - 1) % n];
            const Point2& next = pts[(i + 1) % n];
            double best = energy;
            Point2 best_pos = orig;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) {
                        continue;
                    }
                    const Point2 cand{orig.x + dx, orig.y + dy};
                    if (cand.x < 0.0 || cand.y < 0.0 || cand.x > w - 1 || cand.y > h - 1 || cand == prev ||
                        cand == next) {
                        continue;
                    }
                    pts[i] = cand;
                    const double e = energy_of(pts);
                    if (e < best) {
                        best = e;
                        best_pos = cand;
                    }
                }
            }
            pts[i] = best_pos;
            if (!(best_pos == orig)) {
                energy = best;
                ++moved;
            }
        }

        if (std::abs(shoelace(pts)) < kMinArea) {
            throw DegenerateContour("snake collapsed below " + std::to_string(kMinArea) + " px^2");
        }
        const bool done = static_cast<double>(moved) < cfg.tol * static_cast<double>(n);
        if (!done && it % cfg.resample_every == 0) {
            auto resampled = resample_uniform(pts);
            if (!has_consecutive_duplicates(resampled)) {
                const double e = energy_of(resampled);
                if (e <= energy) {
                    pts = std::move(resampled);
                    energy = e;
                }
            }
        }
        if (energy > before) {
            throw std::logic_error("snake energy increased during an iteration");
        }
        res.energy_trace.push_back(energy);
        res.iterations = it;
        if (done) {
            res.converged = true;
            break;
        }
    }

    res.contour = SnakeContour(pts);
    res.mask = rasterize_polygon(pts, w, h);
    return res;
}

BinaryMask snake_segment(const RasterImage& gray, const SnakeContour& init, const EnergyWeights& w, int max_iter,
                         double tol) {
    SnakeConfig cfg;
    cfg.weights = w;
    cfg.max_iter = max_iter;
    cfg.tol = tol;
    return snake_evolve(gray, init, cfg).mask;
}

SnakeContour initial_contour(const RasterImage& gray, double sigma, double point_spacing) {
    const int w = gray.width();
    const int h = gray.height();
    Point2 center{(w - 1) / 2.0, (h - 1) / 2.0};
    double radius = 0.45 * std::min(w, h);
    try {
        const BinaryMask dark = otsu_dark_region(gray, sigma);
        center = centroid(dark);
        radius = 1.2 * std::sqrt(static_cast<double>(dark.count()) / std::numbers::pi);
    } catch (const NoLesionFound&) {
        // keep the image-centre fallback
    }
    const double room = std::min({center.x, center.y, (w - 1) - center.x, (h - 1) - center.y});
    radius = std::min(radius, room);
    if (radius < 2.0) {
        throw DegenerateContour("no room for an initial contour");
    }
    const auto n = static_cast<std::size_t>(
        std::clamp(std::lround(2.0 * std::numbers::pi * radius / point_spacing), 16L, 200L));
    return SnakeContour::circle(center, radius, n);
}

BinaryMask rasterize_polygon(const std::vector<Point2>& poly, int width, int height) {
    BinaryMask m(width, height);
    const std::size_t n = poly.size();
    std::vector<double> xs;
    for (int y = 0; y < height; ++y) {
        xs.clear();
        const double yc = y;
        for (std::size_t i = 0; i < n; ++i) {
            const Point2& a = poly[i];
            const Point2& b = poly[(i + 1) % n];
            if ((a.y <= yc && yc < b.y) || (b.y <= yc && yc < a.y)) {
                xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
            }
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            const int x0 = std::max(0, static_cast<int>(std::ceil(xs[k])));
            const int x1 = std::min(width - 1, static_cast<int>(std::ceil(xs[k + 1])) - 1);
            for (int x = x0; x <= x1; ++x) {
                m.set(x, y, true);
            }
        }
    }
    return m;
}

}  // namespace lesion
