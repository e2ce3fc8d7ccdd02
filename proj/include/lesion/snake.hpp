#pragma once

#include <vector>

#include "lesion/filters.hpp"
#include "lesion/raster.hpp"

namespace lesion {

/// Weights of the discrete snake energy.
struct EnergyWeights {
    double alpha = 1.0;  ///< spacing (continuity)
    double beta = 1.0;   ///< curvature
    double w_img = 1.2;  ///< edge attraction
    double w_con = 0.2;  ///< balloon pressure; positive deflates, negative inflates

    void validate() const;
};

/// Closed polygon of subpixel points (the last point connects back to the first).
class SnakeContour {
public:
    /// Throws DegenerateContour with fewer than 8 points or with consecutive duplicates.
    explicit SnakeContour(std::vector<Point2> points);

    const std::vector<Point2>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }

    /// Throws std::out_of_range when a point lies outside [0,w-1] x [0,h-1].
    void check_bounds(int width, int height) const;

    /// Absolute shoelace area.
    double area() const;

    /// n points on a circle, starting at angle 0 and running counter-clockwise on screen.
    static SnakeContour circle(Point2 center, double radius, std::size_t n);

private:
    std::vector<Point2> points_;
};

/// Normalized edge strength |grad I| / max |grad I| of the Gaussian-smoothed image, in [0,1].
struct EdgeField {
    ScalarField strength;

    static EdgeField from_gray(const RasterImage& gray, double sigma);
    int width() const { return strength.width; }
    int height() const { return strength.height; }
};

struct SnakeEnergyTerms {
    double continuity = 0.0;  // sum ((d_i - dbar) / dbar)^2
    double curvature = 0.0;   // sum |v_{i-1} - 2 v_i + v_{i+1}|^2 / dbar^4
    double image = 0.0;       // -sum edge(v_i)^2
    double constraint = 0.0;  // (N / 2) sqrt(|area| / pi)

    double total(const EnergyWeights& w) const {
        return w.alpha * continuity + w.beta * curvature + w.w_img * image + w.w_con * constraint;
    }
};

/**
 * Unweighted energy terms. dbar is the mean distance between consecutive points, recomputed on
 * every call. The constraint term is N/2 times the radius of the circle with the enclosed area; it
 * depends on area alone, so jagged contours gain nothing from it, and moving one point a pixel
 * along its normal changes it by about one half.
 */
SnakeEnergyTerms snake_energy_terms(const SnakeContour& c, const EdgeField& edges);

double snake_energy(const SnakeContour& c, const EdgeField& edges, const EnergyWeights& w);

/// Convenience overload building the edge field with sigma 2.
double snake_energy(const SnakeContour& c, const RasterImage& gray, const EnergyWeights& w);

struct SnakeConfig {
    EnergyWeights weights;
    int max_iter = 300;
    double tol = 0.02;
    double sigma = 2.0;
    int resample_every = 5;
    /// Target spacing between initial contour points, in pixels.
    double point_spacing = 4.0;

    void validate() const;
};

struct SnakeResult {
    SnakeContour contour;
    BinaryMask mask;
    int iterations = 0;
    bool converged = false;
    /// energy_trace[0] is the initial energy, entry k the energy after iteration k.
    std::vector<double> energy_trace;
};

/**
 * @brief Greedy minimization.
 *
 * Each iteration visits the points in order and moves each to the lowest-energy position in its
 * 3x3 pixel neighbourhood (ties keep the point in place). Every `resample_every` iterations the
 * contour is redistributed to uniform arc length, and the redistribution is kept only when it
 * does not raise the energy, so the energy never increases. Stops when fewer than tol*N points
 * moved or after max_iter iterations. Throws DegenerateContour when the enclosed area falls
 * below 10 px^2.
 */
SnakeResult snake_evolve(const RasterImage& gray, const SnakeContour& init, const SnakeConfig& cfg);

/// Runs snake_evolve and returns the scan-filled mask.
BinaryMask snake_segment(const RasterImage& gray, const SnakeContour& init, const EnergyWeights& w, int max_iter,
                         double tol);

/**
 * Circle around the Otsu dark region centroid with 1.2x its equivalent radius, or a circle of
 * radius 0.45*min(w,h) at the image centre when no dark region exists. The radius is clipped so
 * the circle stays inside the image.
 */
SnakeContour initial_contour(const RasterImage& gray, double sigma, double point_spacing);

/// Scan-line fill: a pixel is set when its centre lies inside the polygon (even-odd rule).
BinaryMask rasterize_polygon(const std::vector<Point2>& poly, int width, int height);

}  // namespace lesion
