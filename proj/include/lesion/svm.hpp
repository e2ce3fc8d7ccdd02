#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lesion/features.hpp"

namespace lesion {

/// Per-column bounds used by scale_features.
struct ScalingBounds {
    std::vector<double> min;
    std::vector<double> max;
};

/// Column-wise min and max of `samples`; throws TrainingError on empty or ragged input.
ScalingBounds learn_bounds(const std::vector<std::vector<double>>& samples);

/// 2 (F - min) / (max - min) - 1, clamped to [-1, 1]; a column with max == min maps to 0.
double scale_value(double f, double min, double max);
std::vector<double> scale_features(std::span<const double> f, std::span<const double> min, std::span<const double> max);

struct SvmHyper {
    double C = 1.0;
    int epochs = 2000;
    double learning_rate = 0.5;
    /// Recorded with the model. The full-batch optimizer has no random state.
    std::uint64_t seed = 42;

    void validate() const;
};

struct LinearSvmModel {
    std::vector<std::string> selected;
    std::vector<double> weights;
    double bias = 0.0;
    std::vector<double> feature_min;
    std::vector<double> feature_max;
    double decision_lo = 0.0;
    double decision_hi = 1.0;
    SvmHyper hyper;

    /// Raw margin w.x + b of an already scaled vector.
    double decision(std::span<const double> scaled) const;
};

/**
 * lambda/2 |w|^2 + (1/n) sum max(0, 1 - y (w.x + b)) with lambda = 1 / (C n), y = +1 for label 1
 * (melanoma) and -1 for label 0. The bias is not regularized.
 */
double svm_objective(const std::vector<std::vector<double>>& x, const std::vector<int>& labels,
                     std::span<const double> w, double b, double C);

/**
 * @brief Minimizes svm_objective by full-batch subgradient descent.
 *
 * Starts from w = 0, b = 0 with step learning_rate / sqrt(t + 1) and returns the iterate with the
 * lowest objective. decision_lo/hi are the extreme training margins (hi = lo + 1 if they coincide).
 * Only weights, bias, calibration and hyper are filled in. Labels are 0/1; throws TrainingError
 * with fewer than 2 samples of either class or ragged vectors.
 */
LinearSvmModel train_svm(const std::vector<std::vector<double>>& samples, const std::vector<int>& labels,
                         const SvmHyper& hyper);

struct RfeStep {
    std::size_t removed;  // column index in the original input
    double abs_weight;
};

struct RfeResult {
    std::vector<std::size_t> selected;  // ascending column indices
    std::vector<RfeStep> trace;
};

/// Recursive elimination of the smallest-|w| column (ties: larger index) until target_count remain.
RfeResult svm_rfe(const std::vector<std::vector<double>>& samples, const std::vector<int>& labels,
                  const SvmHyper& hyper, std::size_t target_count);

struct SvmTrainingConfig {
    SvmHyper hyper;
    std::size_t rfe_target = 20;
};

struct SvmFit {
    LinearSvmModel model;
    std::vector<std::string> eliminated;  // in elimination order
};

/// Learns scaling bounds on all features, runs RFE and retrains on the survivors.
SvmFit fit_svm_model(const std::vector<FeatureVector>& samples, const std::vector<int>& labels,
                     const SvmTrainingConfig& cfg);

/// Selected features of `f`, scaled with the model bounds.
std::vector<double> svm_inputs(const LinearSvmModel& model, const FeatureVector& f);

/// Margin mapped through the calibration bounds and clamped to [0, 1].
double svm_probability(const LinearSvmModel& model, const FeatureVector& f);

}  // namespace lesion
