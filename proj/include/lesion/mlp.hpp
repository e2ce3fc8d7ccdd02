#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace lesion {

inline constexpr std::size_t kMlpInputs = 8;
inline constexpr std::size_t kMlpHidden = 10;

using MlpInput = std::array<double, kMlpInputs>;

struct MlpHyper {
    double learning_rate = 0.5;
    int epochs = 5000;
    std::uint64_t seed = 42;

    void validate() const;
    friend bool operator==(const MlpHyper&, const MlpHyper&) = default;
};

/// 8-10-1 network with logistic activations.
struct MlpModel {
    std::array<std::array<double, kMlpHidden>, kMlpInputs> w1{};  // w1[input][hidden]
    std::array<double, kMlpHidden> b1{};
    std::array<double, kMlpHidden> w2{};
    double b2 = 0.0;
    /// Scaling bounds for the raw inputs, learned at training time.
    MlpInput input_min{};
    MlpInput input_max{};
    MlpHyper hyper;

    friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

double sigmoid(double z);

/// sigmoid(w2 . sigmoid(w1^T x + b1) + b2); throws std::invalid_argument unless x has 8 entries.
double mlp_forward(const MlpModel& model, std::span<const double> x);

/// Weights drawn uniformly from [-0.5, 0.5] in a fixed order from a mt19937_64 seeded with `seed`.
MlpModel mlp_initialize(std::uint64_t seed);

/// Mean squared error (1/n) sum (o - t)^2.
double mlp_loss(const MlpModel& model, const std::vector<MlpInput>& x, const std::vector<int>& labels);

/// Gradient of mlp_loss, laid out like the weights of an MlpModel (bounds and hyper unused).
MlpModel mlp_gradient(const MlpModel& model, const std::vector<MlpInput>& x, const std::vector<int>& labels);

/**
 * @brief Full-batch gradient descent on mlp_loss from mlp_initialize(hyper.seed).
 *
 * Inputs are used as given (already scaled). Throws TrainingError on empty input, label/sample
 * count mismatch, labels other than 0/1 or a missing class.
 */
MlpModel train_mlp(const std::vector<MlpInput>& x, const std::vector<int>& labels, const MlpHyper& hyper);

/// Learns input bounds on raw inputs, scales them to [-1, 1] and trains.
MlpModel fit_mlp_model(const std::vector<MlpInput>& raw, const std::vector<int>& labels, const MlpHyper& hyper);

/// Raw inputs scaled with the model's stored bounds.
MlpInput mlp_scale_input(const MlpModel& model, const MlpInput& raw);

}  // namespace lesion
