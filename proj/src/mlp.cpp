#include "lesion/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "lesion/error.hpp"
#include "lesion/svm.hpp"

namespace lesion {

namespace {

struct Activations {
    std::array<double, kMlpHidden> hidden{};
    double output = 0.0;
};

Activations forward_pass(const MlpModel& m, std::span<const double> x) {
    Activations a;
    for (std::size_t h = 0; h < kMlpHidden; ++h) {
        double z = m.b1[h];
        for (std::size_t i = 0; i < kMlpInputs; ++i) {
            z += m.w1[i][h] * x[i];
        }
        a.hidden[h] = sigmoid(z);
    }
    double z = m.b2;
    for (std::size_t h = 0; h < kMlpHidden; ++h) {
        z += m.w2[h] * a.hidden[h];
    }
    a.output = sigmoid(z);
    return a;
}

// 53 random mantissa bits mapped onto [0, 1); independent of the standard library's distributions.
double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void check_training_set(const std::vector<MlpInput>& x, const std::vector<int>& labels) {
    if (x.empty()) {
        throw TrainingError("MLP training set is empty");
    }
    if (x.size() != labels.size()) {
        throw TrainingError("sample and label counts differ");
    }
    bool seen[2] = {false, false};
    for (int l : labels) {
        if (l != 0 && l != 1) {
            throw TrainingError("labels must be 0 or 1");
        }
        seen[l] = true;
    }
    if (!seen[0] || !seen[1]) {
        throw TrainingError("MLP training needs at least one sample of each class");
    }
}

}  // namespace

void MlpHyper::validate() const {
    if (!(learning_rate > 0.0)) {
        throw std::invalid_argument("MLP learning rate must be > 0");
    }
    if (epochs < 0) {
        throw std::invalid_argument("MLP epochs must be >= 0");
    }
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double mlp_forward(const MlpModel& model, std::span<const double> x) {
    if (x.size() != kMlpInputs) {
        throw std::invalid_argument("MLP expects exactly 8 inputs");
    }
    return forward_pass(model, x).output;
}

MlpModel mlp_initialize(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    MlpModel m;
    for (auto& row : m.w1) {
        for (double& w : row) {
            w = unit_double(rng) - 0.5;
        }
    }
    for (double& b : m.b1) {
        b = unit_double(rng) - 0.5;
    }
    for (double& w : m.w2) {
        w = unit_double(rng) - 0.5;
    }
    m.b2 = unit_double(rng) - 0.5;
    m.input_min.fill(-1.0);
    m.input_max.fill(1.0);
    m.hyper.seed = seed;
    return m;
}

double mlp_loss(const MlpModel& model, const std::vector<MlpInput>& x, const std::vector<int>& labels) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double e = forward_pass(model, x[k]).output - labels[k];
        s += e * e;
    }
    return s / static_cast<double>(x.size());
}

MlpModel mlp_gradient(const MlpModel& model, const std::vector<MlpInput>& x, const std::vector<int>& labels) {
    MlpModel g{};
    const double scale = 2.0 / static_cast<double>(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const Activations a = forward_pass(model, x[k]);
        const double delta_out = scale * (a.output - labels[k]) * a.output * (1.0 - a.output);
        g.b2 += delta_out;
        for (std::size_t h = 0; h < kMlpHidden; ++h) {
            g.w2[h] += delta_out * a.hidden[h];
            const double delta_h = delta_out * model.w2[h] * a.hidden[h] * (1.0 - a.hidden[h]);
            g.b1[h] += delta_h;
            for (std::size_t i = 0; i < kMlpInputs; ++i) {
                g.w1[i][h] += delta_h * x[k][i];
            }
        }
    }
    return g;
}

MlpModel train_mlp(const std::vector<MlpInput>& x, const std::vector<int>& labels, const MlpHyper& hyper) {
    hyper.validate();
    check_training_set(x, labels);
    MlpModel m = mlp_initialize(hyper.seed);
    m.hyper = hyper;
    const double lr = hyper.learning_rate;
    for (int e = 0; e < hyper.epochs; ++e) {
        const MlpModel g = mlp_gradient(m, x, labels);
        for (std::size_t i = 0; i < kMlpInputs; ++i) {
            for (std::size_t h = 0; h < kMlpHidden; ++h) {
                m.w1[i][h] -= lr * g.w1[i][h];
            }
        }
        for (std::size_t h = 0; h < kMlpHidden; ++h) {
            m.b1[h] -= lr * g.b1[h];
            m.w2[h] -= lr * g.w2[h];
        }
        m.b2 -= lr * g.b2;
    }
    return m;
}

MlpInput mlp_scale_input(const MlpModel& model, const MlpInput& raw) {
    MlpInput out;
    for (std::size_t i = 0; i < kMlpInputs; ++i) {
        out[i] = scale_value(raw[i], model.input_min[i], model.input_max[i]);
    }
    return out;
}

MlpModel fit_mlp_model(const std::vector<MlpInput>& raw, const std::vector<int>& labels, const MlpHyper& hyper) {
    check_training_set(raw, labels);
    MlpModel bounds_only;
    bounds_only.input_min = raw.front();
    bounds_only.input_max = raw.front();
    for (const auto& r : raw) {
        for (std::size_t i = 0; i < kMlpInputs; ++i) {
            bounds_only.input_min[i] = std::min(bounds_only.input_min[i], r[i]);
            bounds_only.input_max[i] = std::max(bounds_only.input_max[i], r[i]);
        }
    }
    std::vector<MlpInput> scaled;
    scaled.reserve(raw.size());
    for (const auto& r : raw) {
        scaled.push_back(mlp_scale_input(bounds_only, r));
    }
    MlpModel m = train_mlp(scaled, labels, hyper);
    m.input_min = bounds_only.input_min;
    m.input_max = bounds_only.input_max;
    return m;
}

}  // namespace lesion
