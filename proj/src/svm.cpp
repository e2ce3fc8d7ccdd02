#include "lesion/svm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lesion/error.hpp"

namespace lesion {

namespace {

double label_sign(int label) { return label == 1 ? 1.0 : -1.0; }

void check_training_set(const std::vector<std::vector<double>>& x, const std::vector<int>& labels) {
    if (x.size() != labels.size()) {
        throw TrainingError("sample and label counts differ");
    }
    if (x.empty() || x.front().empty()) {
        throw TrainingError("empty training set");
    }
    std::size_t pos = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i].size() != x.front().size()) {
            throw TrainingError("training vectors have different lengths");
        }
        if (labels[i] != 0 && labels[i] != 1) {
            throw TrainingError("labels must be 0 or 1");
        }
        pos += labels[i] == 1 ? 1 : 0;
    }
    if (pos < 2 || x.size() - pos < 2) {
        throw TrainingError("SVM training needs at least 2 samples of each class");
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

std::vector<std::vector<double>> select_columns(const std::vector<std::vector<double>>& x,
                                                const std::vector<std::size_t>& cols) {
    std::vector<std::vector<double>> out;
    out.reserve(x.size());
    for (const auto& row : x) {
        std::vector<double> r;
        r.reserve(cols.size());
        for (std::size_t c : cols) {
            r.push_back(row[c]);
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

ScalingBounds learn_bounds(const std::vector<std::vector<double>>& samples) {
    if (samples.empty()) {
        throw TrainingError("cannot learn scaling bounds from no samples");
    }
    ScalingBounds b{samples.front(), samples.front()};
    for (const auto& row : samples) {
        if (row.size() != b.min.size()) {
            throw TrainingError("training vectors have different lengths");
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            b.min[i] = std::min(b.min[i], row[i]);
            b.max[i] = std::max(b.max[i], row[i]);
        }
    }
    return b;
}

double scale_value(double f, double min, double max) {
    if (!(max > min)) {
        return 0.0;
    }
    const double p = 2.0 * (f - min) / (max - min) - 1.0;
    return std::clamp(p, -1.0, 1.0);
}

std::vector<double> scale_features(std::span<const double> f, std::span<const double> min,
                                   std::span<const double> max) {
    if (f.size() != min.size() || f.size() != max.size()) {
        throw std::invalid_argument("scale_features: bounds do not match the vector length");
    }
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        out[i] = scale_value(f[i], min[i], max[i]);
    }
    return out;
}

void SvmHyper::validate() const {
    if (!(C > 0.0) || !std::isfinite(C)) {
        throw std::invalid_argument("SVM C must be > 0");
    }
    if (epochs < 0) {
        throw std::invalid_argument("SVM epochs must be >= 0");
    }
    if (!(learning_rate > 0.0)) {
        throw std::invalid_argument("SVM learning rate must be > 0");
    }
}

double LinearSvmModel::decision(std::span<const double> scaled) const {
    if (scaled.size() != weights.size()) {
        throw std::invalid_argument("SVM input has the wrong length");
    }
    return dot(weights, scaled) + bias;
}

double svm_objective(const std::vector<std::vector<double>>& x, const std::vector<int>& labels,
                     std::span<const double> w, double b, double C) {
    const auto n = static_cast<double>(x.size());
    const double lambda = 1.0 / (C * n);
    double hinge = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        hinge += std::max(0.0, 1.0 - label_sign(labels[i]) * (dot(w, x[i]) + b));
    }
    return 0.5 * lambda * dot(w, w) + hinge / n;
}

LinearSvmModel train_svm(const std::vector<std::vector<double>>& samples, const std::vector<int>& labels,
                         const SvmHyper& hyper) {
    hyper.validate();
    check_training_set(samples, labels);
    const std::size_t d = samples.front().size();
    const auto n = static_cast<double>(samples.size());
    const double lambda = 1.0 / (hyper.C * n);

    std::vector<double> w(d, 0.0);
    double b = 0.0;
    std::vector<double> best_w = w;
    double best_b = b;
    double best_obj = svm_objective(samples, labels, w, b, hyper.C);
    std::vector<double> gw(d);

    for (int t = 0; t < hyper.epochs; ++t) {
        for (std::size_t j = 0; j < d; ++j) {
            gw[j] = 0.0;
        }
        double gb = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double y = label_sign(labels[i]);
            if (y * (dot(w, samples[i]) + b) < 1.0) {
                for (std::size_t j = 0; j < d; ++j) {
                    gw[j] -= y * samples[i][j];
                }
                gb -= y;
            }
        }
        const double eta = hyper.learning_rate / std::sqrt(static_cast<double>(t) + 1.0);
        for (std::size_t j = 0; j < d; ++j) {
            w[j] -= eta * (lambda * w[j] + gw[j] / n);
        }
        b -= eta * gb / n;

        const double obj = svm_objective(samples, labels, w, b, hyper.C);
        if (obj < best_obj) {
            best_obj = obj;
            best_w = w;
            best_b = b;
        }
    }

    LinearSvmModel m;
    m.weights = std::move(best_w);
    m.bias = best_b;
    m.hyper = hyper;
    double lo = m.decision(samples.front());
    double hi = lo;
    for (const auto& row : samples) {
        const double v = m.decision(row);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    m.decision_lo = lo;
    m.decision_hi = hi > lo ? hi : lo + 1.0;
    return m;
}

RfeResult svm_rfe(const std::vector<std::vector<double>>& samples, const std::vector<int>& labels,
                  const SvmHyper& hyper, std::size_t target_count) {
    check_training_set(samples, labels);
    const std::size_t d = samples.front().size();
    if (target_count < 1 || target_count >= d) {
        throw std::invalid_argument("RFE target must be in [1, feature count)");
    }
    RfeResult r;
    for (std::size_t i = 0; i < d; ++i) {
        r.selected.push_back(i);
    }
    while (r.selected.size() > target_count) {
        const LinearSvmModel m = train_svm(select_columns(samples, r.selected), labels, hyper);
        std::size_t victim = 0;
        for (std::size_t k = 1; k < r.selected.size(); ++k) {
            // Ascending column order, so <= hands ties to the larger index.
            if (std::abs(m.weights[k]) <= std::abs(m.weights[victim])) {
                victim = k;
            }
        }
        r.trace.push_back({r.selected[victim], std::abs(m.weights[victim])});
        r.selected.erase(r.selected.begin() + static_cast<std::ptrdiff_t>(victim));
    }
    return r;
}

SvmFit fit_svm_model(const std::vector<FeatureVector>& samples, const std::vector<int>& labels,
                     const SvmTrainingConfig& cfg) {
    std::vector<std::vector<double>> raw;
    raw.reserve(samples.size());
    for (const auto& f : samples) {
        raw.emplace_back(f.values.begin(), f.values.end());
    }
    const ScalingBounds bounds = learn_bounds(raw);
    std::vector<std::vector<double>> scaled;
    scaled.reserve(raw.size());
    for (const auto& row : raw) {
        scaled.push_back(scale_features(row, bounds.min, bounds.max));
    }

    SvmFit fit;
    std::vector<std::size_t> selected;
    if (cfg.rfe_target >= kFeatureCount) {
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            selected.push_back(i);
        }
    } else {
        RfeResult rfe = svm_rfe(scaled, labels, cfg.hyper, cfg.rfe_target);
        selected = std::move(rfe.selected);
        for (const auto& step : rfe.trace) {
            fit.eliminated.push_back(feature_names()[step.removed]);
        }
    }
    fit.model = train_svm(select_columns(scaled, selected), labels, cfg.hyper);
    for (std::size_t c : selected) {
        fit.model.selected.push_back(feature_names()[c]);
        fit.model.feature_min.push_back(bounds.min[c]);
        fit.model.feature_max.push_back(bounds.max[c]);
    }
    return fit;
}

std::vector<double> svm_inputs(const LinearSvmModel& model, const FeatureVector& f) {
    std::vector<double> raw;
    raw.reserve(model.selected.size());
    for (const auto& name : model.selected) {
        std::size_t idx;
        try {
            idx = feature_index(name);
        } catch (const std::out_of_range&) {
            throw DataError("SVM model references unknown feature '" + name + "'");
        }
        raw.push_back(f[idx]);
    }
    return scale_features(raw, model.feature_min, model.feature_max);
}

double svm_probability(const LinearSvmModel& model, const FeatureVector& f) {
    const double raw = model.decision(svm_inputs(model, f));
    return std::clamp((raw - model.decision_lo) / (model.decision_hi - model.decision_lo), 0.0, 1.0);
}

}  // namespace lesion
