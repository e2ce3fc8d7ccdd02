#include "lesion/risk.hpp"

#include <array>
#include <string_view>

namespace lesion {

const char* to_string(RiskLevel l) {
    switch (l) {
        case RiskLevel::Low:
            return "low";
        case RiskLevel::Medium:
            return "medium";
        case RiskLevel::High:
            return "high";
    }
    return "?";
}

const char* to_string(RiskStage s) {
    switch (s) {
        case RiskStage::Svm:
            return "svm";
        case RiskStage::Ann:
            return "ann";
        case RiskStage::Cascade:
            return "cascade";
    }
    return "?";
}

RiskLevel svm_risk_level(double probability) {
    if (probability >= kHighRiskProbability) {
        return RiskLevel::High;
    }
    if (probability >= kMediumRiskProbability) {
        return RiskLevel::Medium;
    }
    return RiskLevel::Low;
}

RiskLevel ann_risk_level(double output) { return output >= kAnnHighOutput ? RiskLevel::High : RiskLevel::Low; }

RiskAssessment svm_assess(const LinearSvmModel& model, const FeatureVector& f) {
    const double p = svm_probability(model, f);
    RiskAssessment r;
    r.probability_pct = 100.0 * p;
    r.level = svm_risk_level(p);
    r.stage = RiskStage::Svm;
    return r;
}

MlpInput ann_inputs(const FeatureVector& f) {
    constexpr std::array<std::string_view, 7> stats = {"mean",   "correlation", "homogeneity",  "contrast",
                                                       "energy", "kurtosis",    "dissimilarity"};
    const auto& names = GlcmStats::names();
    MlpInput x{};
    for (std::size_t s = 0; s < stats.size(); ++s) {
        std::size_t stat_pos = 0;
        while (names[stat_pos] != stats[s]) {
            ++stat_pos;
        }
        double sum = 0.0;
        for (std::size_t o = 0; o < kGlcmOffsetCount; ++o) {
            sum += f[kGlcmFeatureBegin + o * GlcmStats::kCount + stat_pos];
        }
        x[s] = sum / static_cast<double>(kGlcmOffsetCount);
    }
    x[7] = f.get("gray_skewness");
    return x;
}

RiskAssessment mlp_assess(const MlpModel& model, const MlpInput& raw) {
    const double out = mlp_forward(model, mlp_scale_input(model, raw));
    RiskAssessment r;
    r.probability_pct = 100.0 * out;
    r.level = ann_risk_level(out);
    r.stage = RiskStage::Ann;
    r.ann_output = out;
    return r;
}

RiskAssessment cascade_assess(const LinearSvmModel& svm, const MlpModel& mlp, const FeatureVector& f,
                              CascadeStats* stats) {
    if (stats) {
        ++stats->svm_calls;
    }
    RiskAssessment first = svm_assess(svm, f);
    if (first.level != RiskLevel::Medium) {
        return first;
    }
    if (stats) {
        ++stats->ann_calls;
    }
    RiskAssessment second = mlp_assess(mlp, ann_inputs(f));
    second.stage = RiskStage::Cascade;
    return second;
}

}  // namespace lesion
