#pragma once

#include <optional>
#include <string>

#include "lesion/features.hpp"
#include "lesion/mlp.hpp"
#include "lesion/svm.hpp"

namespace lesion {

enum class RiskLevel { Low, Medium, High };
enum class RiskStage { Svm, Ann, Cascade };

const char* to_string(RiskLevel l);
const char* to_string(RiskStage s);

struct RiskAssessment {
    double probability_pct = 0.0;
    RiskLevel level = RiskLevel::Low;
    RiskStage stage = RiskStage::Svm;
    std::optional<double> ann_output;
};

inline constexpr double kHighRiskProbability = 0.40;
inline constexpr double kMediumRiskProbability = 0.30;
inline constexpr double kAnnHighOutput = 0.5;

/// [0, 0.30) Low, [0.30, 0.40) Medium, [0.40, 1] High.
RiskLevel svm_risk_level(double probability);
/// High when output >= 0.5, Low otherwise.
RiskLevel ann_risk_level(double output);

RiskAssessment svm_assess(const LinearSvmModel& model, const FeatureVector& f);

/// The eight network inputs: GLCM mean, correlation, homogeneity, contrast, energy, kurtosis and
/// dissimilarity averaged over the four offsets, then gray-channel skewness.
MlpInput ann_inputs(const FeatureVector& f);

/// Scales raw inputs with the model bounds and applies the 0.5 rule.
RiskAssessment mlp_assess(const MlpModel& model, const MlpInput& raw);

struct CascadeStats {
    std::size_t svm_calls = 0;
    std::size_t ann_calls = 0;
};

/// SVM first; Medium cases are settled by the network. Never returns Medium.
RiskAssessment cascade_assess(const LinearSvmModel& svm, const MlpModel& mlp, const FeatureVector& f,
                              CascadeStats* stats = nullptr);

}  // namespace lesion
