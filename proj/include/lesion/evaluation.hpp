#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lesion/config.hpp"
#include "lesion/features.hpp"
#include "lesion/risk.hpp"
#include "lesion/similarity.hpp"

namespace lesion {

/// Everything run_one learned about one record. `ok == false` means `failed_stage` and `error` are set.
struct RecordOutcome {
    std::string id;
    std::optional<int> label;
    bool ok = false;
    std::string failed_stage;
    std::string error;

    std::optional<SimilarityReport> sim_snake;
    std::optional<SimilarityReport> sim_watershed;
    std::optional<SimilarityReport> sim_merged;

    std::optional<FeatureVector> features;
    std::optional<LesionMeasurements> measurements;

    std::optional<double> prob_truth_mask_pct;
    std::optional<double> prob_merged_mask_pct;
    std::optional<RiskAssessment> assessment;
    std::optional<double> ann_output;
};

struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
    double accuracy() const;
};

struct RocPoint {
    double threshold;  // +inf for the (0, 0) start
    double fpr;
    double tpr;
};

/**
 * Threshold sweep over the distinct scores, highest first; a case is positive when its score is
 * >= the threshold. Starts at (0, 0) and ends at (1, 1). Needs at least one case of each class.
 */
std::vector<RocPoint> roc_curve(const std::vector<double>& scores, const std::vector<int>& labels);
/// Trapezoidal area under the curve.
double roc_auc(const std::vector<RocPoint>& roc);

struct EvaluationReport {
    std::vector<RecordOutcome> rows;  // id-sorted
    ConfusionMatrix confusion;
    std::vector<RocPoint> roc;  // empty when a class is missing
    std::optional<double> auc;
    double accuracy = 0.0;
    RocSource roc_source = RocSource::Ann;
    std::size_t failed = 0;
};

/// Aggregates labelled, successful rows; throws DataError when none is labelled and assessed.
EvaluationReport build_report(std::vector<RecordOutcome> rows, RocSource roc_source);

/// Fixed-point text with `decimals` digits, rounding the shortest decimal form half away from zero.
std::string format_fixed(double v, int decimals);

enum class ReportFormat { Csv, Markdown };
ReportFormat parse_report_format(const std::string& s);

/**
 * @brief Writes similarity.csv (omitted without truth masks), classification.csv, confusion.csv,
 * roc.csv, summary.txt and evaluation.json; Markdown adds report.md with the same tables.
 */
void report_write(const EvaluationReport& report, const std::filesystem::path& out_dir, ReportFormat format,
                  int precision = 1);

/// Per-method SSIM/Jaccard/Dice rows for records with a truth mask; returns false (no file) if none.
bool write_similarity_csv(const std::vector<RecordOutcome>& rows, const std::filesystem::path& path, int precision = 1);
void write_classification_csv(const std::vector<RecordOutcome>& rows, const std::filesystem::path& path,
                              int precision = 1);

std::string report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const std::string& text);

}  // namespace lesion
