#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lesion/config.hpp"
#include "lesion/dataset.hpp"
#include "lesion/evaluation.hpp"
#include "lesion/mlp.hpp"
#include "lesion/svm.hpp"

namespace lesion {

struct TrainedModels {
    LinearSvmModel svm;
    MlpModel mlp;
};

inline constexpr const char* kSvmModelFile = "svm_model.json";
inline constexpr const char* kMlpModelFile = "mlp_model.json";

/// Loads svm_model.json and mlp_model.json from `dir`.
TrainedModels load_models(const std::filesystem::path& dir);

/// Gray images are replicated into three channels; RGB passes through.
RasterImage to_rgb(const RasterImage& img);

/// Input image with the boundary pixels of `m` painted green.
RasterImage draw_overlay(const RasterImage& rgb, const BinaryMask& m);

/**
 * @brief Runs one record through preprocessing, segmentation, similarity, features and (with
 * models) the cascade.
 *
 * Stage errors never escape: the outcome carries the stage name and message instead. With an output
 * directory, masks, overlay and a feature row are written to out_dir/<id>/. `segmentation_only`
 * stops after similarity.
 */
RecordOutcome run_one(const DatasetRecord& rec, const PipelineConfig& cfg, const TrainedModels* models,
                      const std::optional<std::filesystem::path>& out_dir, bool segmentation_only = false);

/// run_one over all records on cfg.workers threads; the result is sorted by id.
std::vector<RecordOutcome> run_batch(const std::vector<DatasetRecord>& records, const PipelineConfig& cfg,
                                     const TrainedModels* models, const std::optional<std::filesystem::path>& out_dir,
                                     bool segmentation_only = false);

struct TrainingResult {
    TrainedModels models;
    std::vector<std::string> eliminated;  // RFE order
    std::vector<RecordOutcome> outcomes;  // feature extraction per record
};

/**
 * Extracts features (in parallel), then trains the SVM (RFE + final fit) and the network
 * single-threaded on the labelled, successful records. Throws TrainingError with fewer than two
 * usable records per class. With `out_dir`, writes both model files, training_features.csv and
 * rfe_trace.csv there.
 */
TrainingResult train_models(const std::vector<DatasetRecord>& records, const PipelineConfig& cfg,
                            const std::optional<std::filesystem::path>& out_dir);

/// Batch run with models, aggregated into a report (not written).
EvaluationReport evaluate(const std::vector<DatasetRecord>& records, const PipelineConfig& cfg,
                          const TrainedModels& models, const std::optional<std::filesystem::path>& out_dir);

}  // namespace lesion
