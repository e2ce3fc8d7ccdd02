#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "lesion/features.hpp"
#include "lesion/mlp.hpp"
#include "lesion/preprocess.hpp"
#include "lesion/segmentation.hpp"
#include "lesion/svm.hpp"

namespace lesion {

enum class RocSource { Cascade, Ann };

const char* to_string(RocSource s);
RocSource parse_roc_source(const std::string& s);

struct PipelineConfig {
    PreprocessConfig preprocess;
    SegmentationConfig segmentation;
    FeatureConfig features;
    SvmTrainingConfig svm;
    MlpHyper mlp;
    MaskMethod method = MaskMethod::Merged;
    RocSource roc_source = RocSource::Ann;
    int workers = 1;
    int report_precision = 1;

    /// Sets both classifier seeds.
    void set_seed(std::uint64_t seed);
    void validate() const;
};

/**
 * @brief Applies "key = value" lines to `cfg`.
 *
 * Keys are dotted (e.g. snake.alpha, svm.C); '#' starts a comment; blank lines are ignored.
 * Unknown keys and malformed values raise DataError naming the line.
 */
void apply_config(std::istream& in, PipelineConfig& cfg, const std::string& origin = "config");
PipelineConfig load_config(const std::filesystem::path& path);

/// All keys with their current values, in the format apply_config reads.
void write_config(std::ostream& out, const PipelineConfig& cfg);

}  // namespace lesion
