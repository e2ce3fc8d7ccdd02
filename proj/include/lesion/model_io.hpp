#pragma once

#include <filesystem>
#include <string>

#include "lesion/mlp.hpp"
#include "lesion/svm.hpp"

namespace lesion {

inline constexpr int kModelFormatVersion = 1;

/// JSON text of the model, tagged with format version and feature registry hash.
std::string svm_model_to_json(const LinearSvmModel& m);
std::string mlp_model_to_json(const MlpModel& m);

/// Parse and validate; DataError on malformed content, a version or registry-hash mismatch.
LinearSvmModel svm_model_from_json(const std::string& text);
MlpModel mlp_model_from_json(const std::string& text);

void save_svm_model(const std::filesystem::path& path, const LinearSvmModel& m);
void save_mlp_model(const std::filesystem::path& path, const MlpModel& m);
LinearSvmModel load_svm_model(const std::filesystem::path& path);
MlpModel load_mlp_model(const std::filesystem::path& path);

}  // namespace lesion
