#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lesion {

enum class DataSource { Ph2, Dermis, Dermquest, Custom };

const char* to_string(DataSource s);
DataSource parse_data_source(const std::string& s);

inline constexpr int kMelanoma = 1;
inline constexpr int kNonMelanoma = 0;

struct DatasetRecord {
    std::string id;
    std::filesystem::path image_path;
    std::optional<std::filesystem::path> truth_mask_path;
    std::optional<int> label;  // kMelanoma or kNonMelanoma
    DataSource source = DataSource::Custom;
};

struct IngestResult {
    std::vector<DatasetRecord> records;
    std::vector<std::string> warnings;
};

/**
 * @brief CSV manifest with header id,image,mask,label; mask and label may be empty.
 *
 * Paths are relative to the manifest's directory. Labels: melanoma/1 or non-melanoma/benign/0.
 * Throws DataError naming the line for missing files, bad labels or duplicate ids, and when no
 * record remains.
 */
IngestResult read_manifest(const std::filesystem::path& manifest, DataSource source = DataSource::Custom);

/**
 * PH2 layout: PH2_dataset.txt ("||"-separated, Name and Clinical Diagnosis columns; 2 = melanoma)
 * next to case folders IMDxxx/IMDxxx_Dermoscopic_Image/IMDxxx.bmp and IMDxxx/IMDxxx_lesion/IMDxxx_lesion.bmp,
 * either directly under `root` or under "PH2 Dataset images". Cases missing on either side are
 * skipped with a warning.
 */
IngestResult ingest_ph2(const std::filesystem::path& root);

/// PH2 uses its own layout; every other source reads `manifest` (default: root/manifest.csv).
IngestResult ingest(const std::filesystem::path& root, DataSource source,
                    const std::optional<std::filesystem::path>& manifest = std::nullopt);

}  // namespace lesion
